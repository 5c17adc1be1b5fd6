import json
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from expandergauge.characters import character_table
from expandergauge.families import (affine, alt, cyclic, dihedral, direct_power, direct_product, sym,
                                    wreath_cyclic)
from expandergauge.growth import (ab_growth, ab_profile, bab_table, check_eq2, decompose_action,
                                  growth_profile, hrv_margin, lw_constant, lw_constant_relative,
                                  lw_witness, nilpotent_index_ratio, orbital_count, ratio_check,
                                  relative_ab, relative_records, rep_growth, rep_growth_action,
                                  wreath_ratio_formula)
from expandergauge.perm import GroupAction

SMALL = [cyclic(6), dihedral(4), dihedral(5), sym(4), alt(4), affine(5), affine(7), wreath_cyclic(2)]


def oracle_ab(G, k):
    elems = oracles.closure([g.images for g in G.generators], G.degree)
    best = 0
    for H in oracles.all_subgroups(elems, G.degree):
        if G.order // len(H) <= k:
            best = max(best, len(H) // len(oracles.derived_subgroup(H, G.degree)))
    return best


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.label)
def test_ab_profile_matches_oracle(G):
    prof = ab_profile(G, 8)
    for k in range(1, 9):
        assert prof[k] == oracle_ab(G, k) == ab_growth(G, k)
    assert all(prof[k] <= prof[k + 1] for k in range(1, 8))


def test_ab_examples():
    assert ab_growth(cyclic(12), 1) == 12
    assert ab_growth(direct_power(cyclic(2), 3), 5) == 8
    assert ab_growth(wreath_cyclic(3), 3) == 27
    assert ab_growth(sym(4), 4) == 4
    assert ab_growth(sym(4), 1000) == ab_growth(sym(4), 24)


@pytest.mark.parametrize("G", SMALL + [alt(5), wreath_cyclic(3)], ids=lambda G: G.label)
def test_rep_growth_against_independent_counts(G):
    T = character_table(G)
    elems = oracles.closure([g.images for g in G.generators], G.degree)
    linear = G.order // len(oracles.derived_subgroup(elems, G.degree))
    assert rep_growth(T, 1) == linear
    assert rep_growth(T, G.order) == oracles.conjugacy_class_count(elems)
    if G.is_abelian():
        assert rep_growth(T, 1) == G.order


def test_lw_examples():
    assert lw_constant(dihedral(4)) == pytest.approx(4.0)
    assert lw_constant(cyclic(12)) == pytest.approx(12.0)
    assert lw_constant(affine(13)) == pytest.approx(12.0)
    w = lw_witness(dihedral(4))
    assert w.abelianization_index ** (1 / w.index) == pytest.approx(4.0)


def test_relative_ab_matches_oracle():
    G = affine(13)
    Y = G.stabilizer(0)
    assert relative_ab(G, Y, G) == 1
    table = G.elements()
    ygens = [g.images for g in Y.generators]
    for rec in relative_records(G, Y):
        H = {table.perm(i).images for i in rec.elements()}
        joined = oracles.closure(list(oracles.derived_subgroup(H, G.degree)) + ygens, G.degree)
        assert rec.relative_index == len(H) // len(joined)
    assert lw_constant_relative(G, Y) >= 1
    with pytest.raises(ValueError):
        relative_ab(G, G, Y)


def test_action_decomposition():
    for p in (5, 7, 13):
        dec = decompose_action(GroupAction(affine(p)))
        assert sorted(dec.constituents()) == [(1, 1), (p - 1, 1)]
        assert dec.orbital_count == 2 == orbital_count(GroupAction(affine(p)))
        assert rep_growth_action(GroupAction(affine(p)), 1) == 1
    with pytest.raises(ValueError):
        orbital_count(GroupAction(direct_product(cyclic(3), cyclic(2))))


@pytest.mark.parametrize("G", [sym(4), dihedral(5), alt(4), wreath_cyclic(2)], ids=lambda G: G.label)
def test_orbital_count_matches_pair_orbits(G):
    assert orbital_count(GroupAction(G)) == oracles.pair_orbit_count([g.images for g in G.generators], G.degree)


@pytest.mark.parametrize("G", [dihedral(4), affine(5)], ids=lambda G: G.label)
def test_regular_action_orbitals(G):
    assert orbital_count(GroupAction(G, "regular")) == G.order
    dec = decompose_action(GroupAction(G, "regular"))
    assert dec.multiplicities == dec.degrees


def test_ratio_check_small():
    r2, r3 = ratio_check(2), ratio_check(3)
    assert r2["ratio"] == Fraction(5, 2) == wreath_ratio_formula(2) and r2["ok"]
    assert r3["ratio"] == Fraction(17, 9) == wreath_ratio_formula(3) and r3["ok"]
    assert wreath_ratio_formula(5) == Fraction(649, 625)
    with pytest.raises(ValueError):
        ratio_check(7)


@pytest.mark.parametrize("G", SMALL + [alt(5)], ids=lambda G: G.label)
def test_check_eq2(G):
    res = check_eq2(G, 8)
    assert res["ok"]
    for row in res["rows"]:
        assert row["slack"] == Fraction(row["k"] * row["rep_k"], row["ab_k"])
        assert row["holds"] == (row["slack"] >= 1)


def test_hrv_margin_and_bab():
    assert hrv_margin(dihedral(4)) == pytest.approx(4.0)
    assert hrv_margin(wreath_cyclic(3)) == pytest.approx(9.0)
    rows = bab_table([affine(p) for p in (5, 7, 11, 13)], 2)
    assert [r["ab_k"] for r in rows] == [4, 6, 10, 12]


def test_nilpotent_index_ratio():
    G = dihedral(4)
    Y = G.stabilizer(0)
    r = nilpotent_index_ratio(G, Y)
    assert 0 < r <= 1
    assert r == pytest.approx(math.log(relative_ab(G, Y, G)) / math.log(G.order // Y.order))
    with pytest.raises(ValueError):
        nilpotent_index_ratio(affine(5), affine(5).stabilizer(0))
    with pytest.raises(ValueError):
        nilpotent_index_ratio(G, G)


def test_growth_profile_formats():
    prof = growth_profile(affine(5), 6, GroupAction(affine(5)))
    assert prof.to_csv().splitlines()[0] == "k,ab_k,Rep_k"
    data = json.loads(prof.to_json())
    assert data["ab"]["1"] == 4 and data["rep"]["1"] == 4 and data["rep_action"]["4"] == 2
    assert growth_profile(cyclic(4), 6).notes


@given(st.sampled_from(SMALL), st.integers(1, 30))
def test_ab_bounded_by_order_and_monotone(G, k):
    assert ab_growth(G, k) <= ab_growth(G, k + 1) <= G.order
