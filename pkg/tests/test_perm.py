import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from expandergauge.families import (affine, alt, cyclic, dihedral, direct_power, direct_product,
                                    parse_group, psl2, read_generators, sl2, sym, wreath_cyclic,
                                    write_generators)
from expandergauge.perm import (FiniteGroup, GroupAction, Permutation, derived_length, derived_series,
                                derived_subgroup, group_from_generators, lower_central_series,
                                nilpotency_class)

perms = st.integers(1, 9).flatmap(lambda n: st.permutations(list(range(n))).map(Permutation))


def same_degree(k):
    return st.integers(1, 8).flatmap(
        lambda n: st.lists(st.permutations(list(range(n))).map(Permutation), min_size=k, max_size=k))


@given(same_degree(3))
def test_composition_associative(ps):
    a, b, c = ps
    assert (a * b) * c == a * (b * c)


@given(perms)
def test_inverse_gives_identity(p):
    assert (p * ~p).is_identity() and (~p * p).is_identity()
    assert p ** p.order() == Permutation.identity(p.degree)


@given(same_degree(2))
def test_product_applies_left_factor_first(ps):
    g, h = ps
    assert all((g * h)(x) == h(g(x)) for x in range(g.degree))


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])


def test_group_from_generators_examples():
    assert group_from_generators([Permutation.from_cycles(4, (0, 1, 2, 3))]).order == 4
    x1 = Permutation([(x + 1) % 13 for x in range(13)])
    x2 = Permutation([(2 * x) % 13 for x in range(13)])
    assert group_from_generators([x1, x2]).order == 156
    gens = [Permutation.from_cycles(5, (0, 1)), Permutation.from_cycles(5, (0, 1, 2, 3, 4))]
    assert group_from_generators(gens).order == len(oracles.closure([g.images for g in gens], 5)) == 120


def test_empty_and_mismatched_generators():
    assert group_from_generators([], degree=5).order == 1
    with pytest.raises(ValueError):
        group_from_generators([Permutation([1, 0]), Permutation([0, 2, 1])])
    with pytest.raises(ValueError):
        group_from_generators([])


GROUPS = [cyclic(6), dihedral(4), dihedral(5), affine(5), affine(7), sym(4), alt(4), alt(5),
          wreath_cyclic(2), wreath_cyclic(3), psl2(5), direct_power(cyclic(2), 3)]


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.label)
def test_order_matches_closure_oracle(G):
    elems = oracles.closure([g.images for g in G.generators], G.degree)
    assert G.order == len(elems)
    assert math.factorial(G.degree) % G.order == 0
    rng = random.Random(1)
    for _ in range(20):
        x = G.random_element(rng)
        assert x.images in elems and G.contains(x)
    assert G.contains(G.identity)
    outside = [p for p in (Permutation.from_cycles(G.degree, (0, 1)),) if p.images not in elems]
    for p in outside:
        assert not G.contains(p)


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.label)
def test_derived_subgroup_matches_oracle(G):
    elems = oracles.closure([g.images for g in G.generators], G.degree)
    D = derived_subgroup(G)
    assert D.order == len(oracles.derived_subgroup(elems, G.degree))
    assert G.order % D.order == 0
    for g in G.generators:
        for d in D.generators:
            assert D.contains(~g * d * g)


def test_derived_subgroup_examples():
    assert derived_subgroup(cyclic(10)).order == 1
    assert derived_subgroup(affine(13)).order == 13
    assert derived_subgroup(sym(4)).order == 12


def test_derived_length_examples():
    for p in (5, 7, 11, 13):
        assert derived_length(affine(p)) == 2
    assert derived_length(cyclic(9)) == 1
    assert derived_length(sym(5)) is None
    assert [H.order for H in derived_series(sym(5))] == [120, 60]
    for p in (2, 3, 5):
        assert derived_length(wreath_cyclic(p)) == 2


def test_nilpotency_examples():
    assert nilpotency_class(cyclic(8)) == 1
    assert nilpotency_class(dihedral(4)) == 2
    assert nilpotency_class(affine(5)) is None
    assert [H.order for H in lower_central_series(dihedral(4))] == [8, 2, 1]


def test_constructors():
    assert (affine(13).order, affine(13).degree) == (156, 13)
    assert wreath_cyclic(2).order == 8 and wreath_cyclic(3).order == 81 and wreath_cyclic(3).degree == 9
    G = direct_power(cyclic(2), 3)
    assert (G.order, G.degree) == (8, 6)
    assert psl2(7).order == 168 and psl2(7).degree == 8
    assert sl2(5).order == 120 and sl2(5).degree == 24
    assert sym(5).order == 120 and alt(5).order == 60 and alt(4).order == 12
    assert dihedral(6).order == 12
    for bad in (lambda: affine(9), lambda: psl2(4), lambda: wreath_cyclic(6), lambda: sl2(1)):
        with pytest.raises(ValueError):
            bad()


def test_parse_group_specs():
    assert parse_group("affine:13").order == 156
    G = parse_group("psl2:5^2")
    assert G.order == 3600 and G.degree == 12
    assert parse_group("cyclic:3*cyclic:5").order == 15
    with pytest.raises(ValueError, match="position 0"):
        parse_group("afine:5")
    with pytest.raises(ValueError, match="position 8"):
        parse_group("cyclic:3+cyclic:5")


def test_generator_file_round_trip(tmp_path):
    G = affine(7)
    path = tmp_path / "aff7.txt"
    path.write_text("# affine group\n" + write_generators(G))
    H = read_generators(path)
    assert H.order == G.order and H.generators == G.generators
    assert parse_group(f"gens:{path}").order == 42


def test_order_is_product_of_orbit_lengths():
    for G in GROUPS:
        assert math.prod(G.orbit_lengths()) == G.order


def test_stabilizer():
    G = affine(11)
    Y = G.stabilizer(0)
    assert Y.order == 10 and all(g(0) == 0 for g in Y.generators)
    assert sym(5).stabilizer(2).order == 24


@pytest.mark.parametrize("G", [affine(5), dihedral(4), psl2(5)], ids=lambda G: G.label)
def test_group_action_laws(G):
    rng = random.Random(3)
    for kind in ("natural", "regular"):
        A = GroupAction(G, kind)
        for _ in range(5):
            g, h = G.random_element(rng), G.random_element(rng)
            assert sorted(A.image_map(g)) == list(A.points)
            for x in A.points:
                assert A.act(A.act(x, g), h) == A.act(x, g * h)
        assert A.is_transitive


def test_regular_action_rebuilds_order():
    for G in (affine(5), dihedral(5), alt(4)):
        A = GroupAction(G, "regular")
        gens = [Permutation(A.image_map(g)) for g in G.generators]
        assert FiniteGroup(gens).order == G.order


def test_intransitive_action_flag():
    G = direct_product(cyclic(3), cyclic(2))
    assert not GroupAction(G).is_transitive
