"""Acceptance gate: one PASS/FAIL line per criterion, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines are printed
even when output capture is on.
"""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

import oracles
from expandergauge.certify import folner_search, min_ratio_select
from expandergauge.characters import character_table
from expandergauge.families import (affine, alt, cyclic, dihedral, direct_product, sym,
                                    wreath_cyclic)
from expandergauge.graphs import MultiGraph, cayley_graph, h_ver_exact, schreier_graph
from expandergauge.growth import (check_eq2, decompose_action, lw_constant, orbital_count, ratio_check,
                                  relative_ab, wreath_ratio_formula)
from expandergauge.perm import GroupAction, Permutation, derived_length, nilpotency_class
from expandergauge.spectral import adjacency_spectrum
from expandergauge.subgroups import subgroup_lattice
from expandergauge.words import parse_connection_set

AFFINE_S = "t+1,t-1,m2,m2inv"


@pytest.fixture
def verdict(capsys):
    def emit(name, ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {name}: {detail}")
        assert ok, f"{name}: {detail}"
    return emit


def affine_schreier(p):
    G = affine(p)
    return schreier_graph(GroupAction(G), parse_connection_set(AFFINE_S, G).elements)


def test_criterion_01_wreath_tables(verdict):
    t0 = time.time()
    T2 = character_table(wreath_cyclic(2))
    T3 = character_table(wreath_cyclic(3))
    elapsed = time.time() - t0
    ok = (sorted(T2.degrees) == [1, 1, 1, 1, 2] and sorted(T3.degrees) == [1] * 9 + [3] * 8
          and sum(d * d for d in T2.degrees) == 8 and sum(d * d for d in T3.degrees) == 81
          and elapsed < 10)
    verdict("1 wreath character tables", ok,
            f"C2wrC2 {sorted(T2.degrees)}, C3wrC3 {T3.degrees.count(1)}x1 + {T3.degrees.count(3)}x3, {elapsed:.2f}s")


def test_criterion_02_ratio_identity(verdict):
    results = [ratio_check(p) for p in (2, 3)]
    ok = all(r["ratio"] == wreath_ratio_formula(r["p"]) for r in results)
    verdict("2 ratio identity", ok,
            ", ".join(f"p={r['p']}: {r['ratio']} vs {wreath_ratio_formula(r['p'])}" for r in results))


def test_criterion_03_double_transitivity(verdict):
    t0 = time.time()
    details = []
    ok = True
    for p in (5, 7, 13):
        action = GroupAction(affine(p))
        oc = orbital_count(action)
        cons = sorted(decompose_action(action).constituents())
        ok &= oc == 2 and cons == [(1, 1), (p - 1, 1)]
        details.append(f"p={p}: orbitals {oc}, constituents {cons}")
    elapsed = time.time() - t0
    ok &= elapsed < 30
    verdict("3 double transitivity", ok, "; ".join(details) + f"; {elapsed:.2f}s")


EQ2_CORPUS = ([cyclic(n) for n in range(2, 9)] + [dihedral(n) for n in range(3, 7)]
              + [sym(3), sym(4), sym(5), alt(4), alt(5)] + [affine(p) for p in (3, 5, 7, 11, 13)]
              + [wreath_cyclic(2), wreath_cyclic(3)])


def test_criterion_04_eq2_corpus(verdict):
    failures = []
    checked = 0
    for G in EQ2_CORPUS:
        res = check_eq2(G, G.order)
        checked += len(res["rows"])
        failures += [(G.label, r["k"]) for r in res["rows"] if not r["holds"]]
    ok = len(EQ2_CORPUS) >= 20 and not failures
    verdict("4 Rep_k >= ab_k/k", ok, f"{len(EQ2_CORPUS)} groups, {checked} (G, k) pairs, failures {failures}")


def random_graph(rng, m):
    perms = []
    for _ in range(rng.randint(1, 2)):
        images = list(range(m))
        rng.shuffle(images)
        p = Permutation(images)
        perms += [p, ~p]
    if rng.random() < 0.5:
        images = list(range(m))
        a, b = rng.sample(range(m), 2)
        images[a], images[b] = b, a
        perms.append(Permutation(images))
    return MultiGraph(np.array([[p(v) for p in perms] for v in range(m)]))


def test_criterion_05_isoperimetric_exactness(verdict):
    rng = random.Random(2024)
    mismatches = []
    for i in range(50):
        g = random_graph(rng, rng.randint(2, 16))
        if h_ver_exact(g) != oracles.naive_hver(g.adj.tolist()):
            mismatches.append(i)
    cycles = {n: h_ver_exact(cayley_graph(cyclic(n), parse_connection_set("pm1", cyclic(n)).elements))
              for n in range(4, 21)}
    bad_cycles = [n for n, v in cycles.items() if v != Fraction(2, n // 2)]
    verdict("5 h_ver exactness", not mismatches and not bad_cycles,
            f"50 random graphs, mismatches {mismatches}; cycles 4..20 off closed form {bad_cycles}")


def test_criterion_06_quotient_spectrum(verdict):
    worst = 0.0
    for p in (5, 7, 13):
        G = affine(p)
        S = parse_connection_set(AFFINE_S, G).elements
        quot = adjacency_spectrum(schreier_graph(GroupAction(G), S))
        full = adjacency_spectrum(cayley_graph(G, S))
        worst = max(worst, max(float(np.min(np.abs(full - lam))) for lam in quot))
    verdict("6 quotient spectrum", worst <= 1e-6, f"max distance {worst:.2e}")


def test_criterion_07a_exact_decay(verdict):
    values = [h_ver_exact(affine_schreier(p)) for p in (5, 7, 11, 13)]
    strict = all(b < a for a, b in zip(values, values[1:]))
    verdict("7a exact h_ver strictly decreasing", strict,
            "p=5,7,11,13: " + ", ".join(str(v) for v in values))


def test_criterion_07b_certified_decay(verdict):
    t0 = time.time()
    certs = {}
    reverified = True
    for p in (101, 499, 1009, 4001):
        g = affine_schreier(p)
        cert = folner_search(g)
        X = set(cert.vertices)
        exact_ratio = Fraction(len(oracles.naive_boundary(g.adj.tolist(), X)), len(X))
        reverified &= cert.verify(g) and exact_ratio == cert.ratio and len(X) <= p // 2
        certs[p] = cert.ratio
    elapsed = time.time() - t0
    vals = list(certs.values())
    strict = all(b < a for a, b in zip(vals, vals[1:]))
    halved = 2 * certs[4001] <= certs[101]
    ok = strict and halved and reverified and elapsed < 600
    verdict("7b certified h_ver decay", ok,
            ", ".join(f"p={p}: {v} ({float(v):.4f})" for p, v in certs.items())
            + f"; strict {strict}, halved {halved}, reverified {reverified}, {elapsed:.0f}s")


def test_criterion_08_mediant(verdict):
    rng = random.Random(8)
    a, b = [], []
    for _ in range(1000):
        n = rng.randint(1, 12)
        a.append([rng.randint(0, 100) for _ in range(n)])
        b.append([rng.randint(1, 100) for _ in range(n)])
    bad = 0
    for ra, rb, k in zip(a, b, min_ratio_select(a, b)):
        ratios = [Fraction(x, y) for x, y in zip(ra, rb)]
        med = Fraction(sum(ra), sum(rb))
        if not (min(ratios) <= med <= max(ratios) and ratios[k - 1] == min(ratios)):
            bad += 1
    verdict("8 mediant property", bad == 0, f"1000 rows, {bad} violations")


def test_criterion_09_structure(verdict):
    # Aff_1(2) is C_2 (abelian), so the metabelian claim concerns odd p
    lengths = {p: derived_length(affine(p)) for p in (3, 5, 7, 11, 13)}
    stab = {p: relative_ab(affine(p), affine(p).stabilizer(0), affine(p)) for p in (3, 5, 7, 11, 13)}
    nilpotent_ok = True
    counted = 0
    for G in (dihedral(4), direct_product(cyclic(4), cyclic(4)), wreath_cyclic(3)):
        assert nilpotency_class(G) is not None
        full = (1 << G.order) - 1
        for rec in subgroup_lattice(G):
            if rec.mask == full:
                continue
            counted += 1
            nilpotent_ok &= relative_ab(G, rec.mask, full) > 1
    ok = all(v == 2 for v in lengths.values()) and all(v == 1 for v in stab.values()) and nilpotent_ok
    verdict("9 structural checks", ok,
            f"derived lengths {lengths}; |G:G'Y| {stab}; {counted} proper Y in nilpotent groups, G'Y proper: {nilpotent_ok}")


def test_criterion_10_lw_cyclic(verdict):
    bad = []
    for n in range(1, 65):
        G = cyclic(n)
        elems = oracles.closure([g.images for g in G.generators], G.degree)
        # every subgroup of a cyclic group is cyclic, so rank-1 closures list them all
        subs = oracles.all_subgroups(elems, G.degree, rank=1)
        brute = max(len(H) ** (len(H) / n) for H in subs)
        c = lw_constant(G)
        if not (abs(c - n) < 1e-9 and abs(brute - c) < 1e-9):
            bad.append(n)
    verdict("10 lw_constant(C_n) = n", not bad, f"n = 1..64, mismatches {bad}")
