import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from expandergauge.families import affine, cyclic
from expandergauge.graphs import MultiGraph, cayley_graph, h_ver_exact, schreier_graph
from expandergauge.perm import GroupAction
from expandergauge.spectral import (adjacency_spectrum, cheeger_sandwich, jacobi_eigenvalues,
                                    second_eigenvector, spectral_gap, top_eigenvalues)
from expandergauge.words import parse_connection_set
from test_graphs import affine_schreier, complete, cycle, symmetric_graphs


def test_cycle_spectrum_closed_form():
    for n in (5, 8, 13):
        ev = adjacency_spectrum(cycle(n))
        expected = sorted((2 * math.cos(2 * math.pi * j / n) for j in range(n)), reverse=True)
        assert np.allclose(ev, expected)
        assert spectral_gap(cycle(n)) == pytest.approx(2 - 2 * math.cos(2 * math.pi / n))


def test_complete_graph_spectrum():
    ev = adjacency_spectrum(complete(6))
    assert np.allclose(ev, [5, -1, -1, -1, -1, -1])


@given(symmetric_graphs())
def test_trace_identities(g):
    A = g.adjacency_matrix()
    ev = adjacency_spectrum(g)
    assert ev[0] == pytest.approx(g.d)
    assert ev.sum() == pytest.approx(np.trace(A), abs=1e-8)
    assert (ev ** 2).sum() == pytest.approx((A * A).sum(), abs=1e-8)


@given(symmetric_graphs())
def test_jacobi_matches_lapack(g):
    assert np.allclose(adjacency_spectrum(g, method="jacobi"), adjacency_spectrum(g), atol=1e-8)


def test_jacobi_rejects_asymmetric_and_unknown_method():
    with pytest.raises(ValueError):
        jacobi_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        adjacency_spectrum(cycle(5), method="qr")


def test_sparse_matches_dense():
    g = affine_schreier(101)
    dense = adjacency_spectrum(g)
    assert np.allclose(top_eigenvalues(g, 2), dense[:2], atol=1e-8)
    assert np.allclose(adjacency_spectrum(g, dense_limit=50), dense[:2], atol=1e-8)
    v = second_eigenvector(g, dense_limit=50)
    A = g.adjacency_matrix()
    assert np.allclose(A @ v, dense[1] * v, atol=1e-6)


def test_schreier_spectrum_inside_cayley_spectrum():
    G = affine(7)
    S = parse_connection_set("t+1,t-1,m3,m3inv", G).elements
    quot = adjacency_spectrum(schreier_graph(GroupAction(G), S))
    full = adjacency_spectrum(cayley_graph(G, S))
    for lam in quot:
        assert np.min(np.abs(full - lam)) < 1e-8


def test_second_eigenvector_is_orthogonal_to_constants():
    v = second_eigenvector(affine_schreier(13))
    assert abs(v.sum()) < 1e-8


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_cheeger_window_contains_exact(p):
    g = affine_schreier(p)
    sw = cheeger_sandwich(g)
    h = float(h_ver_exact(g))
    assert sw["h_ver_lower"] - 1e-12 <= h <= sw["h_ver_upper"] + 1e-12


def test_cheeger_rejects_disconnected():
    with pytest.raises(ValueError):
        cheeger_sandwich(MultiGraph(np.array([[1], [0], [3], [2]])))
    with pytest.raises(ValueError):
        spectral_gap(MultiGraph(np.array([[0]])))
