"""Adjacency spectra, spectral gaps and Cheeger-type sandwiches."""

from __future__ import annotations

import math

import numpy as np

from .graphs import MultiGraph

DEFAULT_DENSE_LIMIT = 4096


def jacobi_eigenvalues(A: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Stops when the off-diagonal Frobenius norm drops below ``tol`` times the
    matrix norm.  Rows and columns are rotated with vectorized updates, so this
    is practical up to a few hundred rows.
    """
    A = np.array(A, dtype=np.float64)
    n = A.shape[0]
    if n == 0:
        return np.zeros(0)
    if not np.allclose(A, A.T):
        raise ValueError("matrix is not symmetric")
    scale = max(np.linalg.norm(A), 1.0)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp = A[:, p].copy()
                cq = A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.sort(np.diag(A))[::-1]


def adjacency_spectrum(graph: MultiGraph, dense_limit: int = DEFAULT_DENSE_LIMIT,
                       method: str = "lapack") -> np.ndarray:
    """Eigenvalues of the adjacency matrix, descending.

    Above ``dense_limit`` only the top two eigenvalues are returned.
    """
    if graph.m > dense_limit:
        return top_eigenvalues(graph, 2)
    A = graph.adjacency_matrix()
    if method == "jacobi":
        return jacobi_eigenvalues(A)
    if method != "lapack":
        raise ValueError(f"unknown eigensolver {method!r}")
    return np.linalg.eigvalsh(A)[::-1]


def top_eigenvalues(graph: MultiGraph, k: int = 2) -> np.ndarray:
    """Largest ``k`` adjacency eigenvalues by Lanczos on the sparse matrix."""
    from scipy.sparse.linalg import eigsh

    vals = eigsh(graph.sparse_adjacency(), k=k, which="LA", tol=1e-10,
                 maxiter=100000, v0=np.ones(graph.m) + np.arange(graph.m) / graph.m)[0]
    return np.sort(vals)[::-1]


def spectral_gap(graph: MultiGraph, dense_limit: int = DEFAULT_DENSE_LIMIT) -> float:
    """d - lambda_2 of the adjacency matrix."""
    if graph.m < 2:
        raise ValueError("spectral gap needs at least 2 vertices")
    ev = adjacency_spectrum(graph, dense_limit)
    return float(graph.d - ev[1])


def second_eigenvector(graph: MultiGraph, dense_limit: int = DEFAULT_DENSE_LIMIT) -> np.ndarray:
    """An eigenvector for lambda_2 (orthogonal to constants on regular graphs)."""
    if graph.m <= dense_limit:
        vals, vecs = np.linalg.eigh(graph.adjacency_matrix())
        return vecs[:, -2]
    from scipy.sparse.linalg import eigsh

    vals, vecs = eigsh(graph.sparse_adjacency(), k=2, which="LA", tol=1e-10, maxiter=100000,
                       v0=np.ones(graph.m) + np.arange(graph.m) / graph.m)
    return vecs[:, np.argsort(vals)[0]]


def cheeger_sandwich(graph: MultiGraph, dense_limit: int = DEFAULT_DENSE_LIMIT) -> dict:
    """Spectral bounds on the edge expansion and the induced vertex-expansion window.

    (d - l2)/2 <= h_edge <= sqrt(2 d (d - l2)) and h_edge/d <= h_ver <= h_edge.
    """
    if not graph.is_connected():
        raise ValueError("cheeger_sandwich needs a connected graph")
    d = graph.d
    gap = spectral_gap(graph, dense_limit)
    gap = max(gap, 0.0)
    edge_lo = gap / 2.0
    edge_hi = math.sqrt(2.0 * d * gap)
    return {
        "degree": d,
        "gap": gap,
        "h_edge_lower": edge_lo,
        "h_edge_upper": edge_hi,
        "h_ver_lower": edge_lo / d if d else 0.0,
        "h_ver_upper": edge_hi,
    }
