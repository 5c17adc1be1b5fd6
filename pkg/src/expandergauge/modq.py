"""Dense linear algebra over a prime field F_q with int64 numpy arrays.

Entries stay reduced in [0, q).  Matrix products accumulate ``n * q**2``
before reduction, so callers keep ``q`` small enough (see :func:`check_modulus`).
"""

from __future__ import annotations

import numpy as np


def check_modulus(q: int, n: int) -> None:
    if n * (q - 1) ** 2 >= 2 ** 62:
        raise OverflowError(f"modulus {q} too large for int64 products of size {n}")


def matmul(A: np.ndarray, B: np.ndarray, q: int) -> np.ndarray:
    return (A @ B) % q


def rref(A: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = np.array(A, dtype=np.int64) % q
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), q - 2, q) % q
        col = R[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            R[nzr] = (R[nzr] - np.outer(col[nzr], R[r])) % q
        pivots.append(c)
        r += 1
    return R[:r], pivots


def nullspace(A: np.ndarray, q: int) -> np.ndarray:
    """Basis of ``{x : A x = 0}`` as the columns of the returned matrix."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    R, pivots = rref(A, q)
    free = [c for c in range(n) if c not in set(pivots)]
    N = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        N[f, j] = 1
        for i, p in enumerate(pivots):
            N[p, j] = (-R[i, f]) % q
    return N


def column_echelon(V: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Basis of the column span of V with an identity block on the pivot rows."""
    R, pivots = rref(V.T, q)
    return R.T.copy(), pivots


def hessenberg(A: np.ndarray, q: int, transform: bool = False):
    """Upper Hessenberg H similar to A.  With ``transform``, also Q with A Q = Q H."""
    H = np.array(A, dtype=np.int64) % q
    n = H.shape[0]
    Q = np.eye(n, dtype=np.int64) if transform else None
    for m in range(1, n - 1):
        nz = np.flatnonzero(H[m:, m - 1])
        if nz.size == 0:
            continue
        i = m + int(nz[0])
        if i != m:
            H[[i, m]] = H[[m, i]]
            H[:, [i, m]] = H[:, [m, i]]
            if transform:
                Q[:, [i, m]] = Q[:, [m, i]]
        tinv = pow(int(H[m, m - 1]), q - 2, q)
        u = H[m + 1:, m - 1] * tinv % q
        if not u.any():
            continue
        H[m + 1:] = (H[m + 1:] - np.outer(u, H[m])) % q
        H[:, m] = (H[:, m] + H[:, m + 1:] @ u) % q
        if transform:
            Q[:, m] = (Q[:, m] + Q[:, m + 1:] @ u) % q
    return (H, Q) if transform else H


def nullspace_echelon(A: np.ndarray, q: int) -> np.ndarray:
    """Nullspace basis (columns) by forward elimination and back-substitution.

    Same span as :func:`nullspace`; much cheaper for banded input such as
    Hessenberg matrices because rows above a pivot are never touched.
    """
    R = np.array(A, dtype=np.int64) % q
    rows, n = R.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), q - 2, q) % q
        below = r + 1 + np.flatnonzero(R[r + 1:, c])
        if below.size:
            R[below] = (R[below] - np.outer(R[below, c], R[r])) % q
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in set(pivots)]
    X = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        X[f, j] = 1
    for i in range(len(pivots) - 1, -1, -1):
        p = pivots[i]
        X[p] = (-(R[i, p + 1:] @ X[p + 1:])) % q
    return X


def charpoly(A: np.ndarray, q: int) -> np.ndarray:
    """Characteristic polynomial det(xI - A), coefficients lowest degree first."""
    H = hessenberg(A, q)
    n = H.shape[0]
    polys = [np.array([1], dtype=np.int64)]
    for m in range(n):
        prev = polys[-1]
        cur = np.zeros(m + 2, dtype=np.int64)
        cur[1:] = prev
        cur[:-1] = (cur[:-1] - H[m, m] * prev) % q
        t = 1
        for i in range(1, m + 1):
            t = t * int(H[m - i + 1, m - i]) % q
            if t == 0:
                break
            coef = t * int(H[m - i, m]) % q
            if coef:
                p = polys[m - i]
                cur[: p.size] = (cur[: p.size] - coef * p) % q
        polys.append(cur % q)
    return polys[-1]


def poly_roots(coeffs: np.ndarray, q: int) -> list[int]:
    """All roots in F_q (without multiplicity) by evaluating at every residue."""
    xs = np.arange(q, dtype=np.int64)
    val = np.zeros(q, dtype=np.int64)
    for c in coeffs[::-1]:
        val = (val * xs + int(c)) % q
    return np.flatnonzero(val == 0).tolist()


def primitive_root(q: int) -> int:
    phi = q - 1
    factors = []
    x = phi
    f = 2
    while f * f <= x:
        if x % f == 0:
            factors.append(f)
            while x % f == 0:
                x //= f
        f += 1
    if x > 1:
        factors.append(x)
    for g in range(2, q):
        if all(pow(g, phi // f, q) != 1 for f in factors):
            return g
    return 1
