"""Independent brute-force references used by the tests.

Nothing here imports the package's algorithms: groups are closures of image
tuples, subsets are enumerated with itertools, determinants use Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def compose(a, b):
    """a then b, on image tuples."""
    return tuple(b[x] for x in a)


def inverse(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def closure(gens, n):
    e = tuple(range(n))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def derived_subgroup(elements, n):
    comms = {compose(compose(inverse(a), inverse(b)), compose(a, b)) for a in elements for b in elements}
    return closure(list(comms), n)


def all_subgroups(elements, n, rank=3):
    """Every subgroup generated by at most ``rank`` elements, as frozensets."""
    elements = sorted(elements)
    out = set()
    for r in range(0, rank + 1):
        for gens in combinations(elements, r):
            out.add(frozenset(closure(list(gens), n)))
    return out


def conjugacy_class_count(elements):
    elements = list(elements)
    seen = set()
    count = 0
    for x in elements:
        if x in seen:
            continue
        count += 1
        for g in elements:
            seen.add(compose(compose(inverse(g), x), g))
    return count


def pair_orbit_count(gens, n):
    """Orbits of the group <gens> on ordered pairs of points."""
    seen = set()
    count = 0
    for start in ((i, j) for i in range(n) for j in range(n)):
        if start in seen:
            continue
        count += 1
        stack = [start]
        seen.add(start)
        while stack:
            i, j = stack.pop()
            for g in gens:
                q = (g[i], g[j])
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
    return count


def naive_boundary(adj, X):
    X = set(X)
    return {u for v in X for u in adj[v]} - X


def naive_hver(adj):
    m = len(adj)
    best = None
    for k in range(1, m // 2 + 1):
        for X in combinations(range(m), k):
            r = Fraction(len(naive_boundary(adj, X)), k)
            if best is None or r < best:
                best = r
    return best


def det_mod(A, q):
    A = [[x % q for x in row] for row in A]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c] % q
        inv = pow(A[c][c], q - 2, q)
        for r in range(c + 1, n):
            f = A[r][c] * inv % q
            A[r] = [(x - f * y) % q for x, y in zip(A[r], A[c])]
    return det % q


def cycle_adj(n):
    return [[(v + 1) % n, (v - 1) % n] for v in range(n)]
