"""Cayley/Schreier multigraphs, vertex boundaries and isoperimetric numbers.

All boundary ratios are exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .perm import FiniteGroup, GroupAction, Permutation
from .words import symmetric_closure_ok

DEFAULT_EXACT_LIMIT = 26


class MultiGraph:
    """A d-regular undirected multigraph stored as an ``(m, d)`` dart array.

    ``adj[v, i]`` is the endpoint of the i-th dart leaving ``v``.  A connection
    element fixing ``v`` contributes one loop dart, so the degree is exactly
    ``|S|``.
    """

    def __init__(self, adj, group_label: str = "", set_label: str = "", meta: dict | None = None):
        adj = np.asarray(adj, dtype=np.int64)
        if adj.ndim != 2:
            raise ValueError("adjacency must be an (m, d) array")
        self.adj = adj
        self.adj.setflags(write=False)
        self.group_label = group_label
        self.set_label = set_label
        self.meta = dict(meta or {})

    @property
    def m(self) -> int:
        return self.adj.shape[0]

    @property
    def d(self) -> int:
        return self.adj.shape[1]

    def __len__(self) -> int:
        return self.m

    def __repr__(self) -> str:
        return f"MultiGraph(m={self.m}, d={self.d}, {self.group_label} / {self.set_label})"

    def neighbors(self, v: int) -> list[int]:
        return self.adj[v].tolist()

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.m, self.m), dtype=np.float64)
        rows = np.repeat(np.arange(self.m), self.d)
        np.add.at(A, (rows, self.adj.ravel()), 1.0)
        return A

    def sparse_adjacency(self):
        import scipy.sparse as sp

        rows = np.repeat(np.arange(self.m), self.d)
        A = sp.coo_matrix((np.ones(rows.size), (rows, self.adj.ravel())), shape=(self.m, self.m))
        return A.tocsr()

    def is_symmetric(self) -> bool:
        darts = Counter(zip(np.repeat(np.arange(self.m), self.d).tolist(), self.adj.ravel().tolist()))
        return all(darts.get((v, u), 0) == c for (u, v), c in darts.items())

    def components(self) -> list[list[int]]:
        seen = [False] * self.m
        adj = self.adj.tolist()
        out = []
        for s in range(self.m):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            for x in comp:
                for y in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return self.m == 0 or len(self.components()) == 1

    def loops(self) -> int:
        return int(np.sum(self.adj == np.arange(self.m)[:, None]))

    def edge_list(self) -> str:
        """``u v`` per undirected edge (u <= v); multi-edges repeated, one ``u u`` line per loop dart."""
        darts = Counter()
        for u, row in enumerate(self.adj.tolist()):
            for v in row:
                darts[(u, v)] += 1
        lines = []
        for (u, v), c in sorted(darts.items()):
            if u < v:
                lines += [f"{u} {v}"] * c
            elif u == v:
                lines += [f"{u} {u}"] * c
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        name = (self.group_label or "G").replace('"', "'")
        body = [f'graph "{name}" {{']
        for line in self.edge_list().splitlines():
            u, v = line.split()
            body.append(f"  {u} -- {v};")
        body.append("}")
        return "\n".join(body) + "\n"


def from_edge_list(text: str) -> MultiGraph:
    """Inverse of :meth:`MultiGraph.edge_list` for regular graphs."""
    nbrs: dict[int, list[int]] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        u, v = map(int, line.split())
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, [])
        if u != v:
            nbrs[v].append(u)
    m = max(nbrs) + 1
    rows = [sorted(nbrs.get(v, [])) for v in range(m)]
    if len({len(r) for r in rows}) != 1:
        raise ValueError("edge list is not regular")
    return MultiGraph(rows)


def schreier_graph(action: GroupAction, S: Sequence[Permutation], set_label: str = "",
                   meta: dict | None = None) -> MultiGraph:
    """Sch(G on points, S): darts ``x -> act(x, s)`` for each s in S."""
    S = list(S)
    bad = symmetric_closure_ok(S)
    if bad is not None:
        raise ValueError(f"connection set is not symmetric: inverse of {bad!r} missing "
                         "or listed with different multiplicity")
    for s in S:
        if s not in action.group:
            raise ValueError(f"{s!r} is not an element of {action.group.label}")
    if not S:
        adj = np.zeros((action.size, 0), dtype=np.int64)
    else:
        adj = np.array([action.image_map(s) for s in S], dtype=np.int64).T
    return MultiGraph(adj, action.group.label, set_label, meta)


def cayley_graph(G: FiniteGroup, S: Sequence[Permutation], set_label: str = "",
                 meta: dict | None = None) -> MultiGraph:
    """Cay(G, S) as the Schreier graph of the right-regular action."""
    return schreier_graph(GroupAction(G, "regular"), S, set_label, meta)


def vertex_boundary(graph: MultiGraph, X: Iterable[int]) -> set[int]:
    X = set(X)
    out = set()
    for v in X:
        out.update(graph.adj[v].tolist())
    return out - X


@dataclass
class ExpansionCertificate:
    """Explicit vertex set X with |X| <= m/2 and its exact ratio |dX|/|X|."""

    vertices: tuple[int, ...]
    boundary: tuple[int, ...]
    ratio: Fraction
    method: str
    verified: bool = False
    info: dict = field(default_factory=dict)

    def verify(self, graph: MultiGraph) -> bool:
        X = set(self.vertices)
        ok = (0 < len(X) <= graph.m // 2 and len(X) == len(self.vertices)
              and all(0 <= v < graph.m for v in X))
        if ok:
            bd = vertex_boundary(graph, X)
            ok = bd == set(self.boundary) and Fraction(len(bd), len(X)) == self.ratio
        self.verified = ok
        return ok

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "boundary": list(self.boundary),
            "ratio_num": self.ratio.numerator,
            "ratio_den": self.ratio.denominator,
            "method": self.method,
            "verified": self.verified,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> ExpansionCertificate:
        return cls(tuple(d["vertices"]), tuple(d["boundary"]),
                   Fraction(d["ratio_num"], d["ratio_den"]), d["method"], bool(d["verified"]))


def certificate(graph: MultiGraph, X: Iterable[int], method: str) -> ExpansionCertificate:
    """Build and verify a certificate for ``X`` from the graph alone."""
    X = sorted(set(int(v) for v in X))
    if not X or len(X) > graph.m // 2:
        raise ValueError(f"certificate set must have 1..{graph.m // 2} vertices, got {len(X)}")
    bd = sorted(vertex_boundary(graph, X))
    cert = ExpansionCertificate(tuple(X), tuple(bd), Fraction(len(bd), len(X)), method)
    cert.verify(graph)
    return cert


def _subset_neighbourhoods(masks: list[int]) -> np.ndarray:
    out = np.zeros(1, dtype=np.uint64)
    for nb in masks:
        out = np.concatenate([out, out | np.uint64(nb)])
    return out


def h_ver_exact_witness(graph: MultiGraph, limit: int = DEFAULT_EXACT_LIMIT) -> tuple[Fraction, list[int]]:
    """Exact vertex isoperimetric number and a minimizing set.

    Exhaustive over all nonempty X with |X| <= m/2.  The vertex set is split
    into a low and a high half; neighbourhood unions of all subsets of each
    half are tabulated once, so each subset costs one OR and one popcount.
    """
    m = graph.m
    if m > limit:
        raise ValueError(f"graph has {m} vertices, above the exact limit {limit}; use h_ver_upper")
    if m > 62:
        raise ValueError("exact search supports at most 62 vertices")
    if m < 2:
        raise ValueError("h_ver needs at least 2 vertices")
    nbr = [0] * m
    for v, row in enumerate(graph.adj.tolist()):
        for u in row:
            nbr[v] |= 1 << u
    half = m // 2
    klo = m // 2
    khi = m - klo
    lo = np.arange(1 << klo, dtype=np.uint64)
    nlo = _subset_neighbourhoods(nbr[:klo])
    nhi = _subset_neighbourhoods(nbr[klo:])
    pclo = np.bitwise_count(lo).astype(np.int64)
    best: tuple[int, int] | None = None
    best_set = 0
    for h in range(1 << khi):
        hi_bits = h << klo
        size = pclo + int(h).bit_count()
        X = lo | np.uint64(hi_bits)
        bd = np.bitwise_count((nlo | nhi[h]) & ~X).astype(np.int64)
        valid = (size >= 1) & (size <= half)
        if not valid.any():
            continue
        ratio = np.where(valid, bd / np.maximum(size, 1), np.inf)
        r = ratio.min()
        if best is not None and r > best[0] / best[1] + 1e-9:
            continue
        for i in np.flatnonzero(ratio <= r + 1e-9):
            b, s = int(bd[i]), int(size[i])
            if best is None or b * best[1] < best[0] * s:
                best = (b, s)
                best_set = hi_bits | int(i)
    X = [v for v in range(m) if best_set >> v & 1]
    return Fraction(best[0], best[1]), X


def h_ver_exact(graph: MultiGraph, limit: int = DEFAULT_EXACT_LIMIT) -> Fraction:
    """min over nonempty |X| <= m/2 of |dX|/|X|, exactly."""
    return h_ver_exact_witness(graph, limit)[0]


class BoundaryTracker:
    """Incremental |dX| under single-vertex insertions and removals."""

    def __init__(self, graph: MultiGraph):
        self.graph = graph
        self.adj = graph.adj.tolist()
        self.inX = [False] * graph.m
        self.cnt = [0] * graph.m
        self.size = 0
        self.bsize = 0

    def add(self, u: int) -> None:
        if self.inX[u]:
            return
        if self.cnt[u] > 0:
            self.bsize -= 1
        self.inX[u] = True
        self.size += 1
        for v in self.adj[u]:
            if self.cnt[v] == 0 and not self.inX[v]:
                self.bsize += 1
            self.cnt[v] += 1

    def remove(self, u: int) -> None:
        if not self.inX[u]:
            return
        self.inX[u] = False
        self.size -= 1
        for v in self.adj[u]:
            self.cnt[v] -= 1
            if self.cnt[v] == 0 and not self.inX[v] and v != u:
                self.bsize -= 1
        if self.cnt[u] > 0:
            self.bsize += 1

    def members(self) -> list[int]:
        return [v for v, b in enumerate(self.inX) if b]


def bfs_order(graph: MultiGraph, root: int) -> list[int]:
    seen = {root}
    order = [root]
    q = deque([root])
    adj = graph.adj.tolist()
    while q:
        x = q.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                order.append(y)
                q.append(y)
    return order


def best_prefix(graph: MultiGraph, order: Sequence[int]) -> tuple[Fraction, int]:
    """Best boundary ratio among prefixes of ``order`` with size <= m/2."""
    tr = BoundaryTracker(graph)
    best = None
    best_k = 0
    for k, v in enumerate(order[: graph.m // 2], start=1):
        tr.add(v)
        r = Fraction(tr.bsize, tr.size)
        if best is None or r < best:
            best, best_k = r, k
    return best, best_k


def sweep_cut(graph: MultiGraph, vector, method: str = "sweep") -> ExpansionCertificate:
    """Best threshold set of ``vector`` (from either end), exactly verified."""
    vec = np.asarray(vector, dtype=np.float64)
    if vec.shape != (graph.m,):
        raise ValueError("vector must be indexed by vertices")
    if np.ptp(vec) <= 1e-12 * max(1.0, np.abs(vec).max()):
        raise ValueError("sweep_cut needs a non-constant vector")
    order = np.argsort(vec, kind="stable").tolist()
    best = None
    for ordering in (order, order[::-1]):
        r, k = best_prefix(graph, ordering)
        if best is None or r < best[0]:
            best = (r, ordering[:k])
    return certificate(graph, best[1], method)


def h_ver_upper(graph: MultiGraph, roots: int = 16, seed: int = 0, spectral: bool = True,
                dense_limit: int = 4096) -> ExpansionCertificate:
    """Upper bound on h_ver from explicit sets: BFS-prefix sets, a spectral sweep cut,
    and the first half of the vertices as the fallback."""
    import random

    m = graph.m
    if m < 2:
        raise ValueError("h_ver needs at least 2 vertices")
    rng = random.Random(seed)
    cands = []
    comps = graph.components()
    if len(comps) > 1:
        small = min(comps, key=len)
        return certificate(graph, small, "component")
    cands.append(certificate(graph, range(m // 2), "half"))
    root_list = list(range(m)) if m <= roots else [0] + rng.sample(range(1, m), roots - 1)
    for r in root_list:
        order = bfs_order(graph, r)
        _, k = best_prefix(graph, order)
        cands.append(certificate(graph, order[:k], "bfs"))
    if spectral and graph.d > 0:
        from .spectral import second_eigenvector

        vec = second_eigenvector(graph, dense_limit=dense_limit)
        try:
            cands.append(sweep_cut(graph, vec))
        except ValueError:
            pass
    return min(cands, key=lambda c: (c.ratio, len(c.vertices)))
