"""Non-expansion certificates: small-boundary set search, family sweeps and
the minimal-ratio selection used to pass from averages to single indices."""

from __future__ import annotations

import csv
import io
import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .families import FAMILIES, affine, cyclic
from .graphs import (DEFAULT_EXACT_LIMIT, ExpansionCertificate, MultiGraph, bfs_order, best_prefix,
                     cayley_graph, certificate, h_ver_exact_witness, schreier_graph, sweep_cut)
from .perm import FiniteGroup, GroupAction, derived_length
from .words import parse_connection_set

DEFAULT_BUDGET = 10**6


def min_ratio_select(a, b) -> list[int]:
    """For each row, the 1-based index j minimizing a[j]/b[j] (ties: smallest j).

    The chosen ratio never exceeds sum(a)/sum(b) of its row.
    """
    if len(a) != len(b):
        raise ValueError(f"a has {len(a)} rows but b has {len(b)}")
    out = []
    for i, (ra, rb) in enumerate(zip(a, b)):
        if len(ra) != len(rb):
            raise ValueError(f"row {i}: lengths {len(ra)} and {len(rb)} differ")
        if not ra:
            raise ValueError(f"row {i} is empty")
        if any(x < 0 for x in ra):
            raise ValueError(f"row {i}: a entries must be nonnegative")
        if any(y <= 0 for y in rb):
            raise ValueError(f"row {i}: b entries must be positive (filter b = 0 pairs first)")
        best = 0
        for j in range(1, len(ra)):
            if ra[j] * rb[best] < ra[best] * rb[j]:
                best = j
        out.append(best + 1)
    return out


def row_mediant(a_row, b_row) -> Fraction:
    return Fraction(sum(a_row), sum(b_row))


# ---------------------------------------------------------------- local search

class _SearchState:
    """X with its boundary, supporting exact boundary deltas for single moves."""

    def __init__(self, graph: MultiGraph):
        self.m = graph.m
        adj = graph.adj.tolist()
        self.nbrs = []
        self.selfdarts = []
        for v, row in enumerate(adj):
            mult: dict[int, int] = {}
            for u in row:
                mult[u] = mult.get(u, 0) + 1
            self.selfdarts.append(mult.pop(v, 0))
            self.nbrs.append(list(mult.items()))
        self.inX = [False] * self.m
        self.cnt = [0] * self.m
        self.size = 0
        self.bd: set[int] = set()

    def load(self, X) -> None:
        self.inX = [False] * self.m
        self.cnt = [0] * self.m
        self.size = 0
        self.bd = set()
        for v in X:
            self.add(v)

    def add(self, v: int) -> None:
        self.inX[v] = True
        self.size += 1
        self.bd.discard(v)
        self.cnt[v] += self.selfdarts[v]
        for u, k in self.nbrs[v]:
            if not self.inX[u]:
                self.bd.add(u)
            self.cnt[u] += k

    def remove(self, v: int) -> None:
        self.inX[v] = False
        self.size -= 1
        self.cnt[v] -= self.selfdarts[v]
        for u, k in self.nbrs[v]:
            self.cnt[u] -= k
            if self.cnt[u] == 0 and not self.inX[u]:
                self.bd.discard(u)
        if self.cnt[v] > 0:
            self.bd.add(v)

    def delta_add(self, v: int) -> int:
        d = -1 if v in self.bd else 0
        for u, _ in self.nbrs[v]:
            if not self.inX[u] and self.cnt[u] == 0:
                d += 1
        return d

    def delta_remove(self, v: int) -> int:
        d = 1 if self.cnt[v] - self.selfdarts[v] > 0 else 0
        for u, k in self.nbrs[v]:
            if not self.inX[u] and self.cnt[u] == k:
                d -= 1
        return d

    def members(self) -> list[int]:
        return [v for v in range(self.m) if self.inX[v]]


def _move(st: _SearchState, v: int) -> None:
    if st.inX[v]:
        st.remove(v)
    else:
        st.add(v)


def _fm_pass(st: _SearchState, budget: list[int], patience: int) -> bool:
    """One pass of single-vertex moves with locking, rolled back to its best point.

    Each step applies the unlocked move with the lowest resulting ratio, even
    when that ratio is worse, which lets the search cross small ridges.  All
    candidates in a step share the current (|dX|, |X|), so the best add and the
    best removal are the minimum-delta entries of two bucket queues.  Deltas
    are recomputed within distance 2 of each moved vertex.
    Returns True if the pass ended strictly better than it started.
    """
    half = st.m // 2
    buckets = ({}, {})  # 0: additions, 1: removals; delta -> set of vertices
    where: dict[int, tuple[int, int]] = {}
    locked: set[int] = set()

    def refresh(u):
        old = where.pop(u, None)
        if old is not None:
            bucket = buckets[old[0]][old[1]]
            bucket.discard(u)
            if not bucket:
                del buckets[old[0]][old[1]]
        if u in locked:
            return
        if st.inX[u]:
            if not any(not st.inX[w] for w, _ in st.nbrs[u]):
                return
            kind, d = 1, st.delta_remove(u)
        elif u in st.bd:
            kind, d = 0, st.delta_add(u)
        else:
            return
        budget[0] -= 1
        where[u] = (kind, d)
        buckets[kind].setdefault(d, set()).add(u)

    front = set(st.bd)
    for u in st.bd:
        front.update(w for w, _ in st.nbrs[u] if st.inX[w])
    for u in sorted(front):
        refresh(u)
    moves: list[int] = []
    b0, s0 = len(st.bd), st.size
    best_num, best_den, best_len = b0, s0, 0
    while budget[0] > 0 and len(moves) - best_len <= patience:
        b, s = len(st.bd), st.size
        pick = None
        for kind, mv in ((0, 1), (1, -1)):
            if buckets[kind] and 1 <= s + mv <= half:
                d = min(buckets[kind])
                v = min(buckets[kind][d])
                num, den = b + d, s + mv
                if pick is None or num * pick[1] < pick[0] * den:
                    pick = (num, den, v)
        if pick is None:
            break
        v = pick[2]
        _move(st, v)
        locked.add(v)
        moves.append(v)
        ring = {v}
        for u, _ in st.nbrs[v]:
            ring.add(u)
            ring.update(w for w, _ in st.nbrs[u])
        for u in sorted(ring):
            refresh(u)
        if pick[0] * best_den < best_num * pick[1]:
            best_num, best_den, best_len = pick[0], pick[1], len(moves)
    for v in reversed(moves[best_len:]):
        _move(st, v)
    return best_num * s0 < b0 * best_den


def _improve(st: _SearchState, budget: list[int], patience: int) -> None:
    while budget[0] > 0 and _fm_pass(st, budget, patience):
        pass


def _perturb(st: _SearchState, rng: random.Random, strength: int) -> None:
    half = st.m // 2
    for _ in range(strength):
        if st.bd and st.size < half and rng.random() < 0.5:
            st.add(rng.choice(sorted(st.bd)))
        elif st.size > 1:
            inner = [v for v in st.members() if any(not st.inX[u] for u, _ in st.nbrs[v])]
            if inner:
                st.remove(rng.choice(inner))


# ---------------------------------------------------------- structured candidates

def _affine_candidates(graph: MultiGraph) -> list[tuple[str, np.ndarray]]:
    """Intervals, symmetric annuli, digit boxes and layered dilates of intervals in Z/p."""
    p = graph.meta.get("modulus")
    if not p or p != graph.m:
        return []
    lams = sorted({int(x) % p for x in graph.meta.get("multipliers", []) if int(x) % p not in (0, 1)})
    half = p // 2
    sizes = sorted({int(x) for x in np.geomspace(1, max(half, 1), 40)})
    out = []
    for N in sizes:
        out.append(("interval", np.arange(0, N)))
        if 2 * N + 1 <= half:
            out.append(("symmetric-interval", np.arange(-N, N + 1) % p))
        for inner in (N // 4, N // 2):
            if 0 < inner < N and 2 * (N - inner) <= half:
                out.append(("annulus", np.concatenate([np.arange(inner, N), np.arange(-N + 1, -inner + 1)]) % p))
    for lam in lams:
        inv = pow(lam, -1, p)
        for t in range(1, 40):
            for B in range(2, 64):
                if t * math.log(B) > math.log(p):
                    break
                pts = np.zeros(1, dtype=np.int64)
                for i in range(t):
                    pts = (pts[:, None] + np.arange(B)[None, :] * pow(lam, i, p)).ravel() % p
                pts = np.unique(pts)
                if pts.size <= half:
                    out.append(("digit-box", pts))
        for N in sizes:
            base = np.arange(-N, N + 1) % p
            layer = np.zeros(p, dtype=bool)
            for J in range(1, 64):
                layer[base * pow(inv, J - 1, p) % p] = True
                if layer.sum() > half:
                    break
                out.append(("layered", np.flatnonzero(layer)))
        # off-centre base intervals [lo, hi] with their successive 1/lam dilates
        grid = sorted({int(x) for x in np.geomspace(1, max(half, 1), 30)})
        for lo in [0] + grid:
            for hi in grid:
                if hi <= lo:
                    continue
                base = np.arange(lo, hi + 1)
                layer = np.zeros(p, dtype=bool)
                for J in range(1, 64):
                    layer[base * pow(inv, J - 1, p) % p] = True
                    if layer.sum() > half:
                        break
                    out.append(("layered-offset", np.flatnonzero(layer)))
    return out


def _ratio_of(graph: MultiGraph, X: np.ndarray) -> tuple[int, int]:
    inX = np.zeros(graph.m, dtype=bool)
    inX[X] = True
    nb = np.zeros(graph.m, dtype=bool)
    nb[graph.adj[inX].ravel()] = True
    return int((nb & ~inX).sum()), int(inX.sum())


def folner_search(graph: MultiGraph, budget: int = DEFAULT_BUDGET, seed: int = 0,
                  roots: int = 16, dense_limit: int = 1500, starts: int = 8,
                  patience: int = 128) -> ExpansionCertificate:
    """Best verified small-boundary set found by structured candidates plus local search.

    Candidates: BFS-prefix sets, a sweep cut of the second adjacency
    eigenvector, and (when the vertices are residues mod p with affine
    multipliers in ``graph.meta``) intervals, annuli, digit boxes and layered
    dilates.  The best few seed a best-improvement single-vertex search with
    seeded perturbation restarts; ``budget`` counts candidate-move evaluations.
    """
    m = graph.m
    if m < 2:
        raise ValueError("h_ver needs at least 2 vertices")
    comps = graph.components()
    if len(comps) > 1:
        return certificate(graph, min(comps, key=len), "component")
    rng = random.Random(seed)
    half = m // 2
    pool: list[tuple[Fraction, str, list[int]]] = []

    def offer(method, X):
        X = sorted(set(int(v) for v in X))
        if 1 <= len(X) <= half:
            b, s = _ratio_of(graph, np.asarray(X, dtype=np.int64))
            pool.append((Fraction(b, s), method, X))

    offer("half", range(half))
    root_list = list(range(m)) if m <= roots else [0] + rng.sample(range(1, m), roots - 1)
    for r in root_list:
        order = bfs_order(graph, r)
        _, k = best_prefix(graph, order)
        offer("bfs", order[:k])
    if graph.d > 0:
        from .spectral import second_eigenvector

        try:
            offer("sweep", sweep_cut(graph, second_eigenvector(graph, dense_limit=dense_limit)).vertices)
        except ValueError:
            pass
    for method, X in _affine_candidates(graph):
        offer(method, X)
    pool.sort(key=lambda c: (c[0], len(c[2]), c[1]))
    best = pool[0]
    left = [budget]
    st = _SearchState(graph)
    seen = set()
    seeds = []
    for r, method, X in pool:
        key = tuple(X)
        if key not in seen:
            seen.add(key)
            seeds.append((method, X))
        if len(seeds) >= starts:
            break
    restarts = 0
    while left[0] > 0:
        if restarts < len(seeds):
            method, X = seeds[restarts]
            st.load(X)
        else:
            method = best[1] if best[1].endswith("+local") else best[1] + "+local"
            st.load(best[2])
            _perturb(st, rng, 1 + rng.randrange(max(2, min(50, len(st.bd)))))
        restarts += 1
        _improve(st, left, patience)
        r = Fraction(len(st.bd), st.size)
        if r < best[0]:
            tag = method if method.endswith("+local") else method + "+local"
            best = (r, tag, st.members())
        if restarts >= len(seeds) and budget <= 0:
            break
    cert = certificate(graph, best[2], best[1])
    cert.info = {"evaluations": budget - max(left[0], 0), "restarts": restarts, "candidates": len(pool)}
    if cert.ratio != best[0] or not cert.verified:
        raise AssertionError("certificate failed re-verification")
    return cert


# ----------------------------------------------------------------- family sweeps

DEFAULT_SETS = {"affine-schreier": "t+1,t-1,m2,m2inv", "cyclic-cayley": "pm1"}


@dataclass
class FamilyDescriptor:
    """A parametrized family of graphs: name, parameter list and connection-set rule.

    Names: ``affine-schreier`` (Aff_1(p) on F_p), ``cyclic-cayley`` (C_n), and
    ``<ctor>-schreier`` / ``<ctor>-cayley`` for any group constructor.
    """

    name: str
    params: list[int]
    s_rule: str | None = None
    max_vertices: int = 10**6
    mode: str = "certify"
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    exact_limit: int = DEFAULT_EXACT_LIMIT
    dense_limit: int = 4096
    factor: float = 2.0

    @property
    def rule(self) -> str:
        if self.s_rule:
            return self.s_rule
        if self.name in DEFAULT_SETS:
            return DEFAULT_SETS[self.name]
        return "gens"

    def instantiate(self, param: int) -> MultiGraph:
        name = self.name
        if name == "affine-schreier":
            ctor, kind = affine, "schreier"
        elif name == "cyclic-cayley":
            ctor, kind = cyclic, "cayley"
        else:
            base, _, kind = name.rpartition("-")
            if base not in FAMILIES or kind not in ("schreier", "cayley"):
                raise ValueError(f"unknown family {name!r}: expected affine-schreier, cyclic-cayley "
                                 f"or <{'|'.join(sorted(FAMILIES))}>-<schreier|cayley>")
            ctor = FAMILIES[base]
        G = ctor(param)
        size = G.degree if kind == "schreier" else G.order
        if size > self.max_vertices:
            raise ValueError(f"{G.label}: {size} vertices exceeds max_vertices {self.max_vertices}")
        graph = build_graph(G, self.rule, kind, self.seed)
        graph.meta["param"] = param
        return graph


def build_graph(G: FiniteGroup, s_rule: str, kind: str = "schreier", seed: int = 0) -> MultiGraph:
    """Schreier graph of the natural action or Cayley graph for a connection-set spec.

    Schreier graphs built from affine words (t+a, ma) record the modulus and
    multipliers so the certificate search can try residue-structured sets.
    """
    S = parse_connection_set(s_rule, G, seed=seed)
    if kind == "schreier":
        meta = {}
        if S.multipliers or any(tok.strip().startswith(("t", "pm")) for tok in s_rule.split(",")):
            meta = {"modulus": G.degree, "multipliers": list(S.multipliers)}
        return schreier_graph(GroupAction(G), S.elements, S.label, meta)
    if kind == "cayley":
        return cayley_graph(G, S.elements, S.label)
    raise ValueError(f"unknown graph kind {kind!r}: expected schreier or cayley")


@dataclass
class SweepRow:
    param: int
    vertices: int | None = None
    degree: int | None = None
    h_upper: Fraction | None = None
    gap: float | None = None
    h_exact: Fraction | None = None
    certificate: dict | None = None
    error: str | None = None


@dataclass
class SweepReport:
    family: str
    mode: str
    s_rule: str
    rows: list[SweepRow]
    strictly_decreasing: bool
    factor: float
    factor_ok: bool
    decay: bool

    def to_dict(self, certificates: bool = True) -> dict:
        rows = []
        for r in self.rows:
            d = asdict(r)
            for key in ("h_upper", "h_exact"):
                if d[key] is not None:
                    d[key] = f"{d[key].numerator}/{d[key].denominator}"
            if d["gap"] is not None:
                d["gap"] = float(f"{d['gap']:.12g}")
            if not certificates:
                d.pop("certificate")
            rows.append(d)
        return {"family": self.family, "mode": self.mode, "s": self.s_rule, "rows": rows,
                "strictly_decreasing": self.strictly_decreasing, "factor": self.factor,
                "factor_ok": self.factor_ok, "decay": self.decay}

    def to_json(self, certificates: bool = True) -> str:
        return json.dumps(self.to_dict(certificates), sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["param", "vertices", "degree", "h_upper_num", "h_upper_den", "gap", "h_exact"])
        for r in self.rows:
            w.writerow([r.param, r.vertices if r.vertices is not None else "", r.degree if r.degree is not None else "",
                        r.h_upper.numerator if r.h_upper is not None else "",
                        r.h_upper.denominator if r.h_upper is not None else "",
                        f"{r.gap:.12g}" if r.gap is not None else "",
                        f"{r.h_exact.numerator}/{r.h_exact.denominator}" if r.h_exact is not None else ""])
        return buf.getvalue()


def sweep_row(fd: FamilyDescriptor, param: int) -> SweepRow:
    from .spectral import spectral_gap

    row = SweepRow(param)
    try:
        graph = fd.instantiate(param)
        row.vertices, row.degree = graph.m, graph.d
        if fd.mode == "exact":
            value, X = h_ver_exact_witness(graph, fd.exact_limit)
            cert = certificate(graph, X, "exact")
            row.h_exact = value
        elif fd.mode == "certify":
            cert = folner_search(graph, fd.budget, fd.seed)
            if graph.m <= fd.exact_limit:
                row.h_exact = h_ver_exact_witness(graph, fd.exact_limit)[0]
        else:
            raise ValueError(f"unknown mode {fd.mode!r}: expected exact or certify")
        if not cert.verify(graph):
            raise AssertionError("certificate failed re-verification")
        row.h_upper = cert.ratio
        row.certificate = cert.to_dict()
        row.gap = spectral_gap(graph, fd.dense_limit)
    except Exception as exc:  # reported as an error row, never dropped
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def decay_verdict(values: list[Fraction | None], factor: float = 2.0) -> tuple[bool, bool]:
    """(strictly decreasing, last <= first / factor); False if any value is missing."""
    if len(values) < 2 or any(v is None for v in values):
        return False, False
    strict = all(b < a for a, b in zip(values, values[1:]))
    return strict, values[-1] * Fraction(factor).limit_denominator(10**6) <= values[0]


def family_sweep(fd: FamilyDescriptor, jobs: int = 1) -> SweepReport:
    params = sorted(fd.params)
    if jobs > 1 and len(params) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(sweep_row, [fd] * len(params), params))
    else:
        rows = [sweep_row(fd, p) for p in params]
    strict, factor_ok = decay_verdict([r.h_upper for r in rows], fd.factor)
    return SweepReport(fd.name, fd.mode, fd.rule, rows, strict, fd.factor, factor_ok, strict and factor_ok)


# ------------------------------------------------------------ solvable families

@dataclass
class SolvableRow:
    group: str
    order: int
    derived_length: int | None
    ab: dict[int, int] = field(default_factory=dict)
    lw_constant: float | None = None
    generates: bool | None = None
    flagged: str | None = None


def solvable_nonexpansion_report(groups: list[FiniteGroup], s_rule: str | None = None, k: int = 1,
                                 lattice_limit: int = 2000) -> dict:
    """Derived length, ab_1..ab_k and the abelianization constant per group.

    Groups with equal derived length are compared at each fixed k: a strictly
    growing ab_k along the list is the signature of a family without bounded
    abelianizations, hence not an expanding sequence.
    """
    from .growth import ab_profile, lw_constant

    rows = []
    for G in groups:
        row = SolvableRow(G.label, G.order, derived_length(G))
        if row.derived_length is None:
            row.flagged = "not solvable"
            rows.append(row)
            continue
        try:
            row.ab = ab_profile(G, k, lattice_limit)
            row.lw_constant = lw_constant(G, lattice_limit)
            if s_rule:
                S = parse_connection_set(s_rule, G)
                row.generates = G.subgroup(S.elements).order == G.order
        except ValueError as exc:
            row.flagged = str(exc)
        rows.append(row)
    verdicts = []
    by_len: dict[int, list[SolvableRow]] = {}
    for r in rows:
        if r.flagged is None:
            by_len.setdefault(r.derived_length, []).append(r)
    for ell, rs in sorted(by_len.items()):
        if len(rs) < 2:
            continue
        for kk in range(1, k + 1):
            vals = [r.ab[kk] for r in rs]
            if all(b > a for a, b in zip(vals, vals[1:])):
                verdicts.append(f"derived length {ell}: ab_{kk} grows {vals} at fixed k; "
                                "no bounded abelianizations, so not an expanding sequence")
    return {"rows": [asdict(r) | {"ab": {str(a): b for a, b in r.ab.items()}} for r in rows],
            "verdicts": verdicts}
