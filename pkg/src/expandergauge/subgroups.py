"""Subgroup enumeration over an element table.

Subgroups are bitmasks (Python ints) over element indices.  Two routes:
the full lattice by cyclic extension (small groups), and low-index subgroups
via transitive actions on at most k points (larger groups, small k).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product

import numpy as np

from .elements import ElementTable
from .perm import FiniteGroup, Permutation

DEFAULT_LATTICE_LIMIT = 2000
DEFAULT_LOW_INDEX_LIMIT = 6


@dataclass
class SubgroupRecord:
    """A subgroup H <= G with its abelianization data."""

    mask: int = field(repr=False)
    generators: list[int]
    order: int
    index: int
    abelianization_index: int
    relative_index: int | None = None

    def contains(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def elements(self) -> list[int]:
        return mask_members(self.mask)

    def to_dict(self) -> dict:
        out = {"order": self.order, "index": self.index,
               "abelianization_index": self.abelianization_index,
               "generators": self.generators}
        if self.relative_index is not None:
            out["relative_index"] = self.relative_index
        return out


def mask_members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        low = mask & -mask
        i = low.bit_length() - 1
        out.append(i)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(table: ElementTable, gens: list[int]) -> int:
    return table.closure(gens)


def generators_of(table: ElementTable, mask: int) -> list[int]:
    """A short generating list for the subgroup given by ``mask``."""
    gens: list[int] = []
    cur = 1
    for x in mask_members(mask):
        if not cur >> x & 1:
            gens.append(x)
            cur = table.closure(gens)
            if cur == mask:
                break
    return gens


def commutator_index(table: ElementTable, a: int, b: int) -> int:
    inv = table.inv
    return table.mul(table.mul(table.mul(int(inv[a]), int(inv[b])), a), b)


def derived_mask(table: ElementTable, gens: list[int]) -> tuple[int, list[int]]:
    """H' for H = <gens>: normal closure in H of the generator commutators."""
    dgens = [c for c in dict.fromkeys(commutator_index(table, a, b) for a in gens for b in gens) if c != 0]
    D = table.closure(dgens)
    changed = True
    while changed:
        changed = False
        for h in gens:
            hi = int(table.inv[h])
            for d in list(dgens):
                c = table.mul(table.mul(hi, d), h)
                if not D >> c & 1:
                    dgens.append(c)
                    D = table.closure(dgens)
                    changed = True
    return D, dgens


def _record(table: ElementTable, mask: int, gens: list[int], N: int) -> SubgroupRecord:
    order = popcount(mask)
    D, _ = derived_mask(table, gens)
    return SubgroupRecord(mask, list(gens), order, N // order, order // popcount(D))


def subgroup_lattice(G: FiniteGroup, limit: int = DEFAULT_LATTICE_LIMIT) -> list[SubgroupRecord]:
    """Every subgroup of G exactly once, by joining cyclic subgroups to fixpoint."""
    if G.order > limit:
        raise ValueError(f"group order {G.order} exceeds lattice limit {limit}")
    table = G.elements()
    N = table.order
    cyclic: dict[int, int] = {}
    for x in range(N):
        cyclic.setdefault(table.closure([x]), x)
    subs: dict[int, list[int]] = {1: []}
    for mask, x in cyclic.items():
        subs.setdefault(mask, [x] if x else [])
    queue = list(subs)
    cyc_items = [(m, x) for m, x in cyclic.items() if x]
    for H in queue:
        gens = subs[H]
        for Z, z in cyc_items:
            if H >> z & 1:
                continue
            J = table.closure(gens + [z])
            if J not in subs:
                subs[J] = gens + [z]
                queue.append(J)
    records = [_record(table, m, g, N) for m, g in subs.items()]
    records.sort(key=lambda s: (s.index, s.mask))
    return records


def _sym_table(j: int):
    perms = list(permutations(range(j)))
    index = {p: i for i, p in enumerate(perms)}
    mul = [[index[tuple(b[a[x]] for x in range(j))] for b in perms] for a in perms]
    orders = []
    for p in perms:
        k, cur = 1, p
        while cur != tuple(range(j)):
            cur = tuple(p[cur[x]] for x in range(j))
            k += 1
        orders.append(k)
    return perms, mul, orders


def _canonical_transitive(images: tuple, j: int) -> bool:
    seen = [False] * j
    seen[0] = True
    queue = [0]
    nxt = 1
    for x in queue:
        for s in images:
            y = s[x]
            if not seen[y]:
                if y != nxt:
                    return False
                seen[y] = True
                nxt += 1
                queue.append(y)
    return nxt == j


def low_index_subgroups(G: FiniteGroup, k: int, limit: int = DEFAULT_LOW_INDEX_LIMIT) -> list[SubgroupRecord]:
    """All subgroups of index <= k from transitive actions of G on j <= k points.

    For each j, generator images in Sym(j) are enumerated with the canonical
    BFS labeling (one representative per pointed action); a candidate is kept
    when it extends consistently to a homomorphism over the whole element table.
    The stabilizer of point 0 is the subgroup.
    """
    if k > limit:
        raise ValueError(f"index bound {k} exceeds the low-index limit {limit}")
    table = G.elements()
    N = table.order
    gidx = table.generator_indices()
    gorders = [g.order() for g in G.generators]
    cols = [table.right_mult(g) for g in gidx]
    found: dict[int, None] = {}
    out = []
    full = (1 << N) - 1
    out.append(_record(table, full, generators_of(table, full), N))
    found[full] = None
    for j in range(2, k + 1):
        if N % j:
            continue
        perms, mul, orders = _sym_table(j)
        cands = [[i for i, o in enumerate(orders) if go % o == 0] for go in gorders]
        for combo in product(*cands):
            if not _canonical_transitive(tuple(perms[i] for i in combo), j):
                continue
            phi = [-1] * N
            phi[0] = 0
            queue = [0]
            ok = True
            for x in queue:
                px = mul[phi[x]]
                for col, s in zip(cols, combo):
                    y = col[x]
                    img = px[s]
                    if phi[y] < 0:
                        phi[y] = img
                        queue.append(y)
                    elif phi[y] != img:
                        ok = False
                        break
                if not ok:
                    break
            if not ok or len(queue) != N:
                continue
            mask = 0
            for x in range(N):
                if perms[phi[x]][0] == 0:
                    mask |= 1 << x
            if mask in found:
                continue
            found[mask] = None
            out.append(_record(table, mask, generators_of(table, mask), N))
    out.sort(key=lambda s: (s.index, s.mask))
    return out


def subgroups_up_to_index(G: FiniteGroup, k: int, lattice_limit: int = DEFAULT_LATTICE_LIMIT,
                          low_index_limit: int = DEFAULT_LOW_INDEX_LIMIT) -> list[SubgroupRecord]:
    """All subgroups of index at most k."""
    if k < 1:
        raise ValueError("index bound must be >= 1")
    if G.order <= lattice_limit:
        return [s for s in subgroup_lattice(G, lattice_limit) if s.index <= k]
    if k <= low_index_limit:
        return low_index_subgroups(G, k, low_index_limit)
    raise ValueError(f"group order {G.order} exceeds lattice limit {lattice_limit} "
                     f"and index bound {k} exceeds low-index limit {low_index_limit}")


def subgroup_mask(G: FiniteGroup, H: FiniteGroup | list[Permutation]) -> int:
    """Bitmask of a subgroup of G given as a group or generator list."""
    table = G.elements()
    gens = H.generators if isinstance(H, FiniteGroup) else H
    return table.closure([table.index(g) for g in gens])
