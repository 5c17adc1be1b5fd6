"""Permutations and permutation groups.

Permutations act on the right: ``x^(g*h) = (x^g)^h``, so ``g * h`` applies
``g`` first.  Groups are immutable; the stabilizer chain is built lazily by a
deterministic Schreier-Sims (base points chosen as first moved points).
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence


class Permutation:
    """A bijection of ``{0, ..., n-1}`` stored as its image array."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int], check: bool = True):
        images = tuple(int(x) for x in images)
        if check and sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images!r}")
        self.images = images
        self._hash = None

    @classmethod
    def _raw(cls, images: tuple) -> Permutation:
        p = cls.__new__(cls)
        p.images = images
        p._hash = None
        return p

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls._raw(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> Permutation:
        images = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Permutation) -> Permutation:
        if len(other.images) != len(self.images):
            raise ValueError("degree mismatch")
        return Permutation._raw(_mul(self.images, other.images))

    def __invert__(self) -> Permutation:
        return Permutation._raw(_inv(self.images))

    inverse = __invert__

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return (~self) ** (-k)
        result = tuple(range(len(self.images)))
        base = self.images
        while k:
            if k & 1:
                result = _mul(result, base)
            base = _mul(base, base)
            k >>= 1
        return Permutation._raw(result)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm

        return lcm(1, *(len(c) for c in self.cycles()))

    def fixed_points(self) -> int:
        return sum(1 for i, x in enumerate(self.images) if i == x)

    def __repr__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return f"Permutation(id, n={len(self.images)})"
        return "Permutation(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) + f", n={len(self.images)})"


def _mul(a: tuple, b: tuple) -> tuple:
    return tuple(map(b.__getitem__, a))


def _inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def _is_id(a: tuple) -> bool:
    return all(i == x for i, x in enumerate(a))


def _first_moved(a: tuple) -> int:
    for i, x in enumerate(a):
        if i != x:
            return i
    return -1


class _Chain:
    """Base, strong generators per level and explicit transversals."""

    def __init__(self, gens: list[tuple], n: int, base: Sequence[int] = ()):
        self.n = n
        gens = [g for g in dict.fromkeys(gens) if not _is_id(g)]
        self.base = list(base)
        for g in gens:
            if all(g[b] == b for b in self.base):
                self.base.append(_first_moved(g))
        k = len(self.base)
        self.gens = [[g for g in gens if all(g[b] == b for b in self.base[:i])] for i in range(k)]
        self.trans = [None] * k
        self.tinv = [None] * k
        for i in range(k):
            self._orbit(i)
        self._run()

    def _orbit(self, i: int) -> None:
        b = self.base[i]
        ident = tuple(range(self.n))
        trans = {b: ident}
        queue = [b]
        for x in queue:
            u = trans[x]
            for s in self.gens[i]:
                y = s[x]
                if y not in trans:
                    trans[y] = _mul(u, s)
                    queue.append(y)
        self.trans[i] = trans
        self.tinv[i] = {x: _inv(u) for x, u in trans.items()}

    def strip(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        for lvl in range(start, len(self.base)):
            beta = g[self.base[lvl]]
            tinv = self.tinv[lvl]
            if beta not in tinv:
                return g, lvl
            g = _mul(g, tinv[beta])
        return g, len(self.base)

    def _run(self) -> None:
        i = len(self.base) - 1
        while i >= 0:
            jump = self._check_level(i)
            i = i - 1 if jump is None else jump

    def _check_level(self, i: int):
        trans = self.trans[i]
        tinv = self.tinv[i]
        for beta, u in list(trans.items()):
            for s in list(self.gens[i]):
                us = _mul(u, s)
                gamma = s[beta]
                if us == trans[gamma]:
                    continue
                h, j = self.strip(_mul(us, tinv[gamma]), i + 1)
                k = len(self.base)
                if j == k:
                    if _is_id(h):
                        continue
                    self.base.append(_first_moved(h))
                    self.gens.append([])
                    self.trans.append(None)
                    self.tinv.append(None)
                for lvl in range(i + 1, j + 1):
                    self.gens[lvl].append(h)
                    self._orbit(lvl)
                return j
        return None

    @property
    def order(self) -> int:
        out = 1
        for t in self.trans:
            out *= len(t)
        return out


class FiniteGroup:
    """A permutation group given by generators.

    Order, membership and base are derived from a stabilizer chain that is
    computed on first use and cached.
    """

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None,
                 label: str = "", base: Sequence[int] = ()):
        gens = tuple(generators)
        degrees = {g.degree for g in gens}
        if len(degrees) > 1:
            raise ValueError(f"generators have mismatched degrees {sorted(degrees)}")
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generator list")
            degree = gens[0].degree
        elif degrees and degrees != {degree}:
            raise ValueError(f"generators have degree {degrees.pop()}, expected {degree}")
        self.degree = degree
        self.generators = gens
        self.label = label
        self._base_hint = tuple(base)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label or '?'}, degree={self.degree}, ngens={len(self.generators)})"

    @cached_property
    def _chain(self) -> _Chain:
        return _Chain([g.images for g in self.generators], self.degree, self._base_hint)

    @property
    def order(self) -> int:
        return self._chain.order

    def __len__(self) -> int:
        return self.order

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(self._chain.base)

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def orbit_lengths(self) -> list[int]:
        return [len(t) for t in self._chain.trans]

    def strong_generators(self, level: int = 0) -> list[Permutation]:
        ch = self._chain
        if level >= len(ch.base):
            return []
        return [Permutation._raw(g) for g in ch.gens[level]]

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        h, j = self._chain.strip(g.images)
        return j == len(self._chain.base) and _is_id(h)

    __contains__ = contains

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(a * b == b * a for i, a in enumerate(gs) for b in gs[i + 1:])

    def orbit(self, point: int) -> list[int]:
        seen = {point: None}
        queue = [point]
        for x in queue:
            for g in self.generators:
                y = g.images[x]
                if y not in seen:
                    seen[y] = None
                    queue.append(y)
        return queue

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree if self.degree else True

    def stabilizer(self, point: int) -> FiniteGroup:
        """Point stabilizer, read off a stabilizer chain whose base starts at ``point``."""
        ch = _Chain([g.images for g in self.generators], self.degree, (point,))
        gens = [Permutation._raw(g) for g in (ch.gens[1] if len(ch.base) > 1 else [])]
        return FiniteGroup(gens, self.degree, label=f"Stab_{self.label}({point})")

    def subgroup(self, gens: Iterable[Permutation], label: str = "") -> FiniteGroup:
        return FiniteGroup(gens, self.degree, label=label)

    def random_element(self, rng) -> Permutation:
        g = tuple(range(self.degree))
        for trans in self._chain.trans:
            pts = sorted(trans)
            g = _mul(trans[pts[rng.randrange(len(pts))]], g)
        return Permutation._raw(g)

    @cached_property
    def _elements(self):
        from .elements import ElementTable

        return ElementTable(self)

    def elements(self, limit: int | None = None):
        """The :class:`ElementTable` of this group (all elements enumerated)."""
        if limit is not None and self.order > limit:
            raise ValueError(f"group order {self.order} exceeds element limit {limit}")
        return self._elements


def group_from_generators(gens: Sequence[Permutation], degree: int | None = None,
                          label: str = "") -> FiniteGroup:
    """Build a group; an empty generator list gives the trivial group of ``degree``."""
    return FiniteGroup(gens, degree, label=label)


def commutator(a: Permutation, b: Permutation) -> Permutation:
    return ~a * ~b * a * b


def normal_closure(G: FiniteGroup, gens: Iterable[Permutation], label: str = "") -> FiniteGroup:
    """Smallest subgroup containing ``gens`` that is normalized by ``G``."""
    current = [g for g in dict.fromkeys(gens) if not g.is_identity()]
    N = FiniteGroup(current, G.degree, label=label)
    changed = True
    while changed:
        changed = False
        for x in G.generators:
            xi = ~x
            for d in list(current):
                c = xi * d * x
                if c not in N:
                    current.append(c)
                    N = FiniteGroup(current, G.degree, label=label)
                    changed = True
    return N


def commutator_subgroup(G: FiniteGroup, H: FiniteGroup, label: str = "") -> FiniteGroup:
    """[G, H] for H normal in G: normal closure of generator commutators."""
    comms = [commutator(a, b) for a in G.generators for b in H.generators]
    return normal_closure(G, comms, label=label)


def derived_subgroup(G: FiniteGroup) -> FiniteGroup:
    return commutator_subgroup(G, G, label=f"[{G.label},{G.label}]")


def derived_series(G: FiniteGroup) -> list[FiniteGroup]:
    """G = G^(0) > G^(1) > ... until the order stops dropping."""
    series = [G]
    while series[-1].order > 1:
        D = derived_subgroup(series[-1])
        if D.order == series[-1].order:
            break
        series.append(D)
    return series


def derived_length(G: FiniteGroup) -> int | None:
    """Derived length, or ``None`` when G is not solvable."""
    series = derived_series(G)
    if series[-1].order != 1:
        return None
    return len(series) - 1


def lower_central_series(G: FiniteGroup) -> list[FiniteGroup]:
    series = [G]
    while series[-1].order > 1:
        nxt = commutator_subgroup(G, series[-1])
        if nxt.order == series[-1].order:
            break
        series.append(nxt)
    return series


def nilpotency_class(G: FiniteGroup) -> int | None:
    """Nilpotency class, or ``None`` when the lower central series stalls above 1."""
    series = lower_central_series(G)
    if series[-1].order != 1:
        return None
    return len(series) - 1


class GroupAction:
    """A group acting on points ``0..m-1``.

    ``kind`` is ``"natural"`` (the permutation action itself) or ``"regular"``
    (right multiplication on the element table).
    """

    def __init__(self, group: FiniteGroup, kind: str = "natural"):
        if kind not in ("natural", "regular"):
            raise ValueError(f"unknown action kind {kind!r}")
        self.group = group
        self.kind = kind
        if kind == "natural":
            self.size = group.degree
        else:
            self.size = group.order

    @property
    def points(self) -> range:
        return range(self.size)

    def act(self, x: int, g: Permutation) -> int:
        if self.kind == "natural":
            return g.images[x]
        table = self.group.elements()
        return table.mul(x, table.index(g))

    def image_map(self, g: Permutation) -> list[int]:
        """``[act(x, g) for x in points]``, computed in one pass."""
        if self.kind == "natural":
            return list(g.images)
        table = self.group.elements()
        return table.right_mult(table.index(g))

    @cached_property
    def is_transitive(self) -> bool:
        if self.kind == "regular":
            return True
        return self.group.is_transitive()

    def fixed_points(self, g: Permutation) -> int:
        if self.kind == "natural":
            return g.fixed_points()
        return self.size if g.is_identity() else 0

    def stabilizer(self, point: int = 0) -> FiniteGroup:
        if self.kind == "natural":
            return self.group.stabilizer(point)
        return FiniteGroup([], self.group.degree, label="1")
