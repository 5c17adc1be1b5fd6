"""Constructors for the group families used throughout, plus spec strings.

A group spec is ``name:param`` (``affine:13``, ``wreath:3``), optionally with a
direct power suffix (``psl2:7^2``), products joined by ``*``
(``cyclic:4*cyclic:2``), or ``gens:PATH`` to load a generator file with one
permutation per line as a space-separated image list.
"""

from __future__ import annotations

import re
from pathlib import Path

from .perm import FiniteGroup, Permutation


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _require_prime(p: int, what: str) -> None:
    if not is_prime(p):
        raise ValueError(f"{what} requires a prime, got {p}")


def primitive_root(p: int) -> int:
    _require_prime(p, "primitive_root")
    if p == 2:
        return 1
    phi = p - 1
    factors = [q for q in range(2, phi + 1) if phi % q == 0 and is_prime(q)]
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    raise AssertionError("unreachable")


def _perm(images) -> Permutation:
    return Permutation(images)


def cyclic(n: int) -> FiniteGroup:
    """C_n acting regularly on Z/n by x -> x+1."""
    if n < 1:
        raise ValueError("cyclic(n) needs n >= 1")
    gens = [_perm([(x + 1) % n for x in range(n)])] if n > 1 else []
    return FiniteGroup(gens, n, label=f"C{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n acting on the n-gon (x -> x+1, x -> -x)."""
    if n < 3:
        raise ValueError("dihedral(n) needs n >= 3")
    r = _perm([(x + 1) % n for x in range(n)])
    f = _perm([(-x) % n for x in range(n)])
    return FiniteGroup([r, f], n, label=f"D{n}")


def affine(p: int) -> FiniteGroup:
    """Aff_1(p) = {x -> ax+b} acting on F_p."""
    _require_prime(p, "affine")
    t = _perm([(x + 1) % p for x in range(p)])
    gens = [t]
    if p > 2:
        g = primitive_root(p)
        gens.append(_perm([(g * x) % p for x in range(p)]))
    return FiniteGroup(gens, p, label=f"Aff1({p})")


def _projective_points(p: int) -> list[tuple[int, int]]:
    return [(x, 1) for x in range(p)] + [(1, 0)]


def _proj_index(v: tuple[int, int], p: int) -> int:
    x, y = v[0] % p, v[1] % p
    if y == 0:
        return p
    return x * pow(y, -1, p) % p


def _matrix_on_line(a: int, b: int, c: int, d: int, p: int) -> Permutation:
    # row vector (x, y) times [[a, b], [c, d]]
    images = [_proj_index((x * a + y * c, x * b + y * d), p) for x, y in _projective_points(p)]
    return _perm(images)


def _matrix_on_vectors(a: int, b: int, c: int, d: int, p: int) -> Permutation:
    vecs = [(x, y) for x in range(p) for y in range(p) if (x, y) != (0, 0)]
    index = {v: i for i, v in enumerate(vecs)}
    return _perm([index[((x * a + y * c) % p, (x * b + y * d) % p)] for x, y in vecs])


def psl2(p: int) -> FiniteGroup:
    """PSL_2(p) acting on the projective line (p+1 points, infinity = p)."""
    _require_prime(p, "psl2")
    gens = [_matrix_on_line(1, 1, 0, 1, p), _matrix_on_line(1, 0, 1, 1, p)]
    return FiniteGroup(gens, p + 1, label=f"PSL2({p})")


def sl2(p: int) -> FiniteGroup:
    """SL_2(p) acting faithfully on the p^2-1 nonzero vectors of F_p^2."""
    _require_prime(p, "sl2")
    gens = [_matrix_on_vectors(1, 1, 0, 1, p), _matrix_on_vectors(1, 0, 1, 1, p)]
    return FiniteGroup(gens, p * p - 1, label=f"SL2({p})")


def wreath_cyclic(p: int) -> FiniteGroup:
    """C_p wr C_p in its imprimitive action on p^2 points (block i = points ip..ip+p-1)."""
    _require_prime(p, "wreath_cyclic")
    n = p * p
    base = _perm([(x // p) * p + ((x % p) + 1) % p if x < p else x for x in range(n)])
    top = _perm([((x // p + 1) % p) * p + x % p for x in range(n)])
    return FiniteGroup([base, top], n, label=f"C{p}wrC{p}")


def sym(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("sym(n) needs n >= 1")
    gens = []
    if n > 1:
        gens.append(Permutation.from_cycles(n, (0, 1)))
    if n > 2:
        gens.append(Permutation.from_cycles(n, tuple(range(n))))
    return FiniteGroup(gens, n, label=f"Sym{n}")


def alt(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("alt(n) needs n >= 1")
    gens = []
    if n >= 3:
        gens.append(Permutation.from_cycles(n, (0, 1, 2)))
    if n >= 4:
        cyc = tuple(range(n)) if n % 2 else tuple(range(1, n))
        gens.append(Permutation.from_cycles(n, cyc))
    return FiniteGroup(gens, n, label=f"Alt{n}")


def direct_product(*groups: FiniteGroup) -> FiniteGroup:
    """Direct product acting on the disjoint union of the point sets."""
    if not groups:
        raise ValueError("direct_product needs at least one factor")
    n = sum(G.degree for G in groups)
    gens = []
    offset = 0
    for G in groups:
        for g in G.generators:
            images = list(range(n))
            for x, y in enumerate(g.images):
                images[offset + x] = offset + y
            gens.append(Permutation(images))
        offset += G.degree
    return FiniteGroup(gens, n, label="x".join(G.label for G in groups))


def direct_power(G: FiniteGroup, m: int) -> FiniteGroup:
    if m < 1:
        raise ValueError("direct_power needs m >= 1")
    H = direct_product(*([G] * m))
    H.label = f"{G.label}^{m}" if m > 1 else G.label
    return H


def read_generators(path: str | Path) -> FiniteGroup:
    """Load ``one image list per line`` text; blank lines and ``#`` comments skipped."""
    gens = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            gens.append(Permutation(int(x) for x in line.split()))
    if not gens:
        raise ValueError(f"{path}: no generators")
    return FiniteGroup(gens, label=Path(path).stem)


def write_generators(G: FiniteGroup) -> str:
    return "".join(" ".join(map(str, g.images)) + "\n" for g in G.generators)


FAMILIES = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "affine": affine,
    "sl2": sl2,
    "psl2": psl2,
    "wreath": wreath_cyclic,
    "sym": sym,
    "alt": alt,
}

_FACTOR_RE = re.compile(r"\s*([a-z][a-z0-9]*):(\d+)(?:\^(\d+))?\s*")


def parse_group(spec: str) -> FiniteGroup:
    """Build a group from a spec string such as ``affine:13`` or ``psl2:7^2``."""
    spec = spec.strip()
    if spec.startswith("gens:"):
        return read_generators(spec[5:])
    factors = []
    pos = 0
    while True:
        m = _FACTOR_RE.match(spec, pos)
        if not m:
            raise ValueError(f"group spec {spec!r}: at position {pos} expected 'name:int'")
        name, param, power = m.group(1), int(m.group(2)), m.group(3)
        if name not in FAMILIES:
            raise ValueError(f"group spec {spec!r}: at position {m.start(1)} unknown family {name!r}; "
                             f"expected one of {', '.join(sorted(FAMILIES))}")
        G = FAMILIES[name](param)
        if power is not None:
            G = direct_power(G, int(power))
        factors.append(G)
        pos = m.end()
        if pos == len(spec):
            break
        if spec[pos] != "*":
            raise ValueError(f"group spec {spec!r}: at position {pos} expected '*' or end")
        pos += 1
    return factors[0] if len(factors) == 1 else direct_product(*factors)
