"""Conjugacy classes and character tables (Burnside-Dixon over F_q).

Character values are stored as eigenvalue multiplicities: ``values[c, k, l]``
is how often ``zeta**l`` (``zeta = exp(2 pi i / e)``, ``e = exp(G)``) occurs as
an eigenvalue of the representation at the k-th class representative, so
``chi(g_k) = sum_l values[c, k, l] * zeta**l`` is an exact element of Z[zeta].
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import modq
from .families import is_prime
from .perm import FiniteGroup, GroupAction, derived_subgroup

DEFAULT_ELEMENT_LIMIT = 10000
DEFAULT_SEED = 20240601


@dataclass
class ConjugacyClasses:
    reps: list[int]
    sizes: list[int]
    class_of: np.ndarray
    members: list[np.ndarray]
    inverse: list[int]
    rep_orders: list[int]
    exponent: int
    group_order: int

    def __len__(self) -> int:
        return len(self.reps)


def conjugacy_classes(G: FiniteGroup, limit: int = DEFAULT_ELEMENT_LIMIT) -> ConjugacyClasses:
    """Orbits of G on itself under conjugation, identity class first."""
    table = G.elements(limit)
    N = table.order
    maps = [table.conjugation_map(s).tolist() for s in table.generator_indices()]
    class_id = [-1] * N
    raw = []
    for x in range(N):
        if class_id[x] >= 0:
            continue
        cid = len(raw)
        class_id[x] = cid
        orbit = [x]
        for y in orbit:
            for mp in maps:
                z = mp[y]
                if class_id[z] < 0:
                    class_id[z] = cid
                    orbit.append(z)
        raw.append(orbit)
    orders = table.element_orders()
    keyed = sorted(range(len(raw)), key=lambda c: (int(orders[raw[c][0]]), len(raw[c]), min(raw[c])))
    relabel = {old: new for new, old in enumerate(keyed)}
    members = [np.array(sorted(raw[c]), dtype=np.int64) for c in keyed]
    class_of = np.array([relabel[c] for c in class_id], dtype=np.int64)
    reps = [int(m[0]) for m in members]
    rep_orders = [int(orders[r]) for r in reps]
    inverse = [int(class_of[table.inv[r]]) for r in reps]
    exponent = math.lcm(*rep_orders) if rep_orders else 1
    return ConjugacyClasses(reps, [len(m) for m in members], class_of, members, inverse,
                            rep_orders, exponent, N)


def power_map(G: FiniteGroup, cc: ConjugacyClasses) -> np.ndarray:
    """``pm[k, t]`` = class of ``g_k ** t`` for ``0 <= t < exp(G)``."""
    table = G.elements()
    R = table.elems[cc.reps]
    cur = np.tile(np.arange(table.degree), (len(cc.reps), 1))
    pm = np.zeros((len(cc.reps), cc.exponent), dtype=np.int64)
    for t in range(cc.exponent):
        pm[:, t] = cc.class_of[table.index_rows(cur)]
        cur = np.take_along_axis(R, cur, axis=1)
    return pm


def class_matrix(G: FiniteGroup, cc: ConjugacyClasses, j: int) -> np.ndarray:
    """``M[i, k]`` = #{(x, y) in C_i x C_j : x y = g_k}."""
    table = G.elements()
    r = len(cc.reps)
    yinv = table.elems[table.inv[cc.members[j]]]
    Z = table.elems[cc.reps]
    # (z * y^-1)[p] = yinv[z[p]]
    rows = yinv[:, Z].reshape(-1, table.degree)
    cls = cc.class_of[table.index_rows(rows)].reshape(len(yinv), r)
    M = np.zeros((r, r), dtype=np.int64)
    np.add.at(M, (cls, np.broadcast_to(np.arange(r), cls.shape)), 1)
    return M


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _polydiv_exact(num, list(cyclotomic(d)))
    return tuple(num)


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dq = len(num) - len(den)
    quot = [0] * (dq + 1)
    for i in range(dq, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        quot[i] = c
        for j, dc in enumerate(den):
            num[i + j] -= c * dc
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return quot


def reduce_cyclotomic(coeffs, e: int) -> list[int]:
    """Reduce an integer polynomial modulo Phi_e (Phi_e is monic)."""
    c = [int(x) for x in coeffs]
    phi = cyclotomic(e)
    deg = len(phi) - 1
    for i in range(len(c) - 1, deg - 1, -1):
        lead = c[i]
        if lead:
            for j, pc in enumerate(phi):
                c[i - deg + j] -= lead * pc
    out = c[:deg] if deg else []
    return out + [0] * (deg - len(out))


def is_integer_in_zeta(coeffs, e: int) -> int | None:
    """If the element sum c_l zeta_e**l is a rational integer, return it."""
    red = reduce_cyclotomic(coeffs, e)
    if any(red[1:]):
        return None
    return red[0] if red else 0


class CharacterError(ArithmeticError):
    pass


@dataclass
class CharacterTable:
    group_label: str
    group_order: int
    classes: ConjugacyClasses
    exponent: int
    degrees: list[int]
    values: np.ndarray
    prime: int

    @property
    def class_sizes(self) -> list[int]:
        return self.classes.sizes

    @property
    def inverse_classes(self) -> list[int]:
        return self.classes.inverse

    def __len__(self) -> int:
        return len(self.degrees)

    def complex_values(self) -> np.ndarray:
        zeta = np.exp(2j * np.pi * np.arange(self.exponent) / self.exponent)
        return self.values @ zeta

    def conj_values(self, a: int = 1) -> np.ndarray:
        zeta = np.exp(2j * np.pi * a * np.arange(self.exponent) / self.exponent)
        return self.values @ zeta

    def to_dict(self) -> dict:
        return {
            "group": self.group_label,
            "order": self.group_order,
            "exponent": self.exponent,
            "prime": self.prime,
            "class_representatives": self.classes.reps,
            "class_sizes": self.classes.sizes,
            "inverse_classes": self.classes.inverse,
            "degrees": self.degrees,
            "values": self.values.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def dixon_prime(order: int, exponent: int, lower: int = 0, start: int = 0) -> int:
    """Smallest prime q = 1 (mod exponent) with q > max(2*isqrt(order), lower, start)."""
    bound = max(2 * math.isqrt(order), lower, start)
    q = (bound // exponent + 1) * exponent + 1
    while not is_prime(q):
        q += exponent
    return q


def _split_spaces(spaces, A, q):
    out = []
    for V, P in spaces:
        d = V.shape[1]
        if d == 1:
            out.append((V, P))
            continue
        B = modq.matmul(A, V, q)[P, :]
        H, Q = modq.hessenberg(B, q, transform=True)
        roots = modq.poly_roots(modq.charpoly(H, q), q)
        if len(roots) <= 1:
            out.append((V, P))
            continue
        total = 0
        VQ = modq.matmul(V, Q, q)
        eye = np.eye(d, dtype=np.int64)
        for lam in roots:
            Nl = modq.nullspace_echelon((H - lam * eye) % q, q)
            total += Nl.shape[1]
            W, Pw = modq.column_echelon(modq.matmul(VQ, Nl, q), q)
            out.append((W, Pw))
        if total != d:
            raise CharacterError("class algebra not diagonalizable modulo q")
    return out


def _dixon_attempt(G, cc, pm, q, seed, rounds=30):
    r = len(cc.reps)
    N = cc.group_order
    e = cc.exponent
    modq.check_modulus(q, max(r, e))
    rng = random.Random(seed)
    cache_ok = r ** 3 <= 4_000_000
    cache: dict[int, np.ndarray] = {}

    def cm(j):
        if j in cache:
            return cache[j]
        M = class_matrix(G, cc, j) % q
        if cache_ok:
            cache[j] = M
        return M

    spaces = [(np.eye(r, dtype=np.int64), list(range(r)))]
    js = list(range(1, r))
    for rnd in range(rounds + len(js)):
        if all(V.shape[1] == 1 for V, _ in spaces):
            break
        if rnd < rounds:
            A = np.zeros((r, r), dtype=np.int64)
            for j in js:
                c = rng.randrange(q)
                if c:
                    A = (A + c * cm(j)) % q
        else:
            A = cm(js[rnd - rounds])
        spaces = _split_spaces(spaces, A, q)
    if not all(V.shape[1] == 1 for V, _ in spaces):
        raise CharacterError("could not separate all characters")

    sizes = np.array(cc.sizes, dtype=np.int64)
    size_inv = np.array([pow(int(s), q - 2, q) for s in cc.sizes], dtype=np.int64)
    inv_cls = np.array(cc.inverse)
    degrees = []
    thetas = []
    for V, _ in spaces:
        w = V[:, 0] % q
        w = w * pow(int(w[0]), q - 2, q) % q
        denom = int(np.sum(w * w[inv_cls] % q * size_inv % q) % q)
        if denom == 0:
            raise CharacterError("zero norm modulo q")
        dsq = N % q * pow(denom, q - 2, q) % q
        cands = [d for d in range(1, math.isqrt(N) + 1) if d * d % q == dsq and N % d == 0]
        if len(cands) != 1:
            raise CharacterError("degree recovery failed")
        d = cands[0]
        degrees.append(d)
        thetas.append(d * w % q * size_inv % q)
    if sum(d * d for d in degrees) != N:
        raise CharacterError("sum of squared degrees differs from |G|")

    Theta = np.array(thetas, dtype=np.int64)
    z = pow(modq.primitive_root(q), (q - 1) // e, q)
    zinv = pow(z, q - 2, q)
    F = np.array([[pow(zinv, (l * t) % e, q) for l in range(e)] for t in range(e)], dtype=np.int64)
    einv = pow(e, q - 2, q)
    values = np.zeros((r, r, e), dtype=np.int64)
    for c in range(r):
        T = Theta[c][pm]
        values[c] = modq.matmul(T, F, q) * einv % q
        if (values[c] > degrees[c]).any() or (values[c].sum(axis=1) != degrees[c]).any():
            raise CharacterError("character value lift out of range")
    order = sorted(range(r), key=lambda c: (degrees[c], [-int(v) for v in values[c][:, 0]],
                                            values[c].ravel().tolist()))
    return [degrees[c] for c in order], values[order]


def character_table(G: FiniteGroup, limit: int = DEFAULT_ELEMENT_LIMIT, seed: int = DEFAULT_SEED,
                    min_prime: int = 0, verify: bool = True) -> CharacterTable:
    """Complete irreducible character table of G.

    Works modulo the smallest admissible prime and moves to the next one when
    any consistency check fails.
    """
    cc = conjugacy_classes(G, limit)
    pm = power_map(G, cc)
    N = cc.group_order
    e = cc.exponent
    abel = N // derived_subgroup(G).order if N > 1 else 1
    q = dixon_prime(N, e, lower=max(min_prime, 2 * abel))
    last = None
    for _ in range(8):
        try:
            degrees, values = _dixon_attempt(G, cc, pm, q, seed)
            table = CharacterTable(G.label, N, cc, e, degrees, values, q)
            if verify:
                check_orthogonality(table)
            return table
        except (CharacterError, OverflowError) as exc:
            last = exc
            q = dixon_prime(N, e, start=q)
    raise CharacterError(f"character table failed for {G.label}: {last}")


def _gram_exact(X: np.ndarray, weights: np.ndarray, e: int) -> np.ndarray:
    """Coefficients of sum_k w_k x_k(zeta) conj(y_k(zeta)) in Z[x]/(x^e - 1) for all row pairs."""
    R = X.shape[0]
    flatY = X.reshape(R, -1).astype(object) if X.max(initial=0) * weights.max(initial=0) * X.shape[1] * e > 2 ** 40 \
        else X.reshape(R, -1)
    out = np.zeros((R, R, e), dtype=object)
    Xw = X * weights[None, :, None]
    for s in range(e):
        Xs = np.roll(Xw, -s, axis=2).reshape(R, -1)
        if flatY.dtype == object:
            Xs = Xs.astype(object)
        out[:, :, s] = Xs @ flatY.T
    return out


def _exact_cost(R: int, r: int, e: int) -> int:
    return R * R * r * e * e


def check_orthogonality(table: CharacterTable, exact_budget: int = 30_000_000) -> None:
    """Assert both orthogonality relations.

    Small tables: exact products in Z[x]/(x^e - 1) reduced modulo Phi_e.
    Large tables: every Galois conjugate (zeta -> zeta**a, gcd(a, e) = 1) is
    evaluated in floating point with a rigorous error bound below 1/4.  A
    nonzero element of Z[zeta] has some conjugate of absolute value >= 1
    (its norm is a nonzero integer), so agreement of all conjugates within 1/4
    of an integer proves exact equality.
    """
    N = table.group_order
    e = table.exponent
    vals = table.values
    R, r, _ = vals.shape
    sizes = np.array(table.class_sizes, dtype=np.int64)
    target_rows = N * np.eye(R, dtype=np.int64)
    target_cols = np.diag(N // sizes)
    if _exact_cost(R, r, e) <= exact_budget:
        rows = _gram_exact(vals, sizes, e)
        cols = _gram_exact(vals.transpose(1, 0, 2).copy(), np.ones(R, dtype=np.int64), e)
        for G_, tgt, what in ((rows, target_rows, "row"), (cols, target_cols, "column")):
            for a in range(G_.shape[0]):
                for b in range(G_.shape[1]):
                    v = is_integer_in_zeta(G_[a, b], e)
                    if v != tgt[a, b]:
                        raise CharacterError(f"{what} orthogonality fails at ({a}, {b})")
        return
    degs = np.array(table.degrees, dtype=np.float64)
    bound_rows = float(N) * degs.max() ** 2 * R * 1e-13
    bound_cols = float(N) * R * 1e-13
    if max(bound_rows, bound_cols) >= 0.25:
        raise CharacterError("table too large for the conjugate-embedding check")
    for a in range(1, e + 1):
        if math.gcd(a, e) != 1:
            continue
        Y = table.conj_values(a)
        rows = (Y * sizes[None, :]) @ Y.conj().T
        cols = Y.T @ Y.conj()
        if np.abs(rows - target_rows).max() >= 0.25 or np.abs(cols - target_cols).max() >= 0.25:
            raise CharacterError("orthogonality fails for a Galois conjugate")


def permutation_character(action: GroupAction, cc: ConjugacyClasses) -> list[int]:
    """Fixed-point counts at the class representatives."""
    table = action.group.elements()
    return [action.fixed_points(table.perm(rep)) for rep in cc.reps]


def constituent_multiplicities(table: CharacterTable, perm_char: list[int]) -> list[int]:
    """<pi, chi> for every irreducible, exactly (division by |G| asserted)."""
    e = table.exponent
    N = table.group_order
    w = np.array([s * f for s, f in zip(table.class_sizes, perm_char)], dtype=object)
    out = []
    neg = [(-l) % e for l in range(e)]
    for c in range(len(table.degrees)):
        coeff = np.zeros(e, dtype=object)
        summed = (table.values[c].astype(object) * w[:, None]).sum(axis=0)
        coeff[neg] = summed
        v = is_integer_in_zeta(coeff, e)
        if v is None or v % N:
            raise CharacterError("permutation character inner product is not an integer multiple of |G|")
        out.append(v // N)
    return out
