"""Abelianization growth ab_k, representation growth Rep_k and their relatives.

ab_k(G) is the largest |H:H'| over subgroups of index at most k; Rep_k(G)
counts complex irreducibles of degree at most k.  The action versions count
above a point stabilizer Y: |H : H'Y| for Y <= H, and the irreducible
constituents of the permutation character.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .characters import (DEFAULT_ELEMENT_LIMIT, DEFAULT_SEED, CharacterTable, character_table,
                         constituent_multiplicities, conjugacy_classes, permutation_character)
from .families import wreath_cyclic
from .perm import FiniteGroup, GroupAction, nilpotency_class
from .subgroups import (DEFAULT_LATTICE_LIMIT, SubgroupRecord, derived_mask, generators_of, popcount,
                        subgroup_lattice, subgroup_mask, subgroups_up_to_index)


def _lattice(G: FiniteGroup, lattice_limit: int) -> list[SubgroupRecord]:
    return subgroup_lattice(G, lattice_limit)


def ab_growth(G: FiniteGroup, k: int, lattice_limit: int = DEFAULT_LATTICE_LIMIT) -> int:
    """ab_k(G) = max |H:H'| over |G:H| <= k.

    Indices above |G| add no subgroups, so ``k`` is clipped to |G|.
    """
    k = min(k, G.order)
    return max(s.abelianization_index for s in subgroups_up_to_index(G, k, lattice_limit))


def ab_profile(G: FiniteGroup, k_max: int, lattice_limit: int = DEFAULT_LATTICE_LIMIT) -> dict[int, int]:
    """{k: ab_k(G)} for 1 <= k <= k_max from one subgroup enumeration."""
    subs = subgroups_up_to_index(G, min(k_max, G.order), lattice_limit)
    out = {}
    best = 0
    by_index: dict[int, int] = {}
    for s in subs:
        by_index[s.index] = max(by_index.get(s.index, 0), s.abelianization_index)
    for k in range(1, k_max + 1):
        best = max(best, by_index.get(k, 0))
        out[k] = best
    return out


def lw_constant(G: FiniteGroup, lattice_limit: int = DEFAULT_LATTICE_LIMIT) -> float:
    """Smallest c with |H:H'| <= c^|G:H| for every H <= G."""
    return max(s.abelianization_index ** (1.0 / s.index) for s in _lattice(G, lattice_limit))


def lw_witness(G: FiniteGroup, lattice_limit: int = DEFAULT_LATTICE_LIMIT) -> SubgroupRecord:
    return max(_lattice(G, lattice_limit),
               key=lambda s: (math.log(s.abelianization_index) / s.index, -s.index))


def _mask(G: FiniteGroup, H) -> int:
    return H if isinstance(H, int) else subgroup_mask(G, H)


def relative_ab(G: FiniteGroup, Y, H) -> int:
    """|H : <H', Y>| for Y <= H <= G (groups, generator lists or masks)."""
    table = G.elements()
    ym, hm = _mask(G, Y), _mask(G, H)
    if ym & ~hm:
        raise ValueError("Y is not contained in H")
    _, dgens = derived_mask(table, generators_of(table, hm))
    joined = table.closure(dgens + generators_of(table, ym))
    return popcount(hm) // popcount(joined)


def lw_constant_relative(G: FiniteGroup, Y, lattice_limit: int = DEFAULT_LATTICE_LIMIT) -> float:
    """Smallest c with |H:H'Y| <= c^|G:H| over all Y <= H <= G."""
    ym = _mask(G, Y)
    best = 0.0
    for s in _lattice(G, lattice_limit):
        if ym & ~s.mask:
            continue
        best = max(best, relative_ab(G, ym, s.mask) ** (1.0 / s.index))
    return best


def relative_records(G: FiniteGroup, Y, lattice_limit: int = DEFAULT_LATTICE_LIMIT) -> list[SubgroupRecord]:
    ym = _mask(G, Y)
    out = []
    for s in _lattice(G, lattice_limit):
        if ym & ~s.mask:
            continue
        s.relative_index = relative_ab(G, ym, s.mask)
        out.append(s)
    return out


def rep_growth(G: FiniteGroup | CharacterTable, k: int, limit: int = DEFAULT_ELEMENT_LIMIT) -> int:
    """Rep_k(G): number of irreducible characters of degree at most k."""
    table = G if isinstance(G, CharacterTable) else character_table(G, limit)
    return sum(1 for d in table.degrees if d <= k)


def rep_profile(table: CharacterTable, k_max: int) -> dict[int, int]:
    return {k: sum(1 for d in table.degrees if d <= k) for k in range(1, k_max + 1)}


@dataclass
class ActionDecomposition:
    """Permutation character of a transitive action split into irreducibles."""

    degrees: list[int]
    multiplicities: list[int]
    permutation_character: list[int]
    orbital_count: int

    def constituents(self) -> list[tuple[int, int]]:
        """(degree, multiplicity) for every constituent, in table order."""
        return [(d, m) for d, m in zip(self.degrees, self.multiplicities) if m > 0]


def decompose_action(action: GroupAction, limit: int = DEFAULT_ELEMENT_LIMIT,
                     seed: int = DEFAULT_SEED, table: CharacterTable | None = None) -> ActionDecomposition:
    if not action.is_transitive:
        raise ValueError("action is not transitive")
    G = action.group
    if table is None:
        table = character_table(G, limit, seed, min_prime=action.size)
    pi = permutation_character(action, table.classes)
    mults = constituent_multiplicities(table, pi)
    if sum(m * d for m, d in zip(mults, table.degrees)) != action.size:
        raise ArithmeticError("constituent degrees do not add up to the number of points")
    return ActionDecomposition(table.degrees, mults, pi, sum(m * m for m in mults))


def orbital_count(action: GroupAction, limit: int = DEFAULT_ELEMENT_LIMIT) -> int:
    """<pi, pi> = number of G-orbits on pairs of points."""
    if not action.is_transitive:
        raise ValueError("action is not transitive")
    cc = conjugacy_classes(action.group, limit)
    pi = permutation_character(action, cc)
    total = sum(s * f * f for s, f in zip(cc.sizes, pi))
    if total % cc.group_order:
        raise ArithmeticError("orbit count is not an integer")
    return total // cc.group_order


def rep_growth_action(action: GroupAction, k: int, limit: int = DEFAULT_ELEMENT_LIMIT) -> int:
    """Irreducibles of degree <= k occurring in the permutation representation."""
    dec = decompose_action(action, limit)
    return sum(1 for d, m in zip(dec.degrees, dec.multiplicities) if m > 0 and d <= k)


@dataclass
class GrowthProfile:
    group_label: str
    group_order: int
    ab: dict[int, int]
    rep: dict[int, int]
    rep_action: dict[int, int] | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {"group": self.group_label, "order": self.group_order,
               "ab": {str(k): v for k, v in self.ab.items()},
               "rep": {str(k): v for k, v in self.rep.items()},
               "notes": self.notes}
        if self.rep_action is not None:
            out["rep_action"] = {str(k): v for k, v in self.rep_action.items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "ab_k", "Rep_k"])
        for k in sorted(self.ab):
            w.writerow([k, self.ab[k], self.rep.get(k, "")])
        return buf.getvalue()


def growth_profile(G: FiniteGroup, k_max: int | None = None, action: GroupAction | None = None,
                   lattice_limit: int = DEFAULT_LATTICE_LIMIT,
                   element_limit: int = DEFAULT_ELEMENT_LIMIT, seed: int = DEFAULT_SEED) -> GrowthProfile:
    k_max = G.order if k_max is None else k_max
    notes = []
    if k_max > G.order:
        notes.append(f"ab_k is constant for k >= |G| = {G.order}")
    ab = ab_profile(G, k_max, lattice_limit)
    table = character_table(G, element_limit, seed, min_prime=action.size if action else 0)
    rep = rep_profile(table, k_max)
    rep_act = None
    if action is not None:
        dec = decompose_action(action, element_limit, seed, table)
        rep_act = {k: sum(1 for d, m in zip(dec.degrees, dec.multiplicities) if m > 0 and d <= k)
                   for k in range(1, k_max + 1)}
    return GrowthProfile(G.label, G.order, ab, rep, rep_act, notes)


def wreath_ratio_formula(p: int) -> Fraction:
    """1 + p^(3-p) - p^(1-p)."""
    P = Fraction(p)
    return 1 + P ** (3 - p) - P ** (1 - p)


def ratio_check(p: int, lattice_limit: int = DEFAULT_LATTICE_LIMIT,
                element_limit: int | None = None, seed: int = DEFAULT_SEED) -> dict:
    """p * Rep_p / ab_p for C_p wr C_p against its closed form, exactly."""
    if p not in (2, 3, 5):
        raise ValueError("ratio_check supports p in {2, 3, 5}")
    G = wreath_cyclic(p)
    ab_p = ab_growth(G, p, lattice_limit)
    limit = max(element_limit or DEFAULT_ELEMENT_LIMIT, G.order)
    rep_p = rep_growth(character_table(G, limit, seed), p)
    value = Fraction(p * rep_p, ab_p)
    expected = wreath_ratio_formula(p)
    return {"p": p, "ab_p": ab_p, "rep_p": rep_p, "ratio": value, "expected": expected,
            "ok": value == expected}


def check_eq2(G: FiniteGroup, k_max: int, lattice_limit: int = DEFAULT_LATTICE_LIMIT,
              element_limit: int = DEFAULT_ELEMENT_LIMIT, table: CharacterTable | None = None) -> dict:
    """Rep_k >= ab_k / k for 1 <= k <= k_max; slack is k Rep_k / ab_k."""
    ab = ab_profile(G, k_max, lattice_limit)
    table = table or character_table(G, element_limit)
    rows = []
    ok = True
    for k in range(1, k_max + 1):
        rep_k = sum(1 for d in table.degrees if d <= k)
        slack = Fraction(k * rep_k, ab[k])
        holds = Fraction(ab[k], k) <= rep_k
        ok &= holds
        rows.append({"k": k, "ab_k": ab[k], "rep_k": rep_k, "slack": slack, "holds": holds})
    return {"group": G.label, "rows": rows, "ok": ok}


def hrv_margin(G: FiniteGroup | CharacterTable, limit: int = DEFAULT_ELEMENT_LIMIT) -> float:
    """max over k of Rep_k^(1/k^2): the smallest c with Rep_k <= c^(k^2)."""
    table = G if isinstance(G, CharacterTable) else character_table(G, limit)
    return max(rep ** (1.0 / (k * k)) for k, rep in rep_profile(table, max(table.degrees)).items())


def bab_table(groups: list[FiniteGroup], k: int, lattice_limit: int = DEFAULT_LATTICE_LIMIT) -> list[dict]:
    """ab_k across a family; growth in the group at fixed k means no bounded abelianizations."""
    return [{"group": G.label, "order": G.order, "k": k, "ab_k": ab_growth(G, k, lattice_limit)}
            for G in groups]


def nilpotent_index_ratio(G: FiniteGroup, Y) -> float:
    """log|G:G'Y| / log|G:Y| for nilpotent G and proper Y."""
    if nilpotency_class(G) is None:
        raise ValueError(f"{G.label} is not nilpotent")
    table = G.elements()
    ym = _mask(G, Y)
    full = (1 << table.order) - 1
    if ym == full:
        raise ValueError("Y must be a proper subgroup")
    rel = relative_ab(G, ym, full)
    if rel <= 1:
        raise AssertionError("G'Y = G for a nilpotent group")
    return math.log(rel) / math.log(table.order // popcount(ym))
