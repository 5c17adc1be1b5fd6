"""Connection-set specs: comma-separated element words.

Atoms
    ``t+a`` / ``t-a``   translation x -> x +/- a (mod degree)
    ``ma``              multiplication x -> a*x (mod degree)
    ``gi``              the i-th generator of the group
    ``e``               identity
Each atom may carry ``inv`` or ``^k``; atoms join with ``*`` (left factor
applied first).  Macros: ``pmA`` = ``t+A,t-A``; ``gens`` = generators and
their inverses; ``all`` = every non-identity element; ``random:K`` = K
seeded random elements together with their inverses.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

from .perm import FiniteGroup, Permutation


@dataclass
class ConnectionSet:
    elements: list[Permutation]
    label: str
    multipliers: list[int] = field(default_factory=list)


class WordError(ValueError):
    pass


_TOKEN = re.compile(r"t[+-]\d+|m\d+|g\d+|e|inv|\^-?\d+|\*")


def _fail(text: str, pos: int, expected: str):
    raise WordError(f"connection set {text!r}: at position {pos} expected {expected}")


def _atom(tok: str, G: FiniteGroup, ctx: ConnectionSet) -> Permutation:
    n = G.degree
    if tok == "e":
        return G.identity
    if tok[0] == "t":
        a = int(tok[1:])
        return Permutation([(x + a) % n for x in range(n)])
    if tok[0] == "m":
        a = int(tok[1:]) % n
        images = [(a * x) % n for x in range(n)]
        if len(set(images)) != n:
            raise WordError(f"m{tok[1:]} is not invertible mod {n}")
        ctx.multipliers.append(a)
        return Permutation(images)
    i = int(tok[1:])
    if i >= len(G.generators):
        raise WordError(f"{tok}: group has {len(G.generators)} generators")
    return G.generators[i]


def _parse_word(text: str, start: int, word: str, G: FiniteGroup, ctx: ConnectionSet) -> Permutation:
    pos = 0
    result = None
    expect_atom = True
    current = None
    while pos < len(word):
        m = _TOKEN.match(word, pos)
        if not m:
            _fail(text, start + pos, "an atom (t+a, t-a, ma, gi, e)" if expect_atom else "'inv', '^k', '*' or ','")
        tok = m.group()
        if expect_atom:
            if tok in ("inv", "*") or tok.startswith("^"):
                _fail(text, start + pos, "an atom (t+a, t-a, ma, gi, e)")
            current = _atom(tok, G, ctx)
            expect_atom = False
        elif tok == "*":
            result = current if result is None else result * current
            expect_atom = True
        elif tok == "inv":
            current = ~current
        elif tok.startswith("^"):
            current = current ** int(tok[1:])
        else:
            _fail(text, start + pos, "'inv', '^k', '*' or ','")
        pos = m.end()
    if expect_atom:
        _fail(text, start + pos, "an atom (t+a, t-a, ma, gi, e)")
    result = current if result is None else result * current
    if result not in G:
        raise WordError(f"connection set {text!r}: word {word!r} is not an element of {G.label}")
    return result


def parse_connection_set(text: str, G: FiniteGroup, seed: int = 0) -> ConnectionSet:
    ctx = ConnectionSet([], text.strip())
    pos = 0
    for item in text.split(","):
        stripped = item.strip()
        start = pos + (len(item) - len(item.lstrip()))
        pos += len(item) + 1
        if not stripped:
            _fail(text, start, "a word or macro")
        if re.fullmatch(r"pm\d+", stripped):
            a = stripped[2:]
            ctx.elements.append(_parse_word(text, start, f"t+{a}", G, ctx))
            ctx.elements.append(_parse_word(text, start, f"t-{a}", G, ctx))
        elif stripped == "gens":
            for g in G.generators:
                ctx.elements += [g, ~g]
        elif stripped == "all":
            table = G.elements()
            ctx.elements += [table.perm(i) for i in range(1, table.order)]
        elif stripped.startswith("random:"):
            try:
                k = int(stripped[7:])
            except ValueError:
                _fail(text, start + 7, "an integer count")
            rng = random.Random(seed)
            for _ in range(k):
                g = G.random_element(rng)
                ctx.elements += [g, ~g]
        else:
            ctx.elements.append(_parse_word(text, start, stripped, G, ctx))
    return ctx


def symmetric_closure_ok(S: list[Permutation]) -> Permutation | None:
    """Return an element whose inverse is under-represented in S, or None."""
    from collections import Counter

    counts = Counter(S)
    for s, c in counts.items():
        if counts.get(~s, 0) != c:
            return s
    return None
