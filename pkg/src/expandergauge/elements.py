"""Enumerated group elements with vectorized index lookup.

Every element of a permutation group is determined by the images of its base
points, which gives a compact integer key per element.
"""

from __future__ import annotations

import numpy as np

from .perm import FiniteGroup, Permutation


class ElementTable:
    """All elements of ``group`` as rows of an ``(order, degree)`` array.

    Row 0 is the identity.  Products are indexed: ``mul(i, j)`` is the index of
    ``elem[i] * elem[j]`` (apply ``i`` first).
    """

    def __init__(self, group: FiniteGroup):
        self.group = group
        n = group.degree
        chain = group._chain
        E = np.arange(n, dtype=np.int64)[None, :]
        for lvl in range(len(chain.base) - 1, -1, -1):
            us = np.array(list(chain.trans[lvl].values()), dtype=np.int64)
            # rows h*u for u in transversal, h in the deeper stabilizer
            E = us[:, E].reshape(-1, n) if len(us) else E
        self.elems = E
        self.order = E.shape[0]
        self.degree = n
        self.base = list(chain.base)
        self._setup_keys()
        self.inv = self.index_rows(np.argsort(E, axis=1))
        self._rmul: dict[int, list[int]] = {}

    def _setup_keys(self) -> None:
        n = max(self.degree, 2)
        nb = len(self.base)
        if nb == 0:
            self._weights = np.zeros(0, dtype=np.int64)
            self._sorted = np.zeros(1, dtype=np.int64)
            self._perm = np.zeros(1, dtype=np.int64)
            return
        if nb * np.log2(n) >= 62:
            raise ValueError("base too long for integer element keys")
        self._weights = n ** np.arange(nb, dtype=np.int64)
        keys = self._keys(self.elems)
        self._perm = np.argsort(keys, kind="stable")
        self._sorted = keys[self._perm]

    def _keys(self, rows: np.ndarray) -> np.ndarray:
        if not self.base:
            return np.zeros(rows.shape[0], dtype=np.int64)
        return rows[:, self.base] @ self._weights

    def index_rows(self, rows: np.ndarray) -> np.ndarray:
        """Indices of the elements given as image rows (must be group members)."""
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.degree)
        keys = self._keys(rows)
        pos = np.searchsorted(self._sorted, keys)
        pos = np.minimum(pos, len(self._sorted) - 1)
        if not np.array_equal(self._sorted[pos], keys):
            raise KeyError("element not in group")
        return self._perm[pos]

    def index(self, g: Permutation) -> int:
        return int(self.index_rows(np.array(g.images))[0])

    def perm(self, i: int) -> Permutation:
        return Permutation._raw(tuple(int(x) for x in self.elems[i]))

    def right_mult(self, j: int) -> list[int]:
        """``[mul(i, j) for i in range(order)]``, cached per ``j``."""
        col = self._rmul.get(j)
        if col is None:
            col = self.index_rows(self.elems[j][self.elems]).tolist()
            self._rmul[j] = col
        return col

    def mul(self, i: int, j: int) -> int:
        col = self._rmul.get(j)
        if col is not None:
            return col[i]
        return int(self.index_rows(self.elems[j][self.elems[i]])[0])

    def products(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Vectorized ``mul`` over index arrays."""
        i = np.asarray(i)
        j = np.asarray(j)
        rows = np.take_along_axis(self.elems[j], self.elems[i], axis=1)
        return self.index_rows(rows)

    def conjugation_map(self, s: int) -> np.ndarray:
        """Index map ``x -> s^-1 x s``."""
        si = int(self.inv[s])
        rows = self.elems[s][self.elems[:, self.elems[si]]]
        # rows[x, p] = s[x[sinv[p]]] = (sinv * x * s)[p]
        return self.index_rows(rows)

    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.order, dtype=np.int64)
        cur = self.elems.copy()
        ident = np.arange(self.degree)
        done = np.all(cur == ident, axis=1)
        k = 1
        while not done.all():
            k += 1
            cur = np.take_along_axis(self.elems, cur, axis=1)
            hit = (~done) & np.all(cur == ident, axis=1)
            orders[hit] = k
            done |= hit
        return orders

    def generator_indices(self) -> list[int]:
        return [self.index(g) for g in self.group.generators]

    def closure(self, gens: list[int]) -> int:
        """Bitmask (Python int) of the subgroup generated by element indices."""
        cols = [self.right_mult(g) for g in dict.fromkeys(gens) if g != 0]
        seen = {0}
        queue = [0]
        for x in queue:
            for col in cols:
                y = col[x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        mask = 0
        for x in seen:
            mask |= 1 << x
        return mask
