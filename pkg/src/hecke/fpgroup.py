"""Coset enumeration and low-index subgroups for <x, y | x^2, y^q>.

Words in a presentation are strings: lowercase letters are generators,
uppercase letters their inverses.  The Hecke group is presented with
x = S and y = S T^-1, so T = y^-1 x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import lattice

COSET_CAP = 1_000_000
LOW_INDEX_LIMIT = 12


class CosetCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Presentation:
    generators: Tuple[str, ...]
    relators: Tuple[str, ...]

    def __post_init__(self):
        for g in self.generators:
            if len(g) != 1 or not g.islower():
                raise ValueError(f"generator names must be single lowercase letters, got {g!r}")
        for r in self.relators:
            self.encode(r)

    @classmethod
    def hecke(cls, q: int) -> "Presentation":
        return cls(("x", "y"), ("xx", "y" * q))

    @property
    def ncols(self) -> int:
        return 2 * len(self.generators)

    def encode(self, word: str) -> List[int]:
        """Letters to column indices: generator i -> 2i, its inverse -> 2i + 1."""
        out = []
        for ch in word:
            i = self.generators.index(ch.lower()) if ch.lower() in self.generators else -1
            if i < 0:
                raise ValueError(f"letter {ch!r} not in presentation {self.generators}")
            out.append(2 * i + (1 if ch.isupper() else 0))
        return out

    def column_name(self, col: int) -> str:
        g = self.generators[col // 2]
        return g.upper() if col % 2 else g


def _inv(col: int) -> int:
    return col ^ 1


# -- translation between S,T words and x,y words ---------------------------------

_ST_TO_XY = {"S": "x", "T": "Yx", "t": "Xy"}
_XY_TO_ST = {"x": "S", "X": "S", "y": "St", "Y": "TS"}


def st_to_xy(word: str) -> str:
    try:
        return "".join(_ST_TO_XY[ch] for ch in word)
    except KeyError as exc:
        raise ValueError(f"bad letter {exc.args[0]!r} in S/T word") from None


def xy_to_st(word: str) -> str:
    try:
        return "".join(_XY_TO_ST[ch] for ch in word)
    except KeyError as exc:
        raise ValueError(f"bad letter {exc.args[0]!r} in x/y word") from None


# -- coset tables -----------------------------------------------------------------

@dataclass(frozen=True)
class CosetTable:
    presentation: Presentation
    rows: Tuple[Tuple[int, ...], ...]
    normal: Optional[bool] = field(default=None, compare=False)

    @property
    def index(self) -> int:
        return len(self.rows)

    def act(self, coset: int, word: str) -> int:
        for col in self.presentation.encode(word):
            coset = self.rows[coset][col]
        return coset

    def permutation(self, word: str) -> List[int]:
        return [self.act(c, word) for c in range(self.index)]

    def orbits(self, word: str) -> List[List[int]]:
        perm = self.permutation(word)
        seen = [False] * self.index
        out = []
        for c in range(self.index):
            if not seen[c]:
                orb = []
                while not seen[c]:
                    seen[c] = True
                    orb.append(c)
                    c = perm[c]
                out.append(orb)
        return out

    def is_complete(self) -> bool:
        return all(v >= 0 for row in self.rows for v in row)

    def relators_hold(self) -> bool:
        return all(self.act(c, r) == c for r in self.presentation.relators for c in range(self.index))

    def rerooted(self, root: int) -> Tuple[Tuple[int, ...], ...]:
        return standardize(self.rows, root)

    def is_normal(self) -> bool:
        return all(self.rerooted(c) == self.rows for c in range(self.index))

    def to_json(self) -> dict:
        cols = [self.presentation.column_name(c) for c in range(self.presentation.ncols)]
        return {"index": self.index, "normal": self.normal, "columns": cols,
                "rows": [list(r) for r in self.rows]}


def standardize(rows: Sequence[Sequence[int]], root: int = 0) -> Tuple[Tuple[int, ...], ...]:
    """Renumber a complete table in first-appearance order starting from ``root``."""
    order = [root]
    new = {root: 0}
    i = 0
    while i < len(order):
        for v in rows[order[i]]:
            if v >= 0 and v not in new:
                new[v] = len(order)
                order.append(v)
        i += 1
    return tuple(tuple(new[v] if v >= 0 else -1 for v in rows[old]) for old in order)


# -- Todd-Coxeter (HLT with lookahead) --------------------------------------------------

class _Enumerator:
    def __init__(self, pres: Presentation, cap: int):
        self.pres = pres
        self.ncols = pres.ncols
        self.rels = [pres.encode(r) for r in pres.relators]
        self.cap = cap
        self.table: List[List[Optional[int]]] = [[None] * self.ncols]
        self.parent = [0]
        self.live = 1

    def find(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def define(self, c: int, x: int) -> None:
        if len(self.table) >= self.cap:
            raise CosetCapExceeded(f"more than {self.cap} cosets defined")
        n = len(self.table)
        self.table.append([None] * self.ncols)
        self.parent.append(n)
        self.live += 1
        self.table[c][x] = n
        self.table[n][_inv(x)] = c

    def _merge(self, a: int, b: int, queue: List[int]) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.parent[hi] = lo
            self.live -= 1
            queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        queue: List[int] = []
        self._merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(self.ncols):
                d = self.table[g][x]
                if d is None:
                    continue
                self.table[g][x] = None
                if self.table[d][_inv(x)] == g:
                    self.table[d][_inv(x)] = None
                mu, nu = self.find(g), self.find(d)
                if self.table[mu][x] is not None:
                    self._merge(nu, self.table[mu][x], queue)
                elif self.table[nu][_inv(x)] is not None:
                    self._merge(mu, self.table[nu][_inv(x)], queue)
                else:
                    self.table[mu][x] = nu
                    self.table[nu][_inv(x)] = mu

    def scan(self, c: int, w: Sequence[int], fill: bool) -> None:
        """Scan word w at coset c, deducing and (if fill) defining new cosets."""
        t = self.table
        while True:
            f, i = c, 0
            while i < len(w) and t[f][w[i]] is not None:
                f = t[f][w[i]]
                i += 1
            if i == len(w):
                if f != c:
                    self.coincidence(f, c)
                return
            b, j = c, len(w) - 1
            while j >= i and t[b][_inv(w[j])] is not None:
                b = t[b][_inv(w[j])]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if j == i:
                t[f][w[i]] = b
                t[b][_inv(w[i])] = f
                return
            if not fill:
                return
            self.define(f, w[i])

    def lookahead(self) -> None:
        for c in range(len(self.table)):
            if not self.alive(c):
                continue
            for r in self.rels:
                if not self.alive(c):
                    break
                self.scan(c, r, fill=False)

    def run(self, subgroup: Sequence[Sequence[int]]) -> None:
        for w in subgroup:
            self.scan(0, w, fill=True)
        lookahead_at = max(64, self.cap // 4)
        c = 0
        while c < len(self.table):
            if self.alive(c):
                for r in self.rels:
                    if not self.alive(c):
                        break
                    if len(self.table) >= lookahead_at:
                        self.lookahead()
                        lookahead_at = min(self.cap, 2 * lookahead_at)
                        if not self.alive(c):
                            break
                    self.scan(c, r, fill=True)
                if self.alive(c):
                    for x in range(self.ncols):
                        if self.table[c][x] is None:
                            self.define(c, x)
            c += 1

    def result(self) -> Tuple[Tuple[int, ...], ...]:
        live = [c for c in range(len(self.table)) if self.alive(c)]
        rows = {c: [self.find(v) for v in self.table[c]] for c in live}
        idx = {c: i for i, c in enumerate(live)}
        compact = [[idx[v] for v in rows[c]] for c in live]
        return standardize(compact, 0)


def todd_coxeter(pres: Presentation, subgroup_words: Iterable[str], cap: int = COSET_CAP) -> CosetTable:
    """Coset table of the subgroup generated by ``subgroup_words``; its index is the row count."""
    en = _Enumerator(pres, cap)
    en.run([pres.encode(w) for w in subgroup_words])
    return CosetTable(pres, en.result())


def hecke_index(st_words: Iterable[str], q: int, cap: int = COSET_CAP) -> int:
    """Index in G_q of the subgroup generated by words over S, T, t."""
    return todd_coxeter(Presentation.hecke(q), [st_to_xy(w) for w in st_words], cap).index


# -- low-index subgroups ------------------------------------------------------------

def _scan_deduce(t: List[List[int]], c: int, w: Sequence[int]) -> int:
    """0: nothing new, 1: one entry deduced, -1: contradiction."""
    f, i = c, 0
    n = len(w)
    while i < n and t[f][w[i]] >= 0:
        f = t[f][w[i]]
        i += 1
    if i == n:
        return 0 if f == c else -1
    b, j = c, n - 1
    while j >= i and t[b][w[j] ^ 1] >= 0:
        b = t[b][w[j] ^ 1]
        j -= 1
    if j < i:
        return 0 if f == b else -1
    if j == i:
        if t[b][w[i] ^ 1] >= 0 and t[b][w[i] ^ 1] != f:
            return -1
        t[f][w[i]] = b
        t[b][w[i] ^ 1] = f
        return 1
    return 0


def _close(t: List[List[int]], n: int, rels: List[List[int]]) -> bool:
    changed = True
    while changed:
        changed = False
        for c in range(n):
            for r in rels:
                s = _scan_deduce(t, c, r)
                if s < 0:
                    return False
                if s > 0:
                    changed = True
    return True


def low_index_subgroups(pres: Presentation, max_index: int) -> List[CosetTable]:
    """All subgroups of index <= max_index up to conjugacy, each flagged normal or not."""
    if max_index > LOW_INDEX_LIMIT:
        raise ValueError(f"max_index is limited to {LOW_INDEX_LIMIT}")
    if max_index < 1:
        return []
    ncols = pres.ncols
    rels = [pres.encode(r) for r in pres.relators]
    found: List[CosetTable] = []

    def recurse(t: List[List[int]], n: int) -> None:
        for c in range(n):
            for x in range(ncols):
                if t[c][x] < 0:
                    break
            else:
                continue
            break
        else:
            rows = tuple(tuple(r) for r in t[:n])
            table = CosetTable(pres, rows)
            if all(table.rerooted(c) >= rows for c in range(1, n)):
                found.append(CosetTable(pres, rows, normal=table.is_normal()))
            return
        xi = _inv(x)
        for d in range(n):
            if t[d][xi] < 0:
                nt = [r[:] for r in t]
                nt[c][x] = d
                nt[d][xi] = c
                if _close(nt, n, rels):
                    recurse(nt, n)
        if n < max_index:
            nt = [r[:] for r in t] + [[-1] * ncols]
            nt[c][x] = n
            nt[n][xi] = c
            if _close(nt, n + 1, rels):
                recurse(nt, n + 1)

    recurse([[-1] * ncols], 1)
    found.sort(key=lambda tb: (tb.index, tb.rows))
    return found


def tables_conjugate(a: CosetTable, b: CosetTable) -> bool:
    """Same subgroup up to conjugacy: some re-rooting of ``b`` equals ``a``."""
    return a.index == b.index and any(b.rerooted(c) == a.rows for c in range(b.index))


# -- abelian invariants ---------------------------------------------------------------

def abelian_invariants(pres: Presentation) -> List[int]:
    """Invariant factors of the abelianization (0 for a free Z factor)."""
    ngens = len(pres.generators)
    mat = []
    for r in pres.relators:
        row = [0] * ngens
        for col in pres.encode(r):
            row[col // 2] += -1 if col % 2 else 1
        mat.append(row)
    if not mat:
        return [0] * ngens
    factors = lattice.invariant_factors(mat)
    factors += [0] * (ngens - len(factors))
    return [f for f in factors if f != 1]


@dataclass(frozen=True)
class SubgroupAbelianization:
    invariants: Tuple[int, ...]  # torsion invariant factors, then 0 per free factor
    commutator_index: float  # math.inf when a free factor is present


def abelianization_subgroup(elliptic_orders: Sequence[int], free_rank: int) -> SubgroupAbelianization:
    """Abelianization of Z^r * (free product of cyclic groups of the given orders)."""
    if elliptic_orders:
        diag = [[o if i == j else 0 for j in range(len(elliptic_orders))]
                for i, o in enumerate(elliptic_orders)]
        torsion = [f for f in lattice.invariant_factors(diag) if f != 1]
    else:
        torsion = []
    index = math.prod(elliptic_orders) if free_rank == 0 else math.inf
    return SubgroupAbelianization(tuple(torsion) + (0,) * free_rank, index)
