"""Hot loops over projective residue matrices.

A 2x2 matrix over a finite ring with ``card`` residues is packed into one
integer ``((a*card + b)*card + c)*card + d`` where a..d are residue codes.
The projective representative is the smaller code of M and -M.

Two interchangeable backends: numba-compiled scalar loops, and a frontier-wise
numpy implementation.  Set ``HECKE_NO_NUMBA=1`` to force numpy.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("HECKE_NO_NUMBA", "").strip().lower() not in ("1", "true", "yes")

#: largest card**4 for which a dense visited bitmap is allocated
DENSE_LIMIT = 1 << 26
DEFAULT_BFS_CAP = 10_000_000


class ClosureCapExceeded(RuntimeError):
    pass


def bfs_cap() -> int:
    env = os.environ.get("HECKE_BFS_CAP")
    return int(env) if env else DEFAULT_BFS_CAP


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# -- numpy primitives (also the reference for the compiled path) --------------------

def decode4(codes, card: int):
    codes = np.asarray(codes, dtype=np.int64)
    d = codes % card
    r = codes // card
    c = r % card
    r //= card
    b = r % card
    a = r // card
    return a, b, c, d


def encode4(a, b, c, d, card: int):
    return ((np.asarray(a, np.int64) * card + b) * card + c) * card + d


def canonical(codes, neg: np.ndarray, card: int):
    a, b, c, d = decode4(codes, card)
    other = encode4(neg[a], neg[b], neg[c], neg[d], card)
    return np.minimum(np.asarray(codes, np.int64), other)


def matmul(x, y, add: np.ndarray, mul: np.ndarray, neg: np.ndarray, card: int):
    a, b, c, d = decode4(x, card)
    e, f, g, h = decode4(y, card)
    out = encode4(add[mul[a, e], mul[b, g]], add[mul[a, f], mul[b, h]],
                  add[mul[c, e], mul[d, g]], add[mul[c, f], mul[d, h]], card)
    return canonical(out, neg, card)


def inverse(x, neg: np.ndarray, card: int):
    a, b, c, d = decode4(x, card)
    return canonical(encode4(d, neg[b], neg[c], a, card), neg, card)


def closure_numpy(gens, identity: int, add, mul, neg, card: int, cap: int) -> np.ndarray:
    """BFS closure, one frontier at a time; returns codes in discovery order."""
    gens = np.asarray(gens, dtype=np.int64)
    dense = card ** 4 <= DENSE_LIMIT
    if dense:
        seen = np.zeros(card ** 4, dtype=np.bool_)
        seen[identity] = True
    else:
        seen_set = np.array([identity], dtype=np.int64)
    order = [np.array([identity], dtype=np.int64)]
    total = 1
    frontier = order[0]
    while frontier.size:
        cand = matmul(np.repeat(gens, frontier.size), np.tile(frontier, gens.size),
                      add, mul, neg, card)
        # keep first occurrence, in generator-major order
        _, first = np.unique(cand, return_index=True)
        cand = cand[np.sort(first)]
        if dense:
            cand = cand[~seen[cand]]
            seen[cand] = True
        else:
            cand = cand[~np.isin(cand, seen_set)]
            seen_set = np.union1d(seen_set, cand)
        total += cand.size
        if total > cap:
            raise ClosureCapExceeded(f"closure exceeded {cap} elements")
        order.append(cand)
        frontier = cand
    return np.concatenate(order)


if HAVE_NUMBA:

    @njit(cache=True)
    def _canon1(x, neg, card):
        d = x % card
        r = x // card
        c = r % card
        r //= card
        b = r % card
        a = r // card
        y = ((neg[a] * card + neg[b]) * card + neg[c]) * card + neg[d]
        return x if x < y else y

    @njit(cache=True)
    def _mul1(x, y, add, mul, neg, card):
        d = x % card
        r = x // card
        c = r % card
        r //= card
        b = r % card
        a = r // card
        h = y % card
        r = y // card
        g = r % card
        r //= card
        f = r % card
        e = r // card
        p = add[mul[a, e], mul[b, g]]
        q = add[mul[a, f], mul[b, h]]
        s = add[mul[c, e], mul[d, g]]
        t = add[mul[c, f], mul[d, h]]
        return _canon1(((p * card + q) * card + s) * card + t, neg, card)

    @njit(cache=True)
    def _closure_dense(gens, identity, add, mul, neg, card, cap):
        seen = np.zeros(card ** 4, dtype=np.bool_)
        out = np.empty(min(cap, card ** 4) + 1, dtype=np.int64)
        out[0] = identity
        seen[identity] = True
        n = 1
        head = 0
        # frontier-by-frontier, generator-major, to match the numpy order
        while head < n:
            tail = n
            for gi in range(gens.size):
                g = gens[gi]
                for i in range(head, tail):
                    y = _mul1(g, out[i], add, mul, neg, card)
                    if not seen[y]:
                        if n >= cap:
                            return out[:0], False
                        seen[y] = True
                        out[n] = y
                        n += 1
            head = tail
        return out[:n].copy(), True

    def closure_numba(gens, identity: int, add, mul, neg, card: int, cap: int) -> np.ndarray:
        if card ** 4 > DENSE_LIMIT:
            return closure_numpy(gens, identity, add, mul, neg, card, cap)
        res, ok = _closure_dense(np.asarray(gens, dtype=np.int64), np.int64(identity),
                                 add, mul, neg, np.int64(card), np.int64(cap))
        if not ok:
            raise ClosureCapExceeded(f"closure exceeded {cap} elements")
        return res

else:  # pragma: no cover
    closure_numba = closure_numpy


def closure(gens, identity: int, add, mul, neg, card: int, cap=None) -> np.ndarray:
    cap = bfs_cap() if cap is None else cap
    fn = closure_numba if USE_NUMBA else closure_numpy
    return fn(gens, identity, add, mul, neg, card, cap)
