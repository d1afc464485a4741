"""Projective 2x2 matrices over Z[lambda_q] and words in the generators S, T.

Words are plain strings over ``S``, ``T`` and ``t`` (``t`` is T^-1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from mpmath import mp, mpf

from .ring import RingElement, hecke_ring, parse_element, sign_of

Entries = Tuple[RingElement, RingElement, RingElement, RingElement]

DECOMPOSE_CAP = 10_000


class NotInGroup(ValueError):
    """Raised when a matrix cannot be written as a word in S and T."""


def _mm(x: Sequence[RingElement], y: Sequence[RingElement]) -> Entries:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _det(x: Sequence[RingElement]) -> RingElement:
    a, b, c, d = x
    return a * d - b * c


class GroupElement:
    """Determinant-one matrix modulo +-I, stored in a canonical sign.

    The first nonzero entry (row-major) is positive under the real embedding.
    """

    __slots__ = ("q", "entries", "_hash")

    def __init__(self, entries: Sequence, q: int = 5, *, check: bool = True):
        ring = hecke_ring(q)
        ent = tuple(ring.coerce(x) for x in entries)
        if len(ent) != 4:
            raise ValueError("a 2x2 matrix needs four entries")
        if check and _det(ent) != ring.one:
            raise ValueError(f"determinant is {_det(ent)}, expected 1")
        for x in ent:
            s = sign_of(x)
            if s:
                if s < 0:
                    ent = tuple(-y for y in ent)
                break
        self.q = q
        self.entries: Entries = ent
        self._hash = hash((q, tuple(x.coeffs for x in ent)))

    @classmethod
    def from_ints(cls, rows, q: int = 5) -> "GroupElement":
        ring = hecke_ring(q)
        (a, b), (c, d) = rows
        conv = lambda v: ring.element(v) if isinstance(v, (list, tuple)) else ring.coerce(v)
        return cls((conv(a), conv(b), conv(c), conv(d)), q)

    @classmethod
    def identity(cls, q: int = 5) -> "GroupElement":
        return cls((1, 0, 0, 1), q)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.q != self.q:
            raise ValueError("q mismatch")
        return GroupElement(_mm(self.entries, other.entries), self.q, check=False)

    def inv(self) -> "GroupElement":
        a, b, c, d = self.entries
        return GroupElement((d, -b, -c, a), self.q, check=False)

    def __pow__(self, k: int) -> "GroupElement":
        base = self if k >= 0 else self.inv()
        k = abs(k)
        out = GroupElement.identity(self.q)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.q == other.q and self.entries == other.entries

    def __hash__(self):
        return self._hash

    @property
    def trace(self) -> RingElement:
        return self.entries[0] + self.entries[3]

    def is_identity(self) -> bool:
        a, b, c, d = self.entries
        return b.is_zero() and c.is_zero() and a == 1 and d == 1

    def rows(self):
        a, b, c, d = self.entries
        return ((a, b), (c, d))

    def __repr__(self):
        return f"GroupElement({format_matrix(self)}, q={self.q})"

    def __str__(self):
        return format_matrix(self)

    def apply(self, point):
        """Act on a cusp given as a pair (numerator, denominator)."""
        a, b, c, d = self.entries
        x, y = point
        return (a * x + b * y, c * x + d * y)


@dataclass(frozen=True)
class Matrix2:
    """A plain (non-projective) 2x2 matrix, used for the determinant -1 twist J."""

    entries: Entries
    q: int

    @property
    def det(self) -> RingElement:
        return _det(self.entries)


def gen_S(q: int = 5) -> GroupElement:
    return GroupElement((0, 1, -1, 0), q)


def gen_T(q: int = 5) -> GroupElement:
    ring = hecke_ring(q)
    return GroupElement((1, ring.lam, 0, 1), q)


def twist_J(q: int = 5) -> Matrix2:
    ring = hecke_ring(q)
    return Matrix2((ring.zero, ring.one, ring.one, ring.zero), q)


def mul(g: GroupElement, h: GroupElement) -> GroupElement:
    return g * h


def inv(g: GroupElement) -> GroupElement:
    return g.inv()


def conjugate(g: GroupElement, h: Union[GroupElement, Matrix2]) -> GroupElement:
    """h g h^-1; h may have determinant -1."""
    if isinstance(h, GroupElement):
        return h * g * h.inv()
    det = h.det
    if det != 1 and det != -1:
        raise ValueError("conjugating matrix must have determinant +-1")
    a, b, c, d = h.entries
    h_inv = (d, -b, -c, a) if det == 1 else (-d, b, c, -a)
    return GroupElement(_mm(_mm(h.entries, g.entries), h_inv), g.q)


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    kind: str  # identity | elliptic | parabolic | hyperbolic
    order: Optional[int] = None

    def __str__(self):
        return f"elliptic(order {self.order})" if self.kind == "elliptic" else self.kind


def elliptic_order(g: GroupElement, limit: Optional[int] = None) -> Optional[int]:
    """Least n >= 1 with g^n = +-I, searching n <= limit (default 2q)."""
    limit = 2 * g.q if limit is None else limit
    p = g
    for n in range(1, limit + 1):
        if p.is_identity():
            return n
        p = p * g
    return None


def classify(g: GroupElement) -> Classification:
    if g.is_identity():
        return Classification("identity", 1)
    tr = g.trace
    if tr == 2 or tr == -2:
        return Classification("parabolic")
    if sign_of(tr - 2) < 0 and sign_of(tr + 2) > 0:
        return Classification("elliptic", elliptic_order(g))
    return Classification("hyperbolic")


# -- words ---------------------------------------------------------------------

_CANCEL = {("T", "t"), ("t", "T"), ("S", "S")}


def free_reduce(word: str) -> str:
    out: List[str] = []
    for ch in word:
        if ch not in "STt":
            raise ValueError(f"bad letter {ch!r} in word {word!r}")
        if out and (out[-1], ch) in _CANCEL:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def power_of_T(m: int) -> str:
    return "T" * m if m >= 0 else "t" * (-m)


def eval_word(word: str, q: int = 5) -> GroupElement:
    S, T = gen_S(q), gen_T(q)
    letters = {"S": S, "T": T, "t": T.inv()}
    out = GroupElement.identity(q)
    for ch in word:
        try:
            out = out * letters[ch]
        except KeyError:
            raise ValueError(f"bad letter {ch!r} in word {word!r}") from None
    return out


def invert_word(word: str) -> str:
    swap = {"S": "S", "T": "t", "t": "T"}
    return "".join(swap[ch] for ch in reversed(word))


def _approx(x: RingElement) -> mpf:
    with mp.workdps(40):
        lam = 2 * mp.cos(mp.pi / x.ring.q)
        return sum(mpf(c) * lam ** i for i, c in enumerate(x.coeffs))


def nearest_multiple(a: RingElement, c: RingElement) -> int:
    """Integer k nearest to (a/c)/lambda under the real embedding; exact ties go to even k."""
    lam = a.ring.lam
    sc = sign_of(c)
    with mp.workdps(40):
        k = int(mp.nint(_approx(a) / (_approx(c) * 2 * mp.cos(mp.pi / a.ring.q))))

    def side(j: int) -> int:
        # sign of a/c - (j/2) lambda
        return sign_of(2 * a - j * lam * c) * sc

    while side(2 * k - 1) < 0:
        k -= 1
    while side(2 * k + 1) > 0:
        k += 1
    if side(2 * k - 1) == 0 and k % 2:
        k -= 1
    elif side(2 * k + 1) == 0 and k % 2:
        k += 1
    return k


def lambda_multiple(x: RingElement) -> Optional[int]:
    """m with x = m*lambda, or None."""
    ring = x.ring
    if ring.degree == 1:
        return x.coeffs[0]
    if x.coeffs[0] == 0 and all(c == 0 for c in x.coeffs[2:]):
        return x.coeffs[1]
    return None


def decompose(g: GroupElement, cap: int = DECOMPOSE_CAP) -> str:
    """Word in S, T, t evaluating to g (projectively), by nearest-lambda reduction."""
    a, b, c, d = g.entries
    ks: List[int] = []
    steps = 0
    while not c.is_zero():
        if steps >= cap:
            raise NotInGroup(f"no reduction after {cap} steps; lower-left entry {c}")
        k = nearest_multiple(a, c)
        lam_k = k * c.ring.lam
        na, nb = a - lam_k * c, b - lam_k * d
        new_c = -na
        if sign_of(_abs(new_c) - _abs(c)) >= 0:
            raise NotInGroup(f"lower-left entry failed to shrink at step {steps}: {c} -> {new_c}")
        a, b, c, d = c, d, -na, -nb
        ks.append(k)
        steps += 1
    if a == -1:
        a, b, d = -a, -b, -d
    if a != 1 or d != 1:
        raise NotInGroup(f"reduced to a diagonal matrix with entry {a}, not a translation")
    m = lambda_multiple(b)
    if m is None:
        raise NotInGroup(f"reduced to [[1,{b}],[0,1]], not a power of T")
    word = "".join(power_of_T(k) + "S" for k in ks) + power_of_T(m)
    return free_reduce(word)


def _abs(x: RingElement) -> RingElement:
    return -x if sign_of(x) < 0 else x


# -- text formats ---------------------------------------------------------------

def format_matrix(g: Union[GroupElement, Matrix2]) -> str:
    a, b, c, d = (str(x) for x in g.entries)
    return f"[[{a},{b}],[{c},{d}]]"


_MATRIX = re.compile(r"^\s*\[\s*\[([^\[\],]+),([^\[\],]+)\]\s*,\s*\[([^\[\],]+),([^\[\],]+)\]\s*\]\s*$")


def parse_matrix(text: str, q: int = 5) -> GroupElement:
    m = _MATRIX.match(text)
    if not m:
        raise ValueError(f"bad matrix literal {text!r}; expected [[a,b],[c,d]]")
    return GroupElement(tuple(parse_element(x.strip(), q) for x in m.groups()), q)
