"""Exact arithmetic in Z[lambda_q], lambda_q = 2 cos(pi/q), and its principal quotients."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
from mpmath import iv

from . import lattice

IntLike = Union[int, "RingElement"]

#: precision ladder (decimal digits) for interval sign decisions when q != 3, 5
SIGN_PRECISIONS = (30, 60, 120, 240, 480)


class PrecisionExhausted(ArithmeticError):
    pass


# -- polynomials over Z as coefficient lists, lowest degree first ------------

def _trim(p: List[int]) -> List[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _pmul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pdivexact(a: Sequence[int], b: Sequence[int]) -> List[int]:
    """Exact division of integer polynomials, b monic up to sign."""
    a = list(a)
    b = _trim(list(b))
    lead = b[-1]
    assert abs(lead) == 1
    q = [0] * max(len(a) - len(b) + 1, 1)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * lead
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] -= c * y
    if any(a):
        raise ValueError("polynomial division is not exact")
    return _trim(q)


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> Tuple[int, ...]:
    """n-th cyclotomic polynomial via x^n - 1 = prod_{d | n} Phi_d."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _pdivexact(num, cyclotomic(d))
    return tuple(num)


def _fold_palindromic(p: Sequence[int]) -> List[int]:
    """Write x^{-m} p(x) as a polynomial in y = x + 1/x (p palindromic, degree 2m)."""
    m = (len(p) - 1) // 2
    # dickson[k] holds x^k + x^-k as a polynomial in y
    dickson: List[List[int]] = [[2], [0, 1]]
    for k in range(2, m + 1):
        nxt = [0] + dickson[k - 1]
        prev = dickson[k - 2] + [0] * (len(nxt) - len(dickson[k - 2]))
        dickson.append([x - y for x, y in zip(nxt, prev)])
    out = [0] * (m + 1)
    out[0] += p[m]
    for k in range(1, m + 1):
        for i, c in enumerate(dickson[k]):
            out[i] += p[m + k] * c
    return _trim(out)


@dataclass(frozen=True)
class MinPoly:
    q: int
    coeffs: Tuple[int, ...]  # lowest degree first, monic

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}{mono}"
            terms.append(("-" if c < 0 else "+") + s)
        text = "".join(terms).lstrip("+")
        return text.replace("+", " + ").replace("-", " - ").strip() or "0"


def euler_phi(n: int) -> int:
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def min_poly(q: int) -> MinPoly:
    """Minimal polynomial of 2cos(pi/q), by folding the 2q-th cyclotomic polynomial."""
    if q < 3:
        raise ValueError("q must be at least 3")
    folded = _fold_palindromic(cyclotomic(2 * q))
    if folded[-1] < 0:
        folded = [-c for c in folded]
    return MinPoly(q, tuple(folded))


# -- the ring ---------------------------------------------------------------

class HeckeRing:
    """Z[lambda_q] with power basis 1, lambda, ..., lambda^(n-1)."""

    def __init__(self, q: int):
        self.q = q
        self.minpoly = min_poly(q)
        self.degree = self.minpoly.degree
        if q == 5:
            assert self.minpoly.coeffs == (-1, -1, 1)

    def __repr__(self) -> str:
        return f"HeckeRing(q={self.q})"

    # element construction
    def __call__(self, *coeffs: int) -> "RingElement":
        return self.element(coeffs)

    def element(self, coeffs: Iterable[int]) -> "RingElement":
        c = [int(x) for x in coeffs]
        n = self.degree
        if len(c) > n:
            c = self._reduce_poly(c)
        c = c + [0] * (n - len(c))
        return RingElement(self, tuple(c))

    def _reduce_poly(self, p: Sequence[int]) -> List[int]:
        n = self.degree
        p = list(p)
        mc = self.minpoly.coeffs
        for k in range(len(p) - 1, n - 1, -1):
            c = p[k]
            if c:
                p[k] = 0
                for i in range(n):
                    p[k - n + i] -= c * mc[i]
        return p[:n]

    @property
    def zero(self) -> "RingElement":
        return self.element([0])

    @property
    def one(self) -> "RingElement":
        return self.element([1])

    @property
    def lam(self) -> "RingElement":
        if self.degree == 1:
            return self.element([1])
        return self.element([0, 1])

    def coerce(self, x: IntLike) -> "RingElement":
        if isinstance(x, RingElement):
            if x.ring.q != self.q:
                raise ValueError(f"ring mismatch: q={x.ring.q} vs q={self.q}")
            return x
        if isinstance(x, (int, np.integer)):
            return self.element([int(x)])
        raise TypeError(f"cannot coerce {x!r} into Z[lambda_{self.q}]")

    def lam_float(self) -> float:
        return 2.0 * math.cos(math.pi / self.q)

    def parse(self, text: str) -> "RingElement":
        return parse_element(text, self.q)


@lru_cache(maxsize=None)
def hecke_ring(q: int) -> HeckeRing:
    return HeckeRing(q)


@dataclass(frozen=True, eq=False)
class RingElement:
    ring: HeckeRing = field(repr=False)
    coeffs: Tuple[int, ...]

    # -- arithmetic
    def _other(self, other) -> "RingElement":
        return self.ring.coerce(other)

    def __add__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return RingElement(self.ring, tuple(x + y for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return RingElement(self.ring, tuple(x - y for x, y in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        n = self.ring.degree
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    if y:
                        prod[i + j] += x * y
        return RingElement(self.ring, tuple(self.ring._reduce_poly(prod)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.unit_inverse() ** (-k)
        out = self.ring.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.ring.coerce(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring.q == other.ring.q and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring.q, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # ordering through the real embedding
    def __lt__(self, other):
        return sign_of(self - other) < 0

    def __le__(self, other):
        return sign_of(self - other) <= 0

    def __gt__(self, other):
        return sign_of(self - other) > 0

    def __ge__(self, other):
        return sign_of(self - other) >= 0

    def __float__(self):
        lam = self.ring.lam_float()
        return float(sum(c * lam ** i for i, c in enumerate(self.coeffs)))

    def __repr__(self):
        return f"RingElement(q={self.ring.q}, {format_element(self)})"

    def __str__(self):
        return format_element(self)

    # -- number theory
    def mult_matrix(self) -> List[List[int]]:
        """Integer matrix of x -> self*x; column j holds self*lambda^j."""
        n = self.ring.degree
        cols = []
        for j in range(n):
            basis = [0] * n
            basis[j] = 1
            cols.append((self * self.ring.element(basis)).coeffs)
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def norm(self) -> int:
        """Field norm as the resultant of the coefficient polynomial with the minimal polynomial."""
        return resultant(self.ring.minpoly.coeffs, self.coeffs)

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def unit_inverse(self) -> "RingElement":
        m = self.mult_matrix()
        if abs(lattice.det_bareiss(m)) != 1:
            raise ZeroDivisionError(f"{self} is not a unit")
        inv = lattice.inverse_unimodular(m)
        return self.ring.element([row[0] for row in inv])

    def divides(self, other: IntLike) -> bool:
        return exact_quotient(other if isinstance(other, RingElement) else self.ring.coerce(other), self) is not None

    def conjugate5(self) -> "RingElement":
        """Galois conjugate for q = 5 (lambda -> 1 - lambda)."""
        if self.ring.q != 5:
            raise ValueError("conjugate5 requires q = 5")
        a0, a1 = self.coeffs
        return self.ring.element([a0 + a1, -a1])


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Res(f, g) via the Sylvester determinant; f monic of degree n, deg g < n."""
    f = _trim(list(f))
    g = _trim(list(g))
    m = len(f) - 1
    if not any(g):
        return 0
    k = len(g) - 1
    if k == 0:
        return g[0] ** m
    size = m + k
    syl = []
    fr = list(reversed(f))
    gr = list(reversed(g))
    for i in range(k):
        syl.append([0] * i + fr + [0] * (size - i - len(fr)))
    for i in range(m):
        syl.append([0] * i + gr + [0] * (size - i - len(gr)))
    return lattice.det_bareiss(syl)


def exact_quotient(a: RingElement, b: RingElement):
    """a / b if it lies in Z[lambda], else None."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero")
    m = b.mult_matrix()
    n = len(m)
    from fractions import Fraction

    aug = [[Fraction(x) for x in row] + [Fraction(a.coeffs[i])] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    sol = [aug[i][n] for i in range(n)]
    if any(x.denominator != 1 for x in sol):
        return None
    return a.ring.element([int(x) for x in sol])


# -- sign under the real embedding -------------------------------------------

def _sign_int(x: int) -> int:
    return (x > 0) - (x < 0)


def sign_of(a: RingElement) -> int:
    """Sign of a under lambda -> 2cos(pi/q): -1, 0 or 1."""
    if a.is_zero():
        return 0
    q = a.ring.q
    if a.ring.degree == 1:
        return _sign_int(a.coeffs[0])
    if q == 5:
        # a0 + a1*(1+sqrt5)/2 = (u + v*sqrt5)/2
        a0, a1 = a.coeffs
        u, v = 2 * a0 + a1, a1
        su, sv = _sign_int(u), _sign_int(v)
        if su == sv or sv == 0:
            return su
        if su == 0:
            return sv
        # opposite signs: compare u^2 with 5 v^2
        return su if u * u > 5 * v * v else sv
    saved = iv.dps
    try:
        for dps in SIGN_PRECISIONS:
            iv.dps = dps
            lam = 2 * iv.cos(iv.pi / q)
            acc = iv.mpf(0)
            for c in reversed(a.coeffs):
                acc = acc * lam + c
            if acc.a > 0:
                return 1
            if acc.b < 0:
                return -1
    finally:
        iv.dps = saved
    raise PrecisionExhausted(f"cannot decide sign of {a} for q={q}")


def abs_elem(a: RingElement) -> RingElement:
    return -a if sign_of(a) < 0 else a


# -- Euclidean gcd for q in {3, 5} ------------------------------------------------

def _round_div(n: int, d: int) -> int:
    """Nearest integer to n/d, d > 0, ties upward."""
    return (2 * n + d) // (2 * d)


def euclid_divmod(a: RingElement, b: RingElement) -> Tuple[RingElement, RingElement]:
    q = a.ring.q
    if b.is_zero():
        raise ZeroDivisionError("division by zero")
    if q == 3:
        x, y = a.coeffs[0], b.coeffs[0]
        k = _round_div(x, y) if y > 0 else -_round_div(x, -y)
        quo = a.ring.element([k])
        return quo, a - quo * b
    if q == 5:
        nb = b.norm()
        num = a * b.conjugate5()
        sgn = 1 if nb > 0 else -1
        coeffs = [_round_div(sgn * c, abs(nb)) for c in num.coeffs]
        quo = a.ring.element(coeffs)
        return quo, a - quo * b
    raise NotImplementedError(f"euclidean division is only supported for q in {{3, 5}}, not q={q}")


def _associate_key(x: RingElement):
    if x.ring.q == 5:
        a0, a1 = x.coeffs
        return (2 * a0 * a0 + 2 * a0 * a1 + 3 * a1 * a1, x.coeffs)
    return (sum(c * c for c in x.coeffs), x.coeffs)


def normalize_associate(x: RingElement) -> RingElement:
    """Deterministic representative of x up to units: positive real value, smallest trace form."""
    if x.is_zero():
        return x
    x = abs_elem(x)
    if x.ring.q != 5:
        return x
    lam = x.ring.lam
    laminv = lam.unit_inverse()
    best = x
    # the trace form 2a0^2 + 2a0a1 + 3a1^2 is convex along multiplication by lambda^k
    for step in (lam, laminv):
        cur = x
        while True:
            nxt = abs_elem(cur * step)
            if _associate_key(nxt) < _associate_key(best):
                best = nxt
                cur = nxt
            else:
                break
    return best


def euclid_gcd(a: RingElement, b: RingElement) -> RingElement:
    if a.ring.q not in (3, 5):
        raise NotImplementedError(f"gcd is only supported for q in {{3, 5}}, not q={a.ring.q}")
    b = a.ring.coerce(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    x, y = a, b
    while not y.is_zero():
        _, r = euclid_divmod(x, y)
        x, y = y, r
    return normalize_associate(x)


# -- text format ------------------------------------------------------------------

_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*(L(?:\^(\d+))?)?\s*")


def format_element(a: RingElement) -> str:
    """``a0`` or ``a0+a1L`` / ``a0-a1L``; higher powers as ``+a2L^2``."""
    parts = [str(a.coeffs[0])]
    for k, c in enumerate(a.coeffs[1:], start=1):
        if c == 0:
            continue
        mono = "L" if k == 1 else f"L^{k}"
        parts.append(f"{'+' if c > 0 else '-'}{abs(c)}{mono}")
    return "".join(parts)


def parse_element(text: str, q: int) -> RingElement:
    """Parse ``-6-11L`` style literals; bare ``L``, ``2L`` and ``L^k`` are accepted too."""
    ring = hecke_ring(q)
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty ring element")
    coeffs: dict = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"bad ring element {text!r} at offset {pos}")
        sign, digits, mono, power = m.groups()
        if not first and not sign:
            raise ValueError(f"bad ring element {text!r}: missing operator at offset {pos}")
        if not digits and not mono:
            raise ValueError(f"bad ring element {text!r} at offset {pos}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        k = 0 if not mono else (int(power) if power else 1)
        coeffs[k] = coeffs.get(k, 0) + c
        pos = m.end()
        first = False
    poly = [0] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        poly[k] += c
    if ring.degree == 1:
        # lambda_3 = 1
        return ring.element([sum(poly)])
    return ring.element(poly)


# -- finite quotients ---------------------------------------------------------------

class FiniteRing:
    """Z[lambda]/(alpha) as a product of cyclic groups from the Smith form of x -> alpha*x.

    Residues are tuples with one entry per nontrivial invariant factor; they are
    also numbered 0..cardinality-1 in mixed radix (first coordinate most significant).
    """

    #: build full addition/multiplication tables only below this cardinality
    TABLE_LIMIT = 1024

    def __init__(self, alpha: RingElement):
        if alpha.is_zero():
            raise ValueError("quotient by the zero ideal is infinite")
        self.ring = alpha.ring
        self.alpha = alpha
        d, u, v = lattice.smith_normal_form(alpha.mult_matrix())
        diag = [d[i][i] for i in range(len(d))]
        self._keep = [i for i, x in enumerate(diag) if x != 1]
        self.moduli: Tuple[int, ...] = tuple(diag[i] for i in self._keep)
        self._u = u
        self._uinv = lattice.inverse_unimodular(u)
        self.cardinality = math.prod(self.moduli) if self.moduli else 1
        self._radix = []
        acc = 1
        for mdl in reversed(self.moduli):
            self._radix.append(acc)
            acc *= mdl
        self._radix.reverse()
        k = len(self.moduli)
        # structure constants: product of basis residues e_i * e_j
        basis_lifts = [self.lift(tuple(int(i == j) for j in range(k))) for i in range(k)]
        self.structure = np.zeros((k, k, k), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                self.structure[i, j] = self.reduce(basis_lifts[i] * basis_lifts[j])
        self._tables = None

    def __repr__(self):
        return f"FiniteRing(alpha={self.alpha}, moduli={self.moduli})"

    # residues as tuples
    def reduce(self, a: IntLike) -> Tuple[int, ...]:
        a = self.ring.coerce(a)
        y = lattice.matvec(self._u, a.coeffs)
        return tuple(y[i] % m for i, m in zip(self._keep, self.moduli))

    def lift(self, r: Sequence[int]) -> RingElement:
        y = [0] * self.ring.degree
        for i, x in zip(self._keep, r):
            y[i] = int(x)
        return self.ring.element(lattice.matvec(self._uinv, y))

    def add(self, r, s):
        return tuple((x + y) % m for x, y, m in zip(r, s, self.moduli))

    def neg(self, r):
        return tuple((-x) % m for x, m in zip(r, self.moduli))

    def sub(self, r, s):
        return self.add(r, self.neg(s))

    def mul(self, r, s):
        k = len(self.moduli)
        out = [0] * k
        for i in range(k):
            if r[i]:
                for j in range(k):
                    if s[j]:
                        c = r[i] * s[j]
                        row = self.structure[i, j]
                        for t in range(k):
                            out[t] += c * int(row[t])
        return tuple(x % m for x, m in zip(out, self.moduli))

    @property
    def zero(self):
        return tuple(0 for _ in self.moduli)

    @property
    def one(self):
        return self.reduce(1)

    # residues as integers
    def encode(self, r: Sequence[int]) -> int:
        return int(sum(x * w for x, w in zip(r, self._radix)))

    def decode(self, code: int) -> Tuple[int, ...]:
        return tuple((code // w) % m for w, m in zip(self._radix, self.moduli))

    def reduce_code(self, a: IntLike) -> int:
        return self.encode(self.reduce(a))

    def elements(self) -> List[Tuple[int, ...]]:
        return [self.decode(c) for c in range(self.cardinality)]

    def tables(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(add, mul, neg) lookup tables on residue codes."""
        if self._tables is None:
            if self.cardinality > self.TABLE_LIMIT:
                raise ValueError(f"ring of size {self.cardinality} too large for lookup tables")
            n = self.cardinality
            res = np.array([self.decode(c) for c in range(n)], dtype=np.int64).reshape(n, -1)
            mods = np.array(self.moduli, dtype=np.int64)
            radix = np.array(self._radix, dtype=np.int64)
            add = ((res[:, None, :] + res[None, :, :]) % mods) @ radix if n > 1 else np.zeros((1, 1), np.int64)
            prod = np.einsum("ai,bj,ijk->abk", res, res, self.structure) % mods if n > 1 else None
            mul = prod @ radix if n > 1 else np.zeros((1, 1), np.int64)
            neg = ((-res) % mods) @ radix if n > 1 else np.zeros(1, np.int64)
            self._tables = (add.astype(np.int64), mul.astype(np.int64), neg.astype(np.int64))
        return self._tables


def quotient_ring(alpha: RingElement) -> FiniteRing:
    return FiniteRing(alpha)


def reduce(a: RingElement, R: FiniteRing) -> Tuple[int, ...]:
    return R.reduce(a)
