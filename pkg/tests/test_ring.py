import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from hecke.ring import (
    PrecisionExhausted, euclid_gcd, format_element, hecke_ring, min_poly, parse_element,
    quotient_ring, reduce, sign_of,
)

R5 = hecke_ring(5)
L = R5.lam

coef = st.integers(-60, 60)
elem5 = st.builds(lambda a, b: R5(a, b), coef, coef)


def test_min_poly_examples():
    assert min_poly(3).coeffs == (-1, 1)
    assert min_poly(5).coeffs == (-1, -1, 1)
    assert min_poly(7).coeffs == (1, -2, -1, 1)
    assert str(min_poly(5)) == "x^2 - x - 1"


@pytest.mark.parametrize("q", range(3, 24))
def test_min_poly_root_and_degree(q):
    p = min_poly(q)
    phi = sum(1 for k in range(1, 2 * q + 1) if math.gcd(k, 2 * q) == 1)
    assert p.degree == phi // 2
    assert p.coeffs[-1] == 1
    with mpmath.workdps(40):
        assert abs(p(2 * mpmath.cos(mpmath.pi / q))) < 1e-9


def test_arith_examples():
    assert L * L == L + 1
    assert (L + 2) * (L + 2) == R5(5, 5)
    assert (L + 2) * (L + 2) == 5 * L * L
    assert (3 * L - 7) * 1 == 3 * L - 7
    assert L ** -1 == L - 1


def test_mismatched_q():
    with pytest.raises(ValueError):
        L + hecke_ring(7).lam


@given(elem5, elem5, elem5)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a - a == R5.zero


@given(elem5, elem5)
def test_canonical_forms_unique(a, b):
    assert (a == b) == (a.coeffs == b.coeffs)


def test_sign_examples():
    assert sign_of(L - 1) == 1
    assert sign_of(R5.zero) == 0
    assert sign_of(2 - L * L) == -1
    assert sign_of(1 - L) == -1


@given(elem5)
def test_sign_matches_float(a):
    with mpmath.workdps(50):
        v = a.coeffs[0] + a.coeffs[1] * (1 + mpmath.sqrt(5)) / 2
        want = 0 if v == 0 else (1 if v > 0 else -1)
    assert sign_of(a) == want


def test_sign_general_q_interval():
    R7 = hecke_ring(7)
    lam = R7.lam
    assert sign_of(lam - 1) == 1
    assert sign_of(lam * lam - lam - 2) == -1  # 1.80^2 - 1.80 - 2 < 0
    assert sign_of(R7.zero) == 0


def test_precision_exhausted_is_arithmetic_error():
    assert issubclass(PrecisionExhausted, ArithmeticError)


def test_gcd_examples():
    g = euclid_gcd(R5(5), L + 2)
    assert g.divides(L + 2) and (L + 2).divides(g)
    assert sign_of(g) > 0
    g = euclid_gcd(3 * L + 1, R5.zero)
    assert g.divides(3 * L + 1) and (3 * L + 1).divides(g)
    assert euclid_gcd(L, L + 1).is_unit()


@settings(max_examples=50)
@given(elem5, elem5, elem5)
def test_gcd_divides_and_is_greatest(a, b, c):
    if (a.is_zero() and b.is_zero()) or c.is_zero():
        return
    g = euclid_gcd(a * c, b * c)
    assert g.divides(a * c) and g.divides(b * c)
    assert c.divides(g)


def test_gcd_unsupported_q():
    R7 = hecke_ring(7)
    with pytest.raises(NotImplementedError):
        euclid_gcd(R7(2), R7(3))


def test_quotient_examples():
    F = quotient_ring(L + 2)
    assert F.cardinality == 5
    assert F.reduce(L) == F.reduce(3)
    R = quotient_ring(R5(5))
    assert R.cardinality == 25 and R.moduli == (5, 5)
    # x^2 - x - 1 = (x - 3)^2 mod 5, so L - 3 is a nonzero nilpotent
    x = R.reduce(L - 3)
    assert x != R.zero and R.mul(x, x) == R.zero
    assert quotient_ring(R5(1)).cardinality == 1
    with pytest.raises(ValueError):
        quotient_ring(R5.zero)


def test_reduce_examples():
    R = quotient_ring(R5(5))
    assert reduce(10 * L + 5, R) == R.zero
    assert reduce(-11 * L - 6, R) == reduce(4 * L + 4, R)
    assert reduce(L + 2, quotient_ring(L + 2)) == (0,)


@settings(max_examples=20, deadline=None)
@given(st.integers(-40, 40), st.integers(-40, 40))
def test_quotient_cardinality_matches_norm(a0, a1):
    alpha = R5(a0, a1)
    if alpha.is_zero() or abs(alpha.norm()) > 10_000:
        return
    R = quotient_ring(alpha)
    assert R.cardinality == abs(alpha.norm())
    # every residue lifts and reduces back to itself: the residues are all distinct
    assert all(R.reduce(R.lift(r)) == r for r in R.elements())


@settings(max_examples=200, deadline=None)
@given(elem5, elem5)
def test_reduce_is_a_homomorphism(a, b):
    for R in (quotient_ring(R5(5)), quotient_ring(3 * L + 7)):
        assert R.reduce(a * b) == R.mul(R.reduce(a), R.reduce(b))
        assert R.reduce(a + b) == R.add(R.reduce(a), R.reduce(b))


def test_tables_agree_with_tuple_arithmetic():
    R = quotient_ring(R5(5))
    add, mul, neg = R.tables()
    for x in range(R.cardinality):
        for y in range(0, R.cardinality, 3):
            assert mul[x, y] == R.encode(R.mul(R.decode(x), R.decode(y)))
            assert add[x, y] == R.encode(R.add(R.decode(x), R.decode(y)))
        assert neg[x] == R.encode(R.neg(R.decode(x)))


@given(elem5)
def test_format_parse_roundtrip(a):
    assert parse_element(format_element(a), 5) == a


def test_format_examples():
    assert format_element(-6 - 11 * L) == "-6-11L"
    assert format_element(R5(4)) == "4"
    assert parse_element("-6-11L", 5) == -6 - 11 * L
    assert parse_element("L", 5) == L
    with pytest.raises(ValueError):
        parse_element("3+", 5)
    with pytest.raises(ValueError):
        parse_element("", 5)
