import pytest
from hypothesis import given
from hypothesis import strategies as st

from adicert.ring import (ZZ, ElementParseError, Poly, PolyRing, RadicalRelation, RingMismatchError, euclid_gcd,
                          is_prime, parse_ring)

from conftest import F5, QT, f5_polys, smooth_ints


def test_gcd_bezout_12_18():
    g, u, v = euclid_gcd(ZZ, 12, 18)
    assert g == 6 and 12 * u + 18 * v == 6


def test_gcd_with_zero():
    assert euclid_gcd(ZZ, 0, 5) == (5, 0, 1)


def test_gcd_polynomials_over_q():
    a, b = QT.parse("t^2 - 1"), QT.parse("t - 1")
    g, u, v = euclid_gcd(QT, a, b)
    assert g == QT.parse("t - 1")
    assert u * a + v * b == g


def test_gcd_ring_mismatch():
    with pytest.raises(RingMismatchError):
        euclid_gcd(ZZ, 2, F5.parse("t"))


@pytest.mark.parametrize("a,b,rel", [
    (6, 12, RadicalRelation.EQUAL),
    (2, 6, RadicalRelation.SUPPORT_OF_A_IN_B),
    (6, 2, RadicalRelation.SUPPORT_OF_B_IN_A),
    (4, 9, RadicalRelation.INCOMPARABLE),
])
def test_radical_compare(a, b, rel):
    assert ZZ.radical_compare(a, b) == rel


def test_radical_compare_rejects_zero():
    with pytest.raises(ValueError):
        ZZ.radical_compare(0, 3)


def test_part_split_examples():
    assert ZZ.part_split(12, 2) == (4, 3)
    assert ZZ.part_split(7, 2) == (1, 7)
    d = QT.parse("t^3") * QT.parse("t - 1")
    assert QT.part_split(d, QT.parse("t")) == (QT.parse("t^3"), QT.parse("t - 1"))
    with pytest.raises(ValueError):
        ZZ.part_split(0, 2)


@given(smooth_ints(), smooth_ints(), smooth_ints())
def test_part_split_multiplicative(d1, d2, g):
    a1, b1 = ZZ.part_split(d1, g)
    a2, b2 = ZZ.part_split(d2, g)
    assert ZZ.part_split(d1 * d2, g) == (a1 * a2, b1 * b2)


@given(smooth_ints(), smooth_ints())
def test_part_split_contract(d, g):
    a, b = ZZ.part_split(d, g)
    assert a * b == d
    assert ZZ.is_unit(ZZ.gcd(b, g))
    assert ZZ.radical_exponent(g, a) is not None  # a | g^k


@given(f5_polys(), f5_polys())
def test_part_split_polynomials(d, g):
    if not d or not g:
        return
    a, b = F5.part_split(d, g)
    assert F5.normalize(a * b) == F5.normalize(d)
    assert F5.is_unit(F5.gcd(b, g))


@given(smooth_ints(), smooth_ints())
def test_equal_radical_absorbs_products(a, b):
    if ZZ.radical_compare(a, b) == RadicalRelation.EQUAL:
        assert ZZ.radical_compare(a * b, a) == RadicalRelation.EQUAL


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_gcd_commutative_and_folds(a, b, c):
    assert ZZ.gcd(a, b) == ZZ.gcd(b, a)
    assert ZZ.gcd(a, b, c) == ZZ.gcd(ZZ.gcd(a, b), c) == ZZ.gcd(a, ZZ.gcd(b, c))
    g, u, v = ZZ.gcdex(a, b)
    assert u * a + v * b == g and g >= 0


@given(f5_polys(), f5_polys())
def test_polynomial_gcd_bezout(a, b):
    g, u, v = F5.gcdex(a, b)
    assert u * a + v * b == g
    assert not g or g.lc == 1
    if g:
        assert F5.divides(g, a) and F5.divides(g, b)


@given(st.integers(-10**9, 10**9))
def test_normalize_idempotent(a):
    assert ZZ.normalize(ZZ.normalize(a)) == ZZ.normalize(a) >= 0


def test_polynomial_literals():
    f = QT.parse("3*t^2 - 1/2*t + 4")
    assert QT.format(f) == "3*t^2 - 1/2*t + 4"
    assert QT.parse(QT.format(f)) == f
    assert F5.parse("t^2 + 7") == F5.parse("t^2 + 2")
    assert F5.parse("-t") == F5.parse("4*t")
    with pytest.raises(ElementParseError):
        ZZ.parse("t")
    with pytest.raises(ElementParseError):
        F5.parse("t^")


def test_prime_field_coefficients_reduced():
    f = Poly([7, -1, 5], 5)
    assert all(0 <= c < 5 for c in f.coeffs)


def test_ring_specs():
    assert parse_ring("Z") == ZZ
    assert parse_ring("F5[t]") == F5
    assert parse_ring("GF(7)[t]") == PolyRing(7)
    assert parse_ring("Q[t]") == QT
    with pytest.raises(ValueError):
        parse_ring("F6[t]")
    with pytest.raises(ValueError):
        parse_ring("R[x]")


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2**31 - 1)


def test_radical_exponent():
    assert ZZ.radical_exponent(2, 4) == 2
    assert ZZ.radical_exponent(3, 2) is None
    assert ZZ.radical_exponent(6, 12) == 2
