from __future__ import annotations

import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramrec.errors import DivisionByZero
from ramrec.field import (
    ONE,
    ZERO,
    FieldElement,
    cyclotomic_polynomial,
    format_rational,
    lcm,
    parse_rational,
    root_of_unity,
    totient,
)

CONDUCTORS = [1, 3, 4, 5, 6, 8, 12]

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def elements(draw, conductors=CONDUCTORS):
    n = draw(st.sampled_from(conductors))
    coeffs = draw(st.lists(small_q, min_size=1, max_size=max(1, totient(n))))
    return FieldElement(coeffs, n)


def approx(a: complex, b: complex) -> bool:
    return abs(a - b) <= 1e-8 * (1 + abs(a) + abs(b))


def test_i_squared():
    i = root_of_unity(4)
    assert i * i == FieldElement(-1)


def test_one_plus_i_times_one_minus_i():
    i = root_of_unity(4)
    assert (1 + i) * (1 - i) == 2


def test_cube_roots_sum():
    z = root_of_unity(3)
    assert z + z**2 == -1


@pytest.mark.parametrize("n,j,expected", [(2, 1, -1), (4, 2, -1), (7, 0, 1)])
def test_root_of_unity_values(n, j, expected):
    assert root_of_unity(n, j) == expected


def test_fifth_roots_product():
    assert root_of_unity(5, 1) * root_of_unity(5, 4) == 1


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        ONE / ZERO
    with pytest.raises(DivisionByZero):
        root_of_unity(4) / 0
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_rational_text():
    assert format_rational(parse_rational("-6/4")) == "-3/2"
    assert format_rational(parse_rational("7")) == "7"
    assert str(FieldElement(Fraction(3, 9))) == "1/3"


def test_conductor_two_is_rational():
    assert FieldElement([1, 1], 2) == 0
    assert FieldElement([1, 1], 2).conductor == 1


def test_rational_equal_across_conductors():
    half = FieldElement.rational(Fraction(1, 2))
    for n in CONDUCTORS:
        lifted = half.embed(n)
        assert lifted == half
        assert hash(lifted) == hash(half)
        assert lifted.simplify().conductor == 1


def test_mixed_conductor_arithmetic():
    i = root_of_unity(4)
    w = root_of_unity(3)
    prod = i * w
    assert prod.conductor == 12
    assert prod == root_of_unity(12, 3 + 4)


@settings(max_examples=60, deadline=None)
@given(elements(), elements(), elements())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    assert a - a == 0


@settings(max_examples=60, deadline=None)
@given(elements())
def test_inverse(a):
    if a:
        assert a * a.inverse() == 1
        assert a / a == 1


@settings(max_examples=60, deadline=None)
@given(elements(), elements())
def test_matches_complex_evaluation(a, b):
    # independent numerical route through the complex embedding zeta_N = exp(2 pi i / N)
    assert approx((a * b).to_complex(), a.to_complex() * b.to_complex())
    assert approx((a + b).to_complex(), a.to_complex() + b.to_complex())
    if b:
        assert approx((a / b).to_complex(), a.to_complex() / b.to_complex())


@settings(max_examples=40, deadline=None)
@given(small_q, st.sampled_from(CONDUCTORS))
def test_embedding_round_trip(q, n):
    x = FieldElement.rational(q)
    assert x.embed(n).simplify() == x
    assert x.embed(n).to_rational() == q


@settings(max_examples=40, deadline=None)
@given(elements(conductors=[3, 4, 5]), st.sampled_from([2, 3, 4]))
def test_embedding_preserves_value(a, m):
    big = a.embed(a.conductor * m)
    assert big == a
    assert approx(big.to_complex(), a.to_complex())


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 8, 9, 10, 12])
def test_roots_of_unity_identities(n):
    z = root_of_unity(n)
    assert z**n == 1
    total = ZERO
    for j in range(n):
        total = total + root_of_unity(n, j)
    assert total == 0
    assert approx(z.to_complex(), cmath.exp(2j * cmath.pi / n))


@settings(max_examples=60, deadline=None)
@given(elements())
def test_text_round_trip(a):
    assert FieldElement.from_text(a.to_text(), a.conductor) == a


def test_lcm():
    assert lcm(4, 6) == 12
    assert lcm(5) == 5
