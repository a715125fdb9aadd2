from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramrec.errors import ParseError
from ramrec.parser import BinOp, Neg, Num, Pow, Var, lower, parse_expression, parse_to_function, to_text
from ramrec.ratfun import MultiPoly, RationalFunction

T = parse_to_function("t")


def poly(*coeffs) -> RationalFunction:
    return RationalFunction(MultiPoly.from_univariate("t", coeffs))


def test_first_example_x():
    assert parse_to_function("t + 1/t") == RationalFunction(poly(1, 0, 1).num, MultiPoly.variable(("t",), "t"))


def test_quartic():
    assert parse_to_function("(t-1)^4") == poly(1, -4, 6, -4, 1)


def test_negative_exponent():
    assert parse_to_function("t^(-2)") == 1 / (T * T)
    assert parse_to_function("t^-2") == 1 / (T * T)


def test_precedence_and_associativity():
    assert parse_expression("1 - 2 - 3") == BinOp("-", BinOp("-", Num(Fraction(1)), Num(Fraction(2))), Num(Fraction(3)))
    assert parse_expression("2^3^2") == Pow(Num(Fraction(2)), Pow(Num(Fraction(3)), Num(Fraction(2))))
    assert parse_expression("-t^2") == Neg(Pow(Var("t"), Num(Fraction(2))))
    assert parse_expression("8/4/2") == BinOp("/", BinOp("/", Num(Fraction(8)), Num(Fraction(4))), Num(Fraction(2)))
    assert parse_to_function("1 + 2*t^2") == poly(1, 0, 2)
    assert parse_to_function("-t^2") == poly(0, 0, -1)


def test_decimals_are_exact():
    assert parse_to_function("0.1*t") == poly(0, Fraction(1, 10))
    assert parse_expression("2.50") == Num(Fraction(5, 2))


def test_whitespace_insensitive():
    assert parse_expression(" ( 1 /3 ) *t ^ 3 ") == parse_expression("(1/3)*t^3")


@pytest.mark.parametrize(
    "src,position",
    [("t +", 3), ("2 t", 2), ("(t + 1", 6), ("x + 1", 0), ("t $ 2", 2), ("", 0), ("t^", 2)],
)
def test_errors_report_position(src, position):
    with pytest.raises(ParseError) as info:
        parse_expression(src)
    assert info.value.position == position
    assert info.value.expected
    assert f"position {position}" in str(info.value)


def test_non_integer_exponent_rejected():
    with pytest.raises(ParseError):
        parse_to_function("t^(1/2)")
    with pytest.raises(ParseError):
        parse_to_function("t^t")


def test_division_by_zero_rejected():
    with pytest.raises(ParseError):
        parse_to_function("1/(t - t)")


literals = st.one_of(
    st.integers(0, 50).map(Fraction),
    st.builds(lambda n, k: Fraction(n, 10**k), st.integers(0, 999), st.integers(1, 3)),
)


def trees():
    leaves = st.one_of(literals.map(Num), st.just(Var("t")))
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            st.builds(Neg, inner),
            st.builds(BinOp, st.sampled_from("+-*/"), inner, inner),
            st.builds(Pow, inner, inner),
        ),
        max_leaves=12,
    )


@settings(max_examples=200, deadline=None)
@given(trees())
def test_round_trip(tree):
    assert parse_expression(to_text(tree)) == tree


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5), st.integers(-3, 3))
def test_lowering_matches_direct_construction(coeffs, k):
    src = " + ".join(f"({c})*t^{i}" for i, c in enumerate(coeffs))
    src = f"({src}) * t^({k})"
    expected = poly(*coeffs) * (T**k if k >= 0 else 1 / T ** (-k))
    assert lower(parse_expression(src)) == expected
