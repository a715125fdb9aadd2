from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ramrec.errors import DivisionByZero
from ramrec.field import FieldElement, root_of_unity
from ramrec.parser import parse_to_function
from ramrec.ratfun import MultiPoly, RationalFunction, derivative, rational_roots, rf_arith

VARS = ("p0", "p1")
SYMS = sympy.symbols(VARS)


def rf(src: str, var: str = "p") -> RationalFunction:
    """Parse an expression written in ``var`` (the parser only knows t)."""
    return parse_to_function(src.replace(var, "t")).rename({"t": var})


@st.composite
def polys(draw, max_terms=4, max_deg=3):
    n = draw(st.integers(min_value=1, max_value=max_terms))
    terms = {}
    for _ in range(n):
        e = (draw(st.integers(0, max_deg)), draw(st.integers(0, max_deg)))
        terms[e] = draw(st.integers(-5, 5))
    return MultiPoly(VARS, terms)


@st.composite
def nonzero_polys(draw):
    p = draw(polys())
    return p if p else MultiPoly.constant(VARS, 1)


@st.composite
def rational_functions(draw):
    # a shared factor makes the gcd step do real work
    common = draw(nonzero_polys())
    return RationalFunction(draw(polys()) * common, draw(nonzero_polys()) * common)


def to_sympy(p: MultiPoly):
    expr = sympy.Integer(0)
    for exps, c in p.terms.items():
        q = c.to_rational()
        term = sympy.Rational(int(q.numerator), int(q.denominator))
        for s, e in zip(SYMS, exps):
            term *= s**e
        expr += term
    return expr


def test_self_difference_is_zero():
    f = rf("p/(p-1)")
    assert not (f - f)
    assert rf_arith(f, f, "sub") == RationalFunction.constant(f.vars, 0)


def test_cancellation():
    assert rf("(p^2-1)/(p-1)") == rf("p+1")
    assert rf("(p^2-1)/(p-1)").den.is_constant()


def test_partial_fraction_sum():
    assert rf("1/(p-1)") + rf("1/(p+1)") == rf("2*p/(p^2-1)")


def test_denominator_is_normalized():
    f = rf("1/(3*p-6)")
    _, lc = f.den.leading_term()
    assert lc == 1
    assert f.num == MultiPoly.constant(f.vars, FieldElement(Fraction(1, 3)))


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        rf("p") / RationalFunction.constant(("p",), 0)


def test_derivative_examples():
    assert derivative(rf("t + 1/t", "t"), "t") == rf("(t^2-1)/t^2", "t")
    assert derivative(rf("(1/3)*t^3", "t"), "t") == rf("t^2", "t")
    assert not derivative(RationalFunction.constant(("t",), 7), "t")


def test_rational_roots_examples():
    t2 = MultiPoly.from_univariate("t", [0, 0, 4, 5])
    roots, rest = rational_roots(t2)
    assert sorted((r.to_rational(), m) for r, m in roots) == [(Fraction(-4, 5), 1), (0, 2)]
    assert rest == 0

    roots, rest = rational_roots(MultiPoly.from_univariate("t", [-1, 0, 1]))
    assert sorted(r.to_rational() for r, _ in roots) == [-1, 1]
    assert rest == 0

    roots, rest = rational_roots(MultiPoly.from_univariate("t", [-2, 0, 1]), extension=12)
    assert roots == []
    assert rest == 2


def test_cyclotomic_roots():
    # (t^2 + 1)(t - 3): roots +-i need the extension Q(zeta_4)
    p = MultiPoly.from_univariate("t", [-3, 1, -3, 1])
    roots, rest = rational_roots(p, extension=4)
    found = {str(r) for r, _ in roots}
    assert rest == 0
    assert {"3", str(root_of_unity(4)), str(root_of_unity(4, 3))} == found
    _, rest = rational_roots(p, extension=1)
    assert rest == 2


def test_json_round_trip():
    f = rf("(p^3 - 2/3)/(p^2 + 5)")
    assert RationalFunction.from_json(f.to_json()) == f
    i = root_of_unity(4)
    g = RationalFunction(MultiPoly(("p0",), {(1,): i, (0,): 1}), MultiPoly(("p0",), {(2,): 1, (0,): 2}))
    data = g.to_json()
    assert data["conductor"] == 4
    assert RationalFunction.from_json(data) == g


def test_rename_reorders_variables():
    f = RationalFunction(MultiPoly(("p0", "p1"), {(2, 0): 1, (0, 1): 1}), MultiPoly(("p0", "p1"), {(1, 1): 1}))
    g = f.rename({"p0": "p1", "p1": "p0"})
    assert g.vars == ("p0", "p1")
    assert g == RationalFunction(MultiPoly(("p0", "p1"), {(0, 2): 1, (1, 0): 1}), MultiPoly(("p0", "p1"), {(1, 1): 1}))


@settings(max_examples=40, deadline=None)
@given(rational_functions())
def test_canonical_form_against_sympy(f):
    num, den = to_sympy(f.num), to_sympy(f.den)
    assert sympy.expand(sympy.gcd(num, den)).is_number
    _, lc = f.den.leading_term()
    assert lc == 1


@settings(max_examples=40, deadline=None)
@given(rational_functions(), rational_functions())
def test_equality_iff_cross_multiplication(a, b):
    same = a.num * b.den == b.num * a.den
    assert (a == b) == same
    s = a + b
    lhs = to_sympy(s.num) * to_sympy(a.den) * to_sympy(b.den)
    rhs = (to_sympy(a.num) * to_sympy(b.den) + to_sympy(b.num) * to_sympy(a.den)) * to_sympy(s.den)
    assert sympy.expand(lhs - rhs) == 0


@settings(max_examples=40, deadline=None)
@given(rational_functions(), rational_functions())
def test_product_and_quotient(a, b):
    if b:
        assert (a * b) * b.inverse() == a
        assert (a / b) * b == a
    assert a * b == b * a


@settings(max_examples=40, deadline=None)
@given(rational_functions(), rational_functions(), st.sampled_from(VARS))
def test_leibniz_rule(a, b, v):
    assert derivative(a * b, v) == derivative(a, v) * b + a * derivative(b, v)


@settings(max_examples=40, deadline=None)
@given(nonzero_polys(), nonzero_polys())
def test_gcd_against_sympy(a, b):
    g = a.gcd(b)
    ref = sympy.gcd(to_sympy(a), to_sympy(b))
    assert sympy.simplify(to_sympy(g) / ref).is_number
