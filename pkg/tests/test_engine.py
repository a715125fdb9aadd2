from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import in_p0
from ramrec import Engine, SpectralCurve
from ramrec.engine import (
    CONST,
    bernoulli_reference,
    check_decks,
    check_dilaton,
    check_fast_path,
    check_residueless,
    check_symmetry,
    check_truncation,
    check_w03_formula,
    kernel,
    symplectic_compare,
)
from ramrec.errors import TruncationUnderflow
from ramrec.field import FieldElement
from ramrec.series import LaurentSeries

FIRST = ("t + 1/t", "(1/3)*t^3")
MIXED = ("t + 1/t", "t^5 + t^4")
QUARTIC = ("(t-1)^4", "t^5")

S = sympy.Symbol("s")


def local_at(engine: Engine, label: str):
    return next(L for L in engine.local if L.point.label == label)


def frac(x) -> Fraction:
    return Fraction(str(x))


# -- W^0_2 and its local expansions -----------------------------------------


def test_w02_is_cauchy_kernel(engines):
    p0 = in_p0("t")
    p1 = p0.rename({"p0": "p1"})
    assert engines.get(*FIRST).w(0, 2) == 1 / (p0 - p1) ** 2


def test_w02_between_opposite_sheets(engines):
    L = local_at(engines.get(*FIRST), "1")
    q = L.qq(0, 1)
    assert q.valuation == -2
    assert q.coefficient(-2) == Fraction(1, 4)


def test_w02_against_a_symbol(engines):
    engine = engines.get("t^5 + t^4", "t + 1/t")
    L = local_at(engine, "0")
    out = L.qp(0, 0, 1, 6)
    # 1/(p - s)^2 = sum_m (m + 1) s^m / p^(m + 2)
    for m in range(6):
        assert out[((L.loc_index, m + 2),)] == LaurentSeries.monomial(m + 1, m, 6)


def test_omega_against_sympy(engines):
    L = local_at(engines.get(*FIRST), "1")
    omega = (L.Y[0] - L.Y[1]).mul(L.Xp)
    q = 1 + S
    ref = sympy.series((q**3 - q**-3) / 3 * (1 - 1 / q**2), S, 0, 8).removeO()
    assert omega.valuation == 2
    for e in range(2, 8):
        assert omega.coefficient(e) == FieldElement(frac(ref.coeff(S, e)))
    # the kernel series carries the factor theta'(s) / omega(s)
    kap = kernel(L, (1,))
    assert kap.mul(omega).agrees_with(L.dT[0].mul(L.dT[1]))


def test_index_three_kernel_uses_both_decks(engines):
    engine = engines.get(*FIRST, swap=True)
    L = local_at(engine, "0")
    assert L.k == 3
    assert set(L.kappa) == {(1,), (2,), (1, 2)}
    assert kernel(L, (1, 2)).valuation == kernel(L, (1,)).valuation + kernel(L, (2,)).valuation


# -- curly W -----------------------------------------------------------------


def test_curly_w_genus_one_two_slots(engines):
    engine = engines.get(*FIRST)
    L = local_at(engine, "1")
    out = engine.curly_w(L, (0, 1), 1, (), 0, 4)
    assert set(out) == {()}
    assert out[()].agrees_with(L.qq(0, 1).truncate(4))


def test_curly_w_genus_zero_three_slots_vanishes(engines):
    engine = engines.get(*FIRST, swap=True)
    L = local_at(engine, "0")
    out = engine.curly_w(L, (0, 1, 2), 0, (), 0, 6)
    assert all(not s.coeffs for s in out.values())


def test_fast_path_matches_general_recursion(engines):
    engine = engines.get(*FIRST)
    targets = [(0, 3), (1, 1), (1, 2), (2, 1), (0, 4)]
    assert check_fast_path(engine, targets).passed


# -- correlators ---------------------------------------------------------------


def test_first_example_correlators(engines):
    engine = engines.get(*FIRST)
    assert engine.w(1, 1) == in_p0("-t*(t^4 - 5*t^2 + 1)/(3*(t^2 - 1)^4)")
    p0, p1, p2 = (in_p0("t").rename({"p0": v}) for v in ("p0", "p1", "p2"))
    w03 = ((p0 - 1) ** -2 * (p1 - 1) ** -2 * (p2 - 1) ** -2 - (p0 + 1) ** -2 * (p1 + 1) ** -2 * (p2 + 1) ** -2) / 2
    assert engine.w(0, 3) == w03


def test_swapped_first_example_correlators(engines):
    engine = engines.get(*FIRST, swap=True)
    assert engine.w(1, 1) == in_p0("1/(3*t^3)")
    assert not engine.w(0, 3)


def test_mixed_index_w11(engines):
    engine = engines.get("t + 1/t", "t^5 + t^4")
    expected = in_p0("(1/864)*((-23*t^2 + 52*t - 23)/(t - 1)^4 + 27*(21*t^2 + 44*t + 21)/(t + 1)^4)")
    assert engine.w(1, 1) == expected


def test_partial_fraction_codes(engines):
    corr = engines.get(*FIRST, swap=True).get(1, 1)
    # 1/(3 p^3): one term, cube of the factor at the location t = 0
    assert len(corr.terms) == 1
    ((code,),) = corr.terms
    assert code != CONST and code[1] == 3


# -- free energies -----------------------------------------------------------


@pytest.mark.parametrize(
    "curve,swap,g,value",
    [
        (FIRST, False, 2, Fraction(-13, 72)),
        (FIRST, True, 3, Fraction(2741, 648)),
        (QUARTIC, False, 2, Fraction(-815863, 96000)),
        (QUARTIC, True, 2, Fraction(-815863, 96000)),
    ],
)
def test_free_energies(engines, curve, swap, g, value):
    assert engines.get(*curve, swap=swap).free_energy(g) == value


@pytest.mark.parametrize("g", [2, 3, 4])
def test_bernoulli_reference_against_sympy(g):
    expected = Fraction(str(sympy.bernoulli(2 * g))) / (2 * g * (2 * g - 2))
    assert Fraction(str(bernoulli_reference(g))) == expected


def test_bernoulli_reference_values():
    assert bernoulli_reference(2) == Fraction(-1, 240)
    assert bernoulli_reference(3) == Fraction(1, 1008)


def test_small_truncation_raises_instead_of_guessing():
    curve = SpectralCurve(*FIRST)
    seen_error = False
    for order in range(2, 30):
        try:
            value = Engine(curve, order=order).free_energy(3)
        except TruncationUnderflow:
            seen_error = True
            continue
        assert value == Fraction(2741, 648)
    assert seen_error


def test_point_order_does_not_matter():
    a = Engine(SpectralCurve(*MIXED), g_max=2, n_max=1)
    b = Engine(SpectralCurve(*MIXED), g_max=2, n_max=1)
    b.local.reverse()
    b.points.reverse()
    assert a.free_energy(2) == b.free_energy(2)
    assert a.get(1, 2).terms == b.get(1, 2).terms


REPARAMETRIZED = [
    (FIRST, ("1/t + t", "(1/3)*t^(-3)")),
    (FIRST, ("(t + 2) + 1/(t + 2)", "(1/3)*(t + 2)^3")),
    (("t^5 + t^4", "t + 1/t"), ("t^(-5) + t^(-4)", "1/t + t")),
    (QUARTIC, ("(1/t - 1)^4", "t^(-5)")),
    (("1/(1 + t^2)", "t/(t - 3)"), ("t^2/(1 + t^2)", "1/(1 - 3*t)")),
]


@pytest.mark.parametrize("original,moved", REPARAMETRIZED)
def test_free_energy_is_intrinsic(original, moved):
    # t -> 1/t or t -> t + c moves the ramification points (possibly to infinity)
    a = Engine(SpectralCurve(*original), g_max=2, n_max=1).free_energy(2)
    b = Engine(SpectralCurve(*moved), g_max=2, n_max=1).free_energy(2)
    assert a == b


@settings(max_examples=6, deadline=None)
@given(st.integers(-3, 3).filter(bool))
def test_free_energy_shift_invariance(c):
    x = f"(t + {c}) + 1/(t + {c})"
    y = f"(t + {c})^4 + 2*(t + {c})"
    base = Engine(SpectralCurve("t + 1/t", "t^4 + 2*t"), g_max=2, n_max=1).free_energy(2)
    assert Engine(SpectralCurve(x, y), g_max=2, n_max=1).free_energy(2) == base


# -- verification batteries ------------------------------------------------------


def test_symmetry_reports(engines):
    engine = engines.get(*FIRST)
    for g, n in [(0, 2), (0, 3), (1, 2)]:
        assert check_symmetry(engine, g, n).passed


@pytest.mark.parametrize("curve,swap,g,n", [(FIRST, False, 1, 1), (FIRST, False, 0, 3), (QUARTIC, False, 2, 1)])
def test_dilaton(engines, curve, swap, g, n):
    assert check_dilaton(engines.get(*curve, swap=swap), g, n).passed


@pytest.mark.parametrize("curve,swap", [(FIRST, False), (FIRST, True), (QUARTIC, False)])
def test_w03_direct_formula(engines, curve, swap):
    assert check_w03_formula(engines.get(*curve, swap=swap)).passed


@pytest.mark.parametrize(
    "curve,swap", [(FIRST, False), (("t + 1/t", "t^5 + t^4"), False), (("t + 1/t", "(1/5)*t^5"), True)]
)
def test_residueless_and_base_point(engines, curve, swap):
    report = check_residueless(engines.get(*curve, swap=swap), 2)
    assert report.passed
    assert set(report.details["residues"].values()) == {"0"}


def test_explicit_finite_base_point():
    a = Engine(SpectralCurve(*FIRST), g_max=2, n_max=1)
    b = Engine(SpectralCurve(*FIRST, base_point=FieldElement(Fraction(1, 2))), g_max=2, n_max=1)
    assert a.free_energy(2) == b.free_energy(2)
    assert a.w(1, 1) == b.w(1, 1)


def test_deck_and_truncation_checks(engines):
    engine = engines.get(*QUARTIC)
    assert check_decks(engine).passed
    assert check_truncation(engine, [(1, 1), (2, 0)]).passed


def test_symplectic_compare_reports_side_errors():
    report = symplectic_compare(SpectralCurve("t + 1/t", "t"), 2)
    assert not report.passed
    assert "swapped" in report.details["errors"]
    assert "no-ramification" in report.details["errors"]["swapped"]


def test_report_serialization(engines):
    data = check_w03_formula(engines.get(*FIRST)).to_dict()
    assert data["status"] == "pass"
    assert isinstance(data["seconds"], float)
