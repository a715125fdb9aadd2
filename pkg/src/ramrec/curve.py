"""Genus-zero spectral curves: validation, ramification points, decks.

A curve is a pair of rational functions ``x(t), y(t)``.  Ramification
points are the zeros of ``dx`` (in the chart ``t`` and in the chart
``u = 1/t`` at infinity) where ``x`` stays finite.  Around each such point
``a`` of index ``k`` we expand everything in a local coordinate ``s``
(``t = a + s``, or ``t = 1/s`` at infinity) and compute the ``k - 1``
non-trivial deck transformations ``theta_j(s)`` with ``x(theta_j(s)) = x(s)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    CoincidentRamification,
    CurveError,
    DeckSolveFailure,
    NoRamification,
    UnsupportedAlgebraicLocus,
)
from .field import ONE, ZERO, FieldElement, lcm, root_of_unity, totient
from .ratfun import MultiPoly, RationalFunction, _cyclotomic_candidates, rational_roots
from .series import LaurentSeries

VAR = "t"


def default_truncation(g_max: int, n_max: int, k_max: int) -> int:
    """Truncation order used when none is configured."""
    return 6 * (2 * g_max + n_max) + 4 * k_max + 8


# ---------------------------------------------------------------------------
# univariate helpers (coefficient lists, lowest degree first)


def _coeffs(poly: MultiPoly) -> list:
    if not poly.vars:
        return [poly.constant_value()] if poly else [ZERO]
    if poly.vars != (VAR,):
        raise CurveError(f"curve functions must depend on {VAR} only, got {poly.vars}")
    if not poly:
        return [ZERO]
    return poly.univariate_coeffs()


def _as_t_function(f) -> RationalFunction:
    if isinstance(f, str):
        from .parser import parse_to_function

        f = parse_to_function(f)
    if not isinstance(f, RationalFunction):
        f = RationalFunction.constant((), f)
    extra = [v for v in f.vars if v != VAR]
    for v in extra:
        if f.num.degree(v) > 0 or f.den.degree(v) > 0:
            raise CurveError(f"curve functions must depend on {VAR} only, got variable {v}")
    return f.with_vars((VAR,))


def _taylor_shift(c: list, a) -> list:
    """Coefficients of P(a + s) from those of P(t)."""
    c = list(c)
    n = len(c)
    if not a:
        return c
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] = c[j] + a * c[j + 1]
    return c


def _strip(c: list) -> list:
    c = list(c)
    while len(c) > 1 and not c[-1]:
        c.pop()
    return c


def expand_at(f: RationalFunction, a: Optional[FieldElement], prec: int) -> LaurentSeries:
    """Laurent expansion of f at t = a + s (or t = 1/s when a is None)."""
    num = _strip(_coeffs(f.num))
    den = _strip(_coeffs(f.den))
    if a is None:
        shift = (len(den) - 1) - (len(num) - 1)
        ns = LaurentSeries(list(reversed(num)), 0)
        ds = LaurentSeries(list(reversed(den)), 0)
    else:
        shift = 0
        ns = LaurentSeries(_taylor_shift(num, a), 0)
        ds = LaurentSeries(_taylor_shift(den, a), 0)
    if not ns.coeffs:
        return LaurentSeries.zero(prec)
    out = ns.div(ds, prec - shift)
    return out.shift(shift) if shift else out


def pole_order(f: RationalFunction, a: Optional[FieldElement]) -> int:
    """Order of the pole of f at a (negative for a zero, 0 if finite nonzero)."""
    return -expand_at(f, a, _probe_prec(f)).valuation


def _probe_prec(f: RationalFunction) -> int:
    return len(_coeffs(f.num)) + len(_coeffs(f.den)) + 2


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RamPoint:
    """A ramification point of x with its local data.

    ``location`` is the coordinate ``a`` or ``None`` for ``t = infinity``.
    Series are in the local coordinate ``s``; ``decks[j-1]`` is
    ``theta_j(s)`` with leading coefficient ``zeta_k^j``.
    """

    location: Optional[FieldElement]
    index: int
    conductor: int
    order: int
    decks: tuple
    x_series: LaurentSeries
    y_series: LaurentSeries
    dx_series: LaurentSeries
    phi_series: LaurentSeries

    @property
    def is_infinite(self) -> bool:
        return self.location is None

    @property
    def label(self) -> str:
        if self.location is None:
            return "inf"
        return str(self.location)

    def deck(self, j: int) -> LaurentSeries:
        """theta_j for 0 <= j < k; theta_0 is the identity."""
        j %= self.index
        if j == 0:
            return LaurentSeries.variable(self.order + 1)
        return self.decks[j - 1]

    def to_dict(self) -> dict:
        return {
            "location": self.label,
            "index": self.index,
            "decks": [str(d) for d in self.decks],
            "phi": str(self.phi_series),
        }


@dataclass(frozen=True)
class SpectralCurve:
    """Pair (x, y) of rational functions of t, with a base point for dS."""

    x: RationalFunction
    y: RationalFunction
    base_point: Optional[FieldElement] = None
    truncation_order: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "x", _as_t_function(self.x))
        object.__setattr__(self, "y", _as_t_function(self.y))
        bp = self.base_point
        if bp is not None and not isinstance(bp, FieldElement):
            object.__setattr__(self, "base_point", FieldElement.rational(bp))
        if self.x.is_constant():
            raise CurveError("x is constant, so dx vanishes identically")
        if self.truncation_order is not None and self.truncation_order < 1:
            raise ValueError("truncation order must be positive")

    def swap(self) -> "SpectralCurve":
        return SpectralCurve(self.y, self.x, self.base_point, self.truncation_order)

    def with_base_point(self, base_point) -> "SpectralCurve":
        return SpectralCurve(self.x, self.y, base_point, self.truncation_order)

    def with_truncation(self, order: Optional[int]) -> "SpectralCurve":
        return SpectralCurve(self.x, self.y, self.base_point, order)

    def __str__(self):
        return f"x = {self.x}, y = {self.y}"


# ---------------------------------------------------------------------------
# ramification search


@dataclass
class RamificationSites:
    """Locations and indices of ramification points, plus excluded loci."""

    sites: list = field(default_factory=list)  # (location or None, k)
    excluded: list = field(default_factory=list)  # human-readable warnings


def _candidate_conductors(degree: int) -> list[int]:
    out = []
    for d in range(3, 4 * degree * degree + 8):
        if totient(d) <= degree:
            out.append(d)
    return out


def _find_roots(poly_coeffs: list) -> tuple[list, int]:
    """Roots (with multiplicity) in Q and among r*zeta_d; remainder degree."""
    from .field import cyclotomic_polynomial

    p = MultiPoly.from_univariate(VAR, poly_coeffs)
    if p.degree() < 1:
        return [], 0
    found, rem = rational_roots(p, 1)
    work = p
    for r, m in found:
        work = work.exact_div(MultiPoly.from_univariate(VAR, [-r, ONE]) ** m)
    for d in _candidate_conductors(rem) if rem else []:
        if work.degree() < totient(d):
            continue
        coeffs = [c.to_rational() for c in work.univariate_coeffs()]
        for r in _cyclotomic_candidates(coeffs, d):
            # minimal polynomial of r*zeta_d over Q: r^phi * Phi_d(t/r)
            cyc = cyclotomic_polynomial(d)
            phi = len(cyc) - 1
            minpoly = MultiPoly.from_univariate(VAR, [c * r ** (phi - i) for i, c in enumerate(cyc)])
            m = 0
            while work.degree() >= phi:
                try:
                    work = work.exact_div(minpoly)
                except ValueError:
                    break
                m += 1
            if m:
                for j in range(1, d):
                    if math.gcd(j, d) == 1:
                        found.append(((root_of_unity(d, j) * r).simplify(), m))
    return found, max(work.degree(), 0)


def locate_ramification(curve: SpectralCurve) -> RamificationSites:
    x = curve.x
    out = RamificationSites()
    num = x.num.with_vars((VAR,))
    den = x.den.with_vars((VAR,))
    # numerator of dx/dt
    dnum = num.derivative(VAR) * den - num * den.derivative(VAR)
    if not dnum:
        raise CurveError("dx vanishes identically")
    # drop factors sitting at poles of x
    work = dnum
    while True:
        g = work.gcd(den)
        if g.degree() < 1:
            break
        work = work.exact_div(g)
    if work.degree() >= 1:
        roots, rem = _find_roots(_coeffs(work))
        if rem:
            raise UnsupportedAlgebraicLocus(
                f"dx has {rem} zero(s) outside Q and rational multiples of roots of unity "
                f"(unresolved factor of degree {rem})"
            )
        for r, m in roots:
            out.sites.append((r, m + 1))
    # excluded finite poles of x that ramify as maps
    droots, _ = _find_roots(_coeffs(den)) if den.degree() >= 1 else ([], 0)
    for r, m in droots:
        if m >= 2:
            out.excluded.append(f"t = {r}: pole of x of order {m} (excluded)")
    # chart at infinity
    xs = expand_at(x, None, _probe_prec(x) + 4)
    v = xs.valuation
    if v < 0:
        if -v >= 2:
            out.excluded.append(f"t = inf: pole of x of order {-v} (excluded)")
    else:
        const = xs.coefficient(0)
        rest = xs - LaurentSeries.constant(const)
        k = rest.valuation
        if k >= 2:
            out.sites.append((None, k))
    out.sites.sort(key=lambda s: _site_key(s[0]))
    return out


def _site_key(loc):
    if loc is None:
        return (1, 0.0, 0.0)
    z = loc.to_complex()
    return (0, z.real, z.imag)


def _check_y(curve: SpectralCurve, loc, k: int):
    ys = expand_at(curve.y, loc, _probe_prec(curve.y) + 4)
    where = "t = inf" if loc is None else f"t = {loc}"
    if not ys.coeffs:
        raise CoincidentRamification(f"y vanishes identically near {where}")
    v = ys.valuation
    if v < -1:
        raise CoincidentRamification(f"y has a pole of order {-v} at the ramification point {where}")
    if v >= 0:
        c0 = ys.coefficient(0)
        rest = ys - LaurentSeries.constant(c0)
        if rest.valuation >= 2:
            raise CoincidentRamification(f"dx and dy vanish together at {where}")


# ---------------------------------------------------------------------------
# deck transformations


def _power_series_pow(h: list, alpha, n: int) -> list:
    """First n coefficients of h^alpha for h[0] = 1 (alpha rational)."""
    g = [ONE] + [ZERO] * (n - 1)
    for m in range(1, n):
        acc = ZERO
        for j in range(1, min(m, len(h) - 1) + 1):
            hj = h[j]
            if hj:
                acc = acc + hj * g[m - j] * ((alpha + 1) * j - m)
        g[m] = acc / m
    return g


def solve_decks(x_series: LaurentSeries, k: int, conductor: int, order: int) -> list:
    """theta_1..theta_{k-1} as series through s^order.

    Writes x(a+s) - x(a) = x_k s^k H(s) with H(0) = 1, sets
    phi = s H^(1/k) so that x(a+s) - x(a) = x_k phi^k, and returns
    theta_j = phi^{-1}(zeta^j phi).  Needs x_series known through s^(order+k-1).
    """
    from gmpy2 import mpq

    c0 = x_series.coefficient(0) if x_series.valuation <= 0 else ZERO
    rest = x_series - LaurentSeries.constant(c0)
    if rest.valuation != k:
        raise DeckSolveFailure(f"expected x - x(a) to vanish to order {k}, found {rest.valuation}")
    xk = rest.coefficient(k)
    n = order  # coefficients of phi: s^1 .. s^order
    if rest.prec - k < n:
        raise DeckSolveFailure("local expansion of x is too short for the requested order")
    h = [rest.coefficient(k + i) / xk for i in range(n)]
    hk = _power_series_pow(h, mpq(1, k), n)
    phi = LaurentSeries(hk, 1, n + 1)
    # powers of phi and the compositional inverse psi
    pw = [None, phi]
    for i in range(2, n + 1):
        pw.append(pw[-1].mul(phi, n + 1))
    psi = [ZERO, ONE]
    for m in range(2, n + 1):
        acc = ZERO
        for i in range(1, m):
            if psi[i]:
                acc = acc + psi[i] * pw[i].coefficient(m)
        psi.append(-acc)
    # residue classes of i mod k
    classes = [[ZERO] * (n + 1) for _ in range(k)]
    for i in range(1, n + 1):
        if not psi[i]:
            continue
        r = i % k
        ser = pw[i]
        for m in range(i, n + 1):
            c = ser.coefficient(m)
            if c:
                classes[r][m] = classes[r][m] + psi[i] * c
    decks = []
    for j in range(1, k):
        coeffs = [ZERO] * (n + 1)
        for r in range(k):
            z = root_of_unity(k, j * r).embed(conductor)
            row = classes[r]
            for m in range(1, n + 1):
                if row[m]:
                    coeffs[m] = coeffs[m] + z * row[m]
        theta = LaurentSeries(coeffs, 0, n + 1)
        lead = theta.coefficient(1)
        if lead != root_of_unity(k, j):
            raise DeckSolveFailure(f"deck {j} has leading coefficient {lead}")
        decks.append(theta)
    return decks


def _embed_series(s: LaurentSeries, n: int) -> LaurentSeries:
    return LaurentSeries._raw([c.embed(n) if c.n != n else c for c in s.coeffs], s.val, s.prec)


def build_ram_point(curve: SpectralCurve, loc, k: int, order: int) -> RamPoint:
    cond = lcm(k, 1 if loc is None else loc.conductor)
    if loc is not None:
        loc = loc.embed(cond) if cond != 1 else loc
    xs = expand_at(curve.x, loc, order + k + 1)
    ys = expand_at(curve.y, loc, order + 2)
    xs = _embed_series(xs, cond)
    ys = _embed_series(ys, cond)
    decks = solve_decks(xs, k, cond, order)
    dx = xs.derivative()
    integrand = ys.mul(dx)
    if integrand.valuation < 0:
        raise CurveError("y dx has a pole at a ramification point")
    phi = integrand.integrate()
    return RamPoint(
        location=None if loc is None else loc.simplify(),
        index=k,
        conductor=cond,
        order=order,
        decks=tuple(decks),
        x_series=xs,
        y_series=ys,
        dx_series=dx,
        phi_series=phi,
    )


def find_ramification(curve: SpectralCurve, order: Optional[int] = None) -> list[RamPoint]:
    """All admitted ramification points with deck and primitive series."""
    sites = locate_ramification(curve)
    if not sites.sites:
        raise NoRamification("x has no ramification point where x is finite")
    for loc, k in sites.sites:
        _check_y(curve, loc, k)
    if order is None:
        order = curve.truncation_order
    if order is None:
        order = default_truncation(2, 1, max(k for _, k in sites.sites))
    bp = curve.base_point
    if bp is not None:
        for loc, _ in sites.sites:
            if loc is not None and loc == bp:
                raise CurveError(f"base point {bp} is a ramification point")
    return [build_ram_point(curve, loc, k, order) for loc, k in sites.sites]


def excluded_loci(curve: SpectralCurve) -> list[str]:
    return locate_ramification(curve).excluded


def phi_local(curve: SpectralCurve, point: RamPoint) -> LaurentSeries:
    return point.phi_series


def swap(curve: SpectralCurve) -> SpectralCurve:
    return curve.swap()
