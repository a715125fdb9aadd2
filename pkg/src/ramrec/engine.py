"""The recursion: curly-W sums, kernels, correlators and free energies.

Correlators ``W^g_n`` are stored in a canonical partial-fraction basis: a
map from monomials to coefficients, where a monomial assigns to every slot
``p_i`` one factor

* ``1/(p_i - b)^e`` for a finite location ``b`` (code ``(index of b, e)``),
* ``p_i^e`` for the polynomial part (code ``(index of infinity, e)``),
* ``1`` (code ``CONST``).

Every rational function whose poles sit at the listed locations has exactly
one such expansion, so equality and symmetry tests are exact comparisons of
dictionaries.  Conversion to a reduced ``RationalFunction`` happens only for
output.

Near a ramification point everything is expanded in the local coordinate
``s`` (``t = a + s``, or ``t = 1/s`` at infinity); the slot ``q_j`` of the
curly-W sum is ``T_j(s) = a + theta_j(s)``.  Series attached to slots are
"raw" (no ``dT_j/ds`` factor): the product of those factors over all slots
is folded into the kernel series ``kappa``.
"""

from __future__ import annotations

import itertools
import math
import time
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Optional

from .curve import RamPoint, SpectralCurve, default_truncation, find_ramification, locate_ramification
from .errors import (
    CurveError,
    DegenerateW02,
    EngineError,
    TruncationError,
    TruncationUnderflow,
    ZeroOmega,
)
from .field import ONE, ZERO, FieldElement, format_rational, to_rational
from .ratfun import MultiPoly, RationalFunction
from .series import INF, LaurentSeries

CONST = (-1, 0)


def _p(i: int) -> str:
    return f"p{i}"


# ---------------------------------------------------------------------------
# correlators


@dataclass
class Correlator:
    """W^g_n as a partial-fraction dictionary over the store's locations."""

    g: int
    n: int
    terms: dict
    locations: tuple
    _rf: Optional[RationalFunction] = field(default=None, repr=False, compare=False)

    def to_rational_function(self) -> RationalFunction:
        if self._rf is None:
            if self.g == 0 and self.n == 2 and self.terms is None:
                p0 = RationalFunction.variable(("p0", "p1"), "p0")
                p1 = RationalFunction.variable(("p0", "p1"), "p1")
                self._rf = 1 / (p0 - p1) ** 2
            else:
                self._rf = terms_to_rational_function(self.terms, self.n, self.locations)
        return self._rf

    @property
    def w(self) -> RationalFunction:
        return self.to_rational_function()

    def is_zero(self) -> bool:
        return not self.terms

    def residue_at(self, loc_index: int):
        """Residue of W^g_1 dp at a finite location."""
        if self.n != 1:
            raise ValueError("residues are defined here for one-point correlators")
        return self.terms.get(((loc_index, 1),), ZERO)


def terms_to_rational_function(terms: dict, n: int, locations: tuple) -> RationalFunction:
    vars = tuple(_p(i) for i in range(n))
    if not terms:
        return RationalFunction.constant(vars, 0)
    # highest pole order per slot and finite location
    top: list[dict] = [dict() for _ in range(n)]
    for mono in terms:
        for i, (b, e) in enumerate(mono):
            if b >= 0 and locations[b] is not None:
                if e > top[i].get(b, 0):
                    top[i][b] = e
    one = MultiPoly.constant(vars, ONE)
    lin_cache: dict = {}

    def lin(i, b):
        key = (i, b)
        if key not in lin_cache:
            lin_cache[key] = MultiPoly.variable(vars, _p(i)) - MultiPoly.constant(vars, locations[b])
        return lin_cache[key]

    factor_cache: dict = {}

    def factor(i, code):
        key = (i, code)
        if key in factor_cache:
            return factor_cache[key]
        b, e = code
        out = one
        for bb, ee in top[i].items():
            k = ee - e if bb == b else ee
            if k:
                out = out * lin(i, bb) ** k
        if b >= 0 and locations[b] is None and e:
            out = out * MultiPoly.variable(vars, _p(i)) ** e
        factor_cache[key] = out
        return out

    # Horner-style grouping over the first slot keeps products small
    num = MultiPoly(vars)
    groups: dict = {}
    for mono, c in terms.items():
        groups.setdefault(mono[0], []).append((mono[1:], c))
    for code0, items in groups.items():
        inner = MultiPoly(vars)
        for rest, c in items:
            term = MultiPoly.constant(vars, c)
            for i, code in enumerate(rest, start=1):
                term = term * factor(i, code)
            inner = inner + term
        num = num + inner * factor(0, code0)
    den = one
    for i in range(n):
        for b, e in top[i].items():
            den = den * lin(i, b) ** e
    return RationalFunction(num, den, _canonical=True)


# ---------------------------------------------------------------------------
# local data at one ramification point


def _psum_into(target: dict, key, ser: LaurentSeries):
    old = target.get(key)
    target[key] = ser if old is None else old + ser


class LocalData:
    """Expansions needed by the recursion at one ramification point."""

    def __init__(self, point: RamPoint, locations: tuple, loc_index: int, inf_index: int):
        self.point = point
        self.k = point.index
        self.a = point.location
        self.loc_index = loc_index
        self.inf_index = inf_index
        self.locations = locations
        self.infinite = point.location is None
        k = self.k
        self.theta = [point.deck(j) for j in range(k)]
        if self.infinite:
            self.dT = [-(th.derivative().div(th.mul(th))) for th in self.theta]
        else:
            self.dT = [th.derivative() for th in self.theta]
        self.Y = [point.y_series.compose(th) for th in self.theta]
        self.Xp = point.dx_series
        self.phi = point.phi_series
        self.kappa: dict = {}
        for r in range(1, k):
            for sub in itertools.combinations(range(1, k), r):
                self.kappa[sub] = self._kappa(sub)
        self._s_cache: dict = {}
        self._th_pow: dict = {}
        self._qq: dict = {}
        self._qprod: dict = {}
        self._fval: dict = {}

    def _kappa(self, sub: tuple) -> LaurentSeries:
        num = self.dT[0]
        for j in sub:
            num = num.mul(self.dT[j])
        den = None
        for j in sub:
            diff = self.Y[0] - self.Y[j]
            if not diff.coeffs:
                raise ZeroOmega(f"y(q) - y(theta_{j}(q)) vanishes to truncation order at {self.point.label}")
            omega = diff.mul(self.Xp)
            den = omega if den is None else den.mul(omega)
        return num.mul(den.inverse())

    # -- raw slot factors -------------------------------------------------------
    def theta_power(self, j: int, e: int) -> LaurentSeries:
        key = (j, e)
        s = self._th_pow.get(key)
        if s is None:
            if e == 0:
                s = LaurentSeries.constant(ONE)
            elif e == 1:
                s = self.theta[j]
            elif e == -1:
                s = self.theta[j].inverse()
            elif e > 0:
                s = self.theta_power(j, e - 1).mul(self.theta[j])
            else:
                s = self.theta_power(j, e + 1).mul(self.theta_power(j, -1))
            self._th_pow[key] = s
        return s

    def factor(self, j: int, code) -> LaurentSeries:
        """Raw value of the basis factor ``code`` at T_j(s)."""
        key = (j, code)
        s = self._s_cache.get(key)
        if s is not None:
            return s
        b, e = code
        if b < 0:
            s = LaurentSeries.constant(ONE)
        elif e > 1:
            s = self.factor(j, (b, e - 1)).mul(self.factor(j, (b, 1)))
        else:
            loc = self.locations[b]
            th = self.theta[j]
            if not self.infinite:
                if b == self.loc_index:
                    s = self.theta_power(j, -1)
                elif loc is None:
                    s = th + LaurentSeries.constant(self.a)
                else:
                    s = (th + LaurentSeries.constant(self.a - loc)).inverse()
            else:
                if loc is None:
                    s = self.theta_power(j, -1)
                else:
                    # 1/(1/theta - b) = theta / (1 - b theta)
                    s = th.mul((LaurentSeries.constant(ONE) - th.scale(loc)).inverse())
        self._s_cache[key] = s
        return s

    def fval(self, code) -> int:
        v = self._fval.get(code)
        if v is None:
            v = self.factor(0, code).valuation
            self._fval[code] = v
        return v

    def qq(self, i: int, j: int) -> LaurentSeries:
        """Raw W^0_2(T_i, T_j)."""
        if i == j:
            raise DegenerateW02("both arguments of W02 are the same series")
        key = (min(i, j), max(i, j))
        s = self._qq.get(key)
        if s is None:
            ti, tj = self.theta[key[0]], self.theta[key[1]]
            diff = ti - tj
            if not diff.coeffs:
                raise DegenerateW02("deck series coincide to truncation order")
            if not self.infinite:
                s = diff.mul(diff).inverse()
            else:
                prod = ti.mul(tj)
                s = prod.mul(prod).mul(diff.mul(diff).inverse())
            self._qq[key] = s
        return s

    def qp(self, j: int, pos: int, np_: int, cap) -> dict:
        """Raw W^0_2(T_j, p_pos) as a p-series, below ``cap``."""
        out = {}
        e = 0
        while True:
            if not self.infinite:
                ser = self.theta_power(j, e)
                code = (self.loc_index, e + 2)
            else:
                ser = self.theta_power(j, e + 2)
                code = CONST if e == 0 else (self.inf_index, e)
            if ser.valuation >= cap:
                break
            ser = ser.truncate(cap)
            if e:
                ser = ser.scale(FieldElement.rational(e + 1))
            key = [None] * np_
            key[pos] = code
            out[tuple(key)] = ser
            e += 1
        return out

    def qproduct(self, slots: tuple, codes: tuple, cap) -> LaurentSeries:
        """Product of raw factors codes[i] at T_{slots[i]}, below ``cap``."""
        key = (slots, codes)
        hit = self._qprod.get(key)
        if hit is not None and hit[0] >= cap:
            return hit[1].truncate(cap)
        vals = [self.fval(c) for c in codes]
        total_v = sum(vals)
        acc = None
        for idx, (j, c) in enumerate(zip(slots, codes)):
            f = self.factor(j, c)
            if acc is None:
                acc = f
            else:
                rest_v = total_v - sum(vals[: idx + 1])
                acc = acc.mul(f, cap - rest_v)
        acc = acc.truncate(cap)
        self._qprod[key] = (cap, acc)
        return acc


def _pmul(a: dict, b: dict, cap) -> dict:
    out: dict = {}
    for ka, sa in a.items():
        for kb, sb in b.items():
            key = tuple(x if x is not None else y for x, y in zip(ka, kb))
            prod = sa.mul(sb, cap)
            if prod.coeffs or prod.prec != INF:
                _psum_into(out, key, prod)
    return out


def _pval(p: dict):
    v = INF
    for s in p.values():
        if s.coeffs and s.val < v:
            v = s.val
    return v


# ---------------------------------------------------------------------------
# reports


@dataclass
class CheckReport:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "details": {k: (v if isinstance(v, (str, bool, int, list, dict)) else str(v)) for k, v in self.details.items()},
            "seconds": round(self.seconds, 3),
        }


# ---------------------------------------------------------------------------


class Engine:
    """Memoized correlators and free energies for one spectral curve."""

    def __init__(self, curve: SpectralCurve, g_max: int = 3, n_max: int = 3, order: Optional[int] = None):
        self.curve = curve
        sites = locate_ramification(curve)
        self.warnings = list(sites.excluded)
        points = find_ramification(curve, order=1)  # validation only
        k_max = max(p.index for p in points)
        if order is None:
            order = curve.truncation_order
        if order is None:
            order = default_truncation(g_max, n_max, k_max)
        self.order = order
        self.points = find_ramification(curve, order)
        locs = [p.location for p in self.points if p.location is not None]
        bp = curve.base_point
        if bp is not None and all(bp != l for l in locs):
            locs.append(bp)
        locs.append(None)
        self.locations = tuple(locs)
        self.inf_index = len(locs) - 1
        self.base_index = None
        if bp is not None:
            self.base_index = next(i for i, l in enumerate(locs) if l is not None and l == bp)
        self.local = [self._local(p) for p in self.points]
        self.memo: dict = {}
        self._block_cache: dict = {}
        self._cw_cache: dict = {}
        self._vlb_cache: dict = {}
        self._grouped: dict = {}
        self.fast_path = False

    def _loc_index(self, point: RamPoint) -> int:
        if point.location is None:
            return len(self.locations) - 1
        return next(i for i, l in enumerate(self.locations) if l is not None and l == point.location)

    def _local(self, point: RamPoint) -> LocalData:
        return LocalData(point, self.locations, self._loc_index(point), self.inf_index)

    @property
    def rational_input(self) -> bool:
        for f in (self.curve.x, self.curve.y):
            for c in list(f.num.terms.values()) + list(f.den.terms.values()):
                if not c.is_rational():
                    return False
        return True

    # -- store ---------------------------------------------------------------------
    def get(self, g: int, n: int) -> Correlator:
        if g < 0 or n < 1 or (g == 0 and n == 1):
            raise ValueError(f"W^{g}_{n} is not part of the recursion")
        if g == 0 and n == 2:
            return Correlator(0, 2, None, self.locations)
        key = (g, n)
        if key not in self.memo:
            terms = self._recursion(g, n - 1)
            self.memo[key] = Correlator(g, n, terms, self.locations)
        return self.memo[key]

    def w(self, g: int, n: int) -> RationalFunction:
        return self.get(g, n).to_rational_function()

    # -- curly W -------------------------------------------------------------------
    def _grouped_terms(self, g: int, m: int, c: int) -> dict:
        """W^g_m split into (codes of first c slots) -> (rest codes) -> coef."""
        key = (g, m, c)
        out = self._grouped.get(key)
        if out is None:
            out = {}
            for mono, coef in self.get(g, m).terms.items():
                out.setdefault(mono[:c], []).append((mono[c:], coef))
            self._grouped[key] = out
        return out

    def _block_vlb(self, L: LocalData, B: tuple, g: int, r: tuple) -> float:
        size = len(B) + len(r)
        if g == 0 and size == 2:
            if len(B) == 2:
                return L.qq(B[0], B[1]).valuation
            return 2 if L.infinite else 0
        key = (id(L), g, size, len(B))
        v = self._vlb_cache.get(key)
        if v is None:
            v = INF
            for codes in self._grouped_terms(g, size, len(B)):
                v = min(v, sum(L.fval(c) for c in codes))
            self._vlb_cache[key] = v
        return v

    def _block(self, L: LocalData, B: tuple, g: int, r: tuple, np_: int, cap) -> dict:
        key = (id(L), B, g, r, np_, cap)
        hit = self._block_cache.get(key)
        if hit is not None:
            return hit
        size = len(B) + len(r)
        if g == 0 and size == 2:
            if len(B) == 2:
                s = L.qq(B[0], B[1]).truncate(cap)
                out = {(None,) * np_: s}
            else:
                out = L.qp(B[0], r[0], np_, cap)
        else:
            out = {}
            c = len(B)
            for codes, items in self._grouped_terms(g, size, c).items():
                if sum(L.fval(x) for x in codes) >= cap:
                    continue
                q = L.qproduct(B, codes, cap)
                if not q.coeffs:
                    continue
                for rest, coef in items:
                    k = [None] * np_
                    for pos, code in zip(r, rest):
                        k[pos] = code
                    _psum_into(out, tuple(k), q.scale(coef))
        self._block_cache[key] = out
        return out

    def _choices(self, slots: tuple, w: int, P: tuple):
        """Blocks containing slots[0]: (B, genus, r, remaining slots, weight, remaining P)."""
        first, rest = slots[0], slots[1:]
        for size in range(len(rest) + 1):
            for extra in itertools.combinations(rest, size):
                B = (first,) + extra
                rem = tuple(s for s in rest if s not in extra)
                for g in range(0, w - (len(B) - 1) + 1):
                    weight = g + len(B) - 1
                    for rsize in range(len(P) + 1):
                        for r in itertools.combinations(P, rsize):
                            if g == 0 and len(B) + len(r) == 1:
                                continue
                            remP = tuple(p for p in P if p not in r)
                            yield B, g, r, rem, w - weight, remP

    def _cw_vlb(self, L: LocalData, slots: tuple, w: int, P: tuple) -> float:
        if not slots:
            return 0 if (w == 0 and not P) else INF
        key = ("v", id(L), slots, w, P)
        v = self._cw_cache.get(key)
        if v is None:
            v = INF
            for B, g, r, rem, w2, P2 in self._choices(slots, w, P):
                rv = self._cw_vlb(L, rem, w2, P2)
                if rv == INF:
                    continue
                v = min(v, self._block_vlb(L, B, g, r) + rv)
            self._cw_cache[key] = v
        return v

    def curly_w(self, L: LocalData, slots: tuple, g: int, P: tuple, np_: int, cap) -> dict:
        """Raw curly-W at the given slots as a p-series, below ``cap``."""
        if not slots:
            if g == 0 and not P:
                return {(None,) * np_: LaurentSeries.constant(ONE)}
            return {}
        key = ("w", id(L), slots, g, P, np_, cap)
        hit = self._cw_cache.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        for B, gb, r, rem, w2, P2 in self._choices(slots, g, P):
            rv = self._cw_vlb(L, rem, w2, P2)
            if rv == INF:
                continue
            bv = self._block_vlb(L, B, gb, r)
            if bv + rv >= cap:
                continue
            E = self._block(L, B, gb, r, np_, cap - rv)
            ev = _pval(E)
            if ev == INF:
                continue
            rest = self.curly_w(L, rem, w2, P2, np_, cap - ev)
            if not rest:
                continue
            for k2, s2 in _pmul(E, rest, cap).items():
                _psum_into(out, k2, s2)
        self._cw_cache[key] = out
        return out

    # -- recursion -----------------------------------------------------------------
    def _extract(self, L: LocalData, R: dict, out: dict):
        """Add Res_s of -dS(p0; T_0(s)) R(s) to the partial-fraction dict."""
        for key, ser in R.items():
            if ser.prec < 0:
                raise TruncationUnderflow(
                    f"series at {L.point.label} known only below s^{ser.prec}; raise the truncation order"
                )
            if not ser.coeffs:
                continue
            if not L.infinite:
                for m in range(0, -ser.val):
                    c = ser.coefficient(-1 - m)
                    if c:
                        _add_term(out, ((L.loc_index, m + 1),) + key, -c)
            else:
                for m in range(0, -1 - ser.val):
                    c = ser.coefficient(-2 - m)
                    if c:
                        code = CONST if m == 0 else (self.inf_index, m)
                        _add_term(out, (code,) + key, c)
            if self.base_index is not None:
                c = ser.coefficient(-1)
                if c:
                    _add_term(out, ((self.base_index, 1),) + key, c)

    def _recursion(self, g: int, np_: int) -> dict:
        if self.fast_path and all(L.k == 2 for L in self.local):
            return self._recursion_simple(g, np_)
        P = tuple(range(np_))
        out: dict = {}
        for L in self.local:
            R: dict = {}
            for sub, kap in L.kappa.items():
                slots = (0,) + sub
                cap = -kap.valuation
                cw = self.curly_w(L, slots, g, P, np_, cap)
                for key, ser in cw.items():
                    _psum_into(R, key, ser.mul(kap, 0))
            self._extract(L, R, out)
        return _finish(out)

    def _recursion_simple(self, g: int, np_: int) -> dict:
        """Recursion specialised to index-2 points (one deck, one kernel)."""
        P = tuple(range(np_))
        out: dict = {}
        for L in self.local:
            kap = L.kappa[(1,)]
            cap = -kap.valuation
            terms: dict = {}
            if g >= 1:
                for key, ser in self._block(L, (0, 1), g - 1, P, np_, cap).items():
                    _psum_into(terms, key, ser)
            for g1 in range(g + 1):
                g2 = g - g1
                for size in range(np_ + 1):
                    for I in itertools.combinations(P, size):
                        J = tuple(p for p in P if p not in I)
                        if (g1 == 0 and not I) or (g2 == 0 and not J):
                            continue
                        A = self._block(L, (0,), g1, I, np_, cap - self._block_vlb(L, (1,), g2, J))
                        Bv = _pval(A)
                        if Bv == INF:
                            continue
                        Bk = self._block(L, (1,), g2, J, np_, cap - Bv)
                        for key, ser in _pmul(A, Bk, cap).items():
                            _psum_into(terms, key, ser)
            R = {key: ser.mul(kap, 0) for key, ser in terms.items()}
            self._extract(L, R, out)
        return _finish(out)

    # -- evaluation helpers ----------------------------------------------------------
    def _first_slot_series(self, L: LocalData, corr: Correlator) -> dict:
        """W evaluated with its first slot at T_0(s) (times dT_0/ds), grouped by the rest."""
        out: dict = {}
        for mono, coef in corr.terms.items():
            ser = L.factor(0, mono[0]).scale(coef)
            _psum_into(out, mono[1:], ser)
        return {k: v.mul(L.dT[0]) for k, v in out.items()}

    def free_energy(self, g: int) -> FieldElement:
        if g < 2:
            raise ValueError("free energies are defined for g >= 2")
        key = ("F", g)
        if key not in self.memo:
            corr = self.get(g, 1)
            total = ZERO
            for L in self.local:
                series = self._first_slot_series(L, corr).get((), LaurentSeries.zero())
                total = total + series.mul(L.phi, 0).residue()
            value = (total / (2 * g - 2)).simplify()
            if self.rational_input and not value.is_rational():
                raise EngineError(f"F_{g} = {value.to_text()} is not rational for a rational curve")
            self.memo[key] = value
        return self.memo[key]

    def dilaton_rhs(self, g: int, n: int) -> dict:
        """(1/(2g-2+n)) sum_a Res Phi(q) W^g_{n+1}(q, p) as a partial-fraction dict."""
        corr = self.get(g, n + 1)
        out: dict = {}
        for L in self.local:
            for key, ser in self._first_slot_series(L, corr).items():
                c = ser.mul(L.phi, 0).residue()
                if c:
                    _add_term(out, key, c)
        scale = FieldElement.rational(1) / (2 * g - 2 + n)
        return _finish({k: v * scale for k, v in out.items()})

    def w03_direct(self) -> dict:
        """sum_a Res W02(q,p0) W02(q,p1) W02(q,p2) / (dx dy)."""
        out: dict = {}
        for L in self.local:
            dy = L.Y[0].derivative()
            rho = L.dT[0].mul(L.dT[0]).mul(L.dT[0]).mul(L.Xp.mul(dy).inverse())
            cap = -rho.valuation
            prod = L.qp(0, 0, 3, cap)
            prod = _pmul(prod, L.qp(0, 1, 3, cap), cap)
            prod = _pmul(prod, L.qp(0, 2, 3, cap), cap)
            for key, ser in prod.items():
                c = ser.mul(rho, 0).residue()
                if c:
                    _add_term(out, key, c)
        return _finish(out)

    def residues(self, g: int) -> dict:
        """Res_{p=a} W^g_1(p) dp at each ramification point (label -> value)."""
        corr = self.get(g, 1)
        out = {}
        finite_total = ZERO
        for i, loc in enumerate(self.locations):
            if loc is not None:
                finite_total = finite_total + corr.terms.get(((i, 1),), ZERO)
        for L in self.local:
            if L.infinite:
                out[L.point.label] = -finite_total
            else:
                out[L.point.label] = corr.terms.get(((L.loc_index, 1),), ZERO)
        return out


def _add_term(out: dict, key, c):
    old = out.get(key)
    out[key] = c if old is None else old + c


def _finish(terms: dict) -> dict:
    out = {}
    for k, c in terms.items():
        if c:
            out[k] = c.simplify()
    return out


# ---------------------------------------------------------------------------
# checks


def _permute(terms: dict, perm: tuple) -> dict:
    out = {}
    for mono, c in terms.items():
        out[tuple(mono[perm[i]] for i in range(len(mono)))] = c
    return out


def check_symmetry(engine: Engine, g: int, n: int) -> CheckReport:
    t0 = time.perf_counter()
    corr = engine.get(g, n)
    failures = []
    if corr.terms is not None:
        for i in range(n):
            for j in range(i + 1, n):
                perm = list(range(n))
                perm[i], perm[j] = perm[j], perm[i]
                if _permute(corr.terms, tuple(perm)) != corr.terms:
                    failures.append(f"p{i}<->p{j}")
    return CheckReport(
        f"symmetry W^{g}_{n}", not failures, {"failures": failures, "terms": 0 if corr.terms is None else len(corr.terms)},
        time.perf_counter() - t0,
    )


def check_dilaton(engine: Engine, g: int, n: int) -> CheckReport:
    t0 = time.perf_counter()
    lhs = engine.get(g, n).terms
    rhs = engine.dilaton_rhs(g, n)
    ok = lhs == rhs
    details = {"g": g, "n": n}
    if not ok:
        details["lhs"] = str(terms_to_rational_function(lhs, n, engine.locations))
        details["rhs"] = str(terms_to_rational_function(rhs, n, engine.locations))
    return CheckReport(f"dilaton W^{g}_{n}", ok, details, time.perf_counter() - t0)


def check_w03_formula(engine: Engine) -> CheckReport:
    t0 = time.perf_counter()
    rec = engine.get(0, 3).terms
    direct = engine.w03_direct()
    ok = rec == direct
    details = {"recursion": str(terms_to_rational_function(rec, 3, engine.locations))}
    if not ok:
        details["direct"] = str(terms_to_rational_function(direct, 3, engine.locations))
    return CheckReport("W03 direct formula", ok, details, time.perf_counter() - t0)


def _shifted_base_point(engine: Engine) -> FieldElement:
    used = [l for l in engine.locations if l is not None]
    c = 2
    while any(FieldElement.rational(c) == l for l in used):
        c += 1
    return FieldElement.rational(c)


def check_residueless(engine: Engine, g: int, base_point=None) -> CheckReport:
    t0 = time.perf_counter()
    res = engine.residues(g)
    ok = all(not v for v in res.values())
    details = {"residues": {k: str(v) for k, v in res.items()}}
    if g >= 2:
        f = engine.free_energy(g)
        bp = base_point if base_point is not None else _shifted_base_point(engine)
        other = Engine(engine.curve.with_base_point(bp), order=engine.order)
        f2 = other.free_energy(g)
        details["F"] = _fe_text(f)
        details["F_shifted_base"] = _fe_text(f2)
        details["base_point"] = str(bp)
        ok = ok and f == f2
    return CheckReport(f"residueless W^{g}_1", ok, details, time.perf_counter() - t0)


def check_truncation(engine: Engine, targets: list, extra: int = 8) -> CheckReport:
    """Recompute the given (g, n) correlators and F_g at order + extra."""
    t0 = time.perf_counter()
    other = Engine(engine.curve, order=engine.order + extra)
    mismatches = []
    for g, n in targets:
        if n == 0:
            if engine.free_energy(g) != other.free_energy(g):
                mismatches.append(f"F_{g}")
        elif engine.get(g, n).terms != other.get(g, n).terms:
            mismatches.append(f"W^{g}_{n}")
    return CheckReport(
        "truncation stability",
        not mismatches,
        {"order": engine.order, "recheck_order": engine.order + extra, "mismatches": mismatches},
        time.perf_counter() - t0,
    )


def verify_truncation(engine: Engine, targets: list, extra: int = 8):
    rep = check_truncation(engine, targets, extra)
    if not rep.passed:
        raise TruncationError(f"results changed at order {engine.order + extra}: {rep.details['mismatches']}")
    return rep


def _fe_text(v: FieldElement) -> str:
    if v.is_rational():
        return format_rational(v.to_rational())
    return v.to_text()


def symplectic_compare(curve: SpectralCurve, g_max: int, order: Optional[int] = None) -> CheckReport:
    """F_g of curve and of its swap for 2 <= g <= g_max."""
    t0 = time.perf_counter()
    sides = {}
    errors = {}
    for name, c in (("original", curve), ("swapped", curve.swap())):
        try:
            e = Engine(c, g_max=g_max, n_max=1, order=order)
            sides[name] = {g: e.free_energy(g) for g in range(2, g_max + 1)}
        except CurveError as exc:
            errors[name] = f"{exc.reason}: {exc}"
    rows = []
    all_equal = not errors
    if not errors:
        for g in range(2, g_max + 1):
            a, b = sides["original"][g], sides["swapped"][g]
            eq = a == b
            all_equal = all_equal and eq
            rows.append(
                {"g": g, "F": _fe_text(a), "F_swapped": _fe_text(b), "equal": eq, "difference": _fe_text(a - b)}
            )
    details = {"rows": rows, "equal": all_equal}
    if errors:
        details["errors"] = errors
    return CheckReport("symplectic comparison", all_equal, details, time.perf_counter() - t0)


def check_decks(engine: Engine) -> CheckReport:
    t0 = time.perf_counter()
    failures = []
    for p in engine.points:
        k = p.index
        for j in range(1, k):
            th = p.deck(j)
            if not p.x_series.compose(th).agrees_with(p.x_series):
                failures.append(f"x∘theta_{j} != x at {p.label}")
            for m in range(1, k):
                comp = p.deck(m).compose(th)
                target = p.deck((m + j) % k)
                if not comp.agrees_with(target):
                    failures.append(f"theta_{m}∘theta_{j} at {p.label}")
    return CheckReport("deck transformations", not failures, {"failures": failures}, time.perf_counter() - t0)


def check_fast_path(engine: Engine, targets: list) -> CheckReport:
    t0 = time.perf_counter()
    other = Engine(engine.curve, order=engine.order)
    other.fast_path = True
    mismatches = [f"W^{g}_{n}" for g, n in targets if other.get(g, n).terms != engine.get(g, n).terms]
    return CheckReport("index-2 fast path", not mismatches, {"mismatches": mismatches}, time.perf_counter() - t0)


def run_checks(curve: SpectralCurve, which: set, g_max: int, verify_truncation: bool = False) -> list:
    engine = Engine(curve, g_max=g_max, n_max=3)
    reports = []
    for g in range(2, g_max + 1):
        engine.free_energy(g)
    engine.get(0, 3)
    engine.get(1, 1)
    engine.get(1, 2)
    if "dilaton" in which:
        engine.get(0, 4)
    if "symmetry" in which:
        for (g, n) in sorted(k for k in engine.memo if k[0] != "F"):
            reports.append(check_symmetry(engine, g, n))
    if "dilaton" in which:
        for (g, n) in sorted(k for k in engine.memo if k[0] != "F"):
            if (g, n + 1) in engine.memo and 2 * g - 2 + n > 0:
                reports.append(check_dilaton(engine, g, n))
    if "w03" in which:
        reports.append(check_w03_formula(engine))
    if "residue" in which:
        for g in range(1, g_max + 1):
            reports.append(check_residueless(engine, g))
    if "decks" in which:
        reports.append(check_decks(engine))
    if "fast" in which and all(p.index == 2 for p in engine.points):
        targets = sorted(k for k in engine.memo if k[0] != "F")
        reports.append(check_fast_path(engine, targets))
    if verify_truncation:
        targets = sorted(k for k in engine.memo if k[0] != "F") + [(g, 0) for g in range(2, g_max + 1)]
        reports.append(check_truncation(engine, targets))
    return reports


def bernoulli_numbers(m: int) -> list:
    """B_0..B_m with B_1 = -1/2, from the standard recurrence."""
    B = [Fraction(1)]
    for k in range(1, m + 1):
        acc = Fraction(0)
        for j in range(k):
            acc += math.comb(k + 1, j) * B[j]
        B.append(-acc / (k + 1))
    return B


def bernoulli_reference(g: int):
    """B_{2g} / (2g (2g - 2))."""
    if g < 2:
        raise ValueError("g must be at least 2")
    B = bernoulli_numbers(2 * g)
    return to_rational(B[2 * g] / (2 * g * (2 * g - 2)))


def kernel(L: LocalData, sub: tuple) -> LaurentSeries:
    """Kernel series kappa for the deck subset ``sub`` at one point."""
    return L.kappa[tuple(sub)]
