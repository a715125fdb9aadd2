"""Truncated Laurent series in one local variable ``s``.

A series ``c_v s^v + ... + O(s^prec)`` stores its coefficients from ``s^v``
upwards together with the exclusive bound ``prec``; ``prec`` is ``inf`` for
exact (finite) expansions.  Every operation works out the exact bound to
which its result is known, and asking for a coefficient at or beyond that
bound raises ``TruncationUnderflow``.

Coefficients are ``FieldElement`` values in the hot paths; any ring whose
elements support ``+ - * /`` and mix with ``FieldElement`` (for instance
``RationalFunction``) also works.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import gmpy2
from gmpy2 import mpq, mpz

from .errors import DivisionByZeroSeries, TruncationUnderflow
from .field import ZERO, FieldElement, _reduce, format_rational, totient

INF = math.inf
_MPQ = type(mpq(0))
_MPZ = type(mpz(0))


def _is_zero(c) -> bool:
    return not c


class LaurentSeries:
    __slots__ = ("coeffs", "val", "prec")

    def __init__(self, coeffs: Sequence = (), val: int = 0, prec=INF):
        coeffs = [c if type(c) is FieldElement else _coerce(c) for c in coeffs]
        if prec != INF:
            coeffs = coeffs[: max(0, prec - val)]
        start = 0
        while start < len(coeffs) and _is_zero(coeffs[start]):
            start += 1
        if start:
            coeffs = coeffs[start:]
            val += start
        if prec == INF:
            while coeffs and _is_zero(coeffs[-1]):
                coeffs.pop()
        if not coeffs:
            val = prec if prec != INF else 0
        self.coeffs = coeffs
        self.val = val
        self.prec = prec

    @classmethod
    def _raw(cls, coeffs, val, prec):
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj.val = val
        obj.prec = prec
        return obj

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, prec=INF) -> "LaurentSeries":
        return cls((), 0 if prec == INF else prec, prec)

    @classmethod
    def constant(cls, c, prec=INF) -> "LaurentSeries":
        return cls([_coerce(c)], 0, prec)

    @classmethod
    def monomial(cls, c, e: int, prec=INF) -> "LaurentSeries":
        return cls([_coerce(c)], e, prec)

    @classmethod
    def variable(cls, prec=INF) -> "LaurentSeries":
        return cls.monomial(1, 1, prec)

    # -- structure -------------------------------------------------------------
    def is_zero(self) -> bool:
        """True when no nonzero coefficient is known."""
        return not self.coeffs

    def is_exact(self) -> bool:
        return self.prec == INF

    @property
    def valuation(self):
        if self.coeffs:
            return self.val
        return self.prec

    @property
    def truncation_order(self):
        """Highest exponent whose coefficient is known."""
        return self.prec - 1

    def leading_coefficient(self):
        if not self.coeffs:
            if self.prec == INF:
                raise DivisionByZeroSeries("zero series has no leading coefficient")
            raise TruncationUnderflow("no nonzero coefficient known below the truncation order")
        return self.coeffs[0]

    def coefficient(self, e: int):
        if e >= self.prec:
            raise TruncationUnderflow(f"coefficient of s^{e} unknown (series known below s^{self.prec})")
        i = e - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return ZERO

    def __getitem__(self, e: int):
        return self.coefficient(e)

    def truncate(self, prec) -> "LaurentSeries":
        if prec >= self.prec:
            return self
        return LaurentSeries(self.coeffs, self.val, prec)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by s^k."""
        return LaurentSeries._raw(self.coeffs, self.val + k, self.prec + k)

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equality of all coefficients known on both sides."""
        top = min(self.prec, other.prec)
        lo = min(self.valuation, other.valuation)
        if top == INF:
            return self == other
        return all(self.coefficient(e) == other.coefficient(e) for e in range(int(lo), int(top)))

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.prec == other.prec
            and self.coeffs == other.coeffs
            and (not self.coeffs or self.val == other.val)
        )

    __hash__ = None

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other):
        other = _as_series(other)
        prec = min(self.prec, other.prec)
        if not other.coeffs:
            return self.truncate(prec)
        if not self.coeffs:
            return other.truncate(prec)
        lo = min(self.val, other.val)
        hi = max(self.val + len(self.coeffs), other.val + len(other.coeffs))
        if prec != INF:
            hi = min(hi, prec)
        if hi <= lo:
            return LaurentSeries.zero(prec)
        out = [ZERO] * (hi - lo)
        for src in (self, other):
            off = src.val - lo
            for i, c in enumerate(src.coeffs):
                j = off + i
                if j >= len(out):
                    break
                out[j] = out[j] + c
        return LaurentSeries(out, lo, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries._raw([-c for c in self.coeffs], self.val, self.prec)

    def __sub__(self, other):
        return self + (-_as_series(other))

    def __rsub__(self, other):
        return _as_series(other) - self

    def scale(self, c) -> "LaurentSeries":
        if not c:
            return LaurentSeries.zero(self.prec)
        return LaurentSeries([x * c for x in self.coeffs], self.val, self.prec)

    def mul(self, other: "LaurentSeries", cap=INF) -> "LaurentSeries":
        """Product, computed only below the exclusive bound ``cap``."""
        a, b = self, other
        prec = min(a.prec + b.valuation, b.prec + a.valuation, cap)
        if not a.coeffs or not b.coeffs:
            return LaurentSeries.zero(prec)
        val = a.val + b.val
        n = len(a.coeffs) + len(b.coeffs) - 1
        if prec != INF:
            n = min(n, prec - val)
        if n <= 0:
            return LaurentSeries.zero(prec)
        return LaurentSeries(convolve(a.coeffs, b.coeffs, n), val, prec)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return self.mul(other)
        try:
            return self.scale(_coerce(other))
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def inverse(self, prec=None) -> "LaurentSeries":
        """Multiplicative inverse.

        For a truncated series the result is known to the same relative
        precision.  Exact series need an explicit exclusive bound ``prec``.
        """
        lead = self.leading_coefficient()
        v = self.val
        if self.prec == INF:
            if len(self.coeffs) == 1:
                return LaurentSeries([1 / lead], -v, INF if prec is None else prec)
            if prec is None:
                raise ValueError("inverse of a non-monomial exact series needs a truncation bound")
            rel = prec + v
        else:
            rel = self.prec - v
            if prec is not None:
                rel = min(rel, prec + v)
        if rel <= 0:
            return LaurentSeries.zero(-v + rel)
        return LaurentSeries(invert_coeffs(self.coeffs, rel), -v, -v + rel)

    def div(self, other: "LaurentSeries", prec=None) -> "LaurentSeries":
        other = _as_series(other)
        if not other.coeffs and other.prec == INF:
            raise DivisionByZeroSeries("division by the zero series")
        if self.prec == INF and other.prec == INF:
            if not self.coeffs:
                return LaurentSeries.zero()
            q = _exact_poly_div(self.coeffs, other.coeffs)
            if q is not None:
                return LaurentSeries(q, self.val - other.val, INF)
            if prec is None:
                raise ValueError("division of exact series needs a truncation bound")
            inv = other.inverse(prec - self.val)
            return self.mul(inv, prec)
        if other.prec == INF:
            target = self.prec - other.val
            inv = other.inverse(target - self.valuation if self.coeffs else target)
            return self.mul(inv, target if prec is None else min(prec, target))
        inv = other.inverse()
        out = self.mul(inv)
        return out if prec is None else out.truncate(prec)

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self.div(other)
        try:
            c = _coerce(other)
        except TypeError:
            return NotImplemented
        if not c:
            raise DivisionByZeroSeries("division of a series by zero")
        return self.scale(1 / c)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = LaurentSeries.constant(1)
        base = self
        while e:
            if e & 1:
                result = result.mul(base)
            e >>= 1
            if e:
                base = base.mul(base)
        return result

    def powers(self, count: int, cap=INF) -> list["LaurentSeries"]:
        """[self^0, ..., self^(count-1)], each computed below ``cap``."""
        out = [LaurentSeries.constant(1)]
        for _ in range(1, count):
            out.append(out[-1].mul(self, cap))
        return out

    # -- calculus --------------------------------------------------------------
    def derivative(self) -> "LaurentSeries":
        out = [c * (self.val + i) for i, c in enumerate(self.coeffs)]
        return LaurentSeries(out, self.val - 1, self.prec - 1)

    def integrate(self) -> "LaurentSeries":
        """Termwise antiderivative with zero constant term."""
        if self.val <= -1 and self.coefficient(-1):
            raise ValueError("series with a residue has no Laurent antiderivative")
        out = []
        for i, c in enumerate(self.coeffs):
            e = self.val + i
            out.append(ZERO if e == -1 else c / (e + 1))
        return LaurentSeries(out, self.val + 1, self.prec + 1)

    def residue(self):
        return self.coefficient(-1)

    def compose(self, inner: "LaurentSeries") -> "LaurentSeries":
        """self(inner(s)) for ``inner`` of positive valuation (Horner scheme)."""
        if not inner.coeffs:
            raise TruncationUnderflow("inner series has no known leading term")
        if inner.val < 1:
            raise ValueError("inner series must have positive valuation")
        if not self.coeffs:
            return LaurentSeries.zero(self.prec * inner.val if self.prec != INF else INF)
        v0 = self.val
        n_known = len(self.coeffs)
        if self.prec == INF:
            acc = LaurentSeries.zero()
        else:
            # coefficients past the stored ones are zero up to prec, so the
            # Horner tail is O(inner^(prec - v0 - n_known))
            acc = LaurentSeries.zero((self.prec - v0 - n_known) * inner.val)
        for i in range(n_known - 1, -1, -1):
            acc = acc.mul(inner) + LaurentSeries.constant(self.coeffs[i])
        if v0 > 0:
            acc = acc.mul(inner**v0)
        elif v0 < 0:
            acc = acc.mul(inner.inverse() ** (-v0))
        return acc

    # -- display ---------------------------------------------------------------
    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            e = self.val + i
            sign = ""
            if isinstance(c, FieldElement) and c.is_rational():
                q = c.to_rational()
                sign, q = ("-", -q) if q < 0 else ("", q)
                cs = format_rational(q)
                if "/" in cs:
                    cs = f"({cs})"
            else:
                cs = f"({c.to_text() if isinstance(c, FieldElement) else c})"
            mono = "" if e == 0 else ("s" if e == 1 else f"s^{e}")
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            parts.append((sign, body))
        if self.prec != INF:
            parts.append(("", f"O(s^{self.prec})"))
        if not parts:
            return "0"
        out = parts[0][0] + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign or '+'} {body}"
        return out

    def __repr__(self):
        return f"LaurentSeries({str(self)!r})"


def _coerce(c):
    if isinstance(c, (int, _MPQ, _MPZ, Fraction)):
        return FieldElement.rational(c)
    return c


def _as_series(x) -> LaurentSeries:
    if isinstance(x, LaurentSeries):
        return x
    return LaurentSeries.constant(_coerce(x))


def _exact_poly_div(a: list, b: list):
    """Quotient of coefficient lists when b divides a exactly, else None."""
    if len(b) > len(a):
        return None
    rem = list(a)
    inv = 1 / b[0]
    q = []
    for i in range(len(a) - len(b) + 1):
        c = rem[i] * inv
        q.append(c)
        if c:
            for j in range(1, len(b)):
                rem[i + j] = rem[i + j] - c * b[j]
    if any(rem[len(a) - len(b) + 1 :]):
        return None
    return q


# ---------------------------------------------------------------------------
# coefficient kernels


def _field_layout(*lists):
    """Common conductor of FieldElement lists, or None for other rings."""
    n = 1
    for lst in lists:
        for c in lst:
            if type(c) is not FieldElement:
                return None
            if c.n != 1 and c.n != n:
                n = n * c.n // math.gcd(n, c.n)
    return n


def _components(lst, n, phi):
    """Power-basis components of FieldElements viewed in Q(zeta_n)."""
    out = []
    for c in lst:
        if c.n == n:
            out.append(c.c)
        elif len(c.c) == 1:
            out.append((c.c[0],) + (mpq(0),) * (phi - 1))
        else:
            out.append(c.embed(n).c)
    return out


def convolve(a: list, b: list, n: int) -> list:
    """First n coefficients of the product of two coefficient lists."""
    cond = _field_layout(a, b)
    if cond is None:
        out = []
        la, lb = len(a), len(b)
        for k in range(n):
            acc = None
            for i in range(max(0, k - lb + 1), min(k + 1, la)):
                t = a[i] * b[k - i]
                acc = t if acc is None else acc + t
            out.append(ZERO if acc is None else acc)
        return out
    a = a[:n]
    b = b[:n]
    if cond == 1:
        qa = [c.c[0] for c in a]
        qb = [c.c[0] for c in b]
        prod = _qconv(qa, qb, n)
        make = FieldElement._make
        return [make(1, (v,)) for v in prod]
    phi = totient(cond)
    ca = _components(a, cond, phi)
    cb = _components(b, cond, phi)
    width = 2 * phi - 1
    fa = [mpq(0)] * (len(ca) * width)
    fb = [mpq(0)] * (len(cb) * width)
    for i, v in enumerate(ca):
        fa[i * width : i * width + phi] = v
    for i, v in enumerate(cb):
        fb[i * width : i * width + phi] = v
    flat = _qconv(fa, fb, n * width)
    make = FieldElement._make
    out = []
    for k in range(n):
        vec = flat[k * width : (k + 1) * width]
        if len(vec) < width:
            vec = vec + [mpq(0)] * (width - len(vec))
        out.append(make(cond, _reduce(vec, cond)))
    return out


_KRONECKER_MIN = 12


def _qconv(a: list, b: list, n: int) -> list:
    """Truncated product of rational coefficient lists."""
    la, lb = len(a), len(b)
    if min(la, lb) < _KRONECKER_MIN:
        out = []
        for k in range(n):
            acc = mpq(0)
            for i in range(max(0, k - lb + 1), min(k + 1, la)):
                ai = a[i]
                if ai:
                    acc += ai * b[k - i]
            out.append(acc)
        return out
    return _kronecker(a, b, n)


def _to_ints(vals):
    den = mpz(1)
    for v in vals:
        d = v.denominator
        if d != 1:
            den = gmpy2.lcm(den, d)
    ints = [v.numerator * (den // v.denominator) for v in vals]
    return ints, den


def _pack(ints, bits, lo, hi):
    if hi - lo == 1:
        return ints[lo]
    mid = (lo + hi) // 2
    return _pack(ints, bits, lo, mid) + (_pack(ints, bits, mid, hi) << (bits * (mid - lo)))


def _unpack(value, bits, count, out):
    if count == 1:
        out.append(value)
        return
    half = count // 2
    width = bits * half
    low = value & ((mpz(1) << width) - 1)
    if low >> (width - 1):
        low -= mpz(1) << width
    _unpack(low, bits, half, out)
    _unpack((value - low) >> width, bits, count - half, out)


def _kronecker(a, b, n):
    ia, da = _to_ints(a)
    ib, db = _to_ints(b)
    ma = max((abs(v) for v in ia), default=0)
    mb = max((abs(v) for v in ib), default=0)
    if not ma or not mb:
        return [mpq(0)] * n
    bits = int(gmpy2.bit_length(ma) + gmpy2.bit_length(mb)) + int(min(len(ia), len(ib))).bit_length() + 2
    pa = _pack([mpz(v) for v in ia], bits, 0, len(ia))
    pb = _pack([mpz(v) for v in ib], bits, 0, len(ib))
    prod = pa * pb
    total = len(ia) + len(ib) - 1
    vals: list = []
    _unpack(prod, bits, total, vals)
    den = da * db
    out = [mpq(v, den) for v in vals[:n]]
    if len(out) < n:
        out.extend([mpq(0)] * (n - len(out)))
    return out


def invert_coeffs(c: list, n: int) -> list:
    """First n coefficients of 1/(c0 + c1 s + ...), c0 != 0."""
    inv0 = 1 / c[0]
    out = [inv0]
    if type(inv0) is FieldElement and _field_layout(c) is not None:
        # Newton iteration doubles the number of correct terms per step
        k = 1
        while k < n:
            k2 = min(2 * k, n)
            e = convolve(c[:k2], out, k2)
            # out <- out * (2 - c*out)
            corr = [-x for x in e]
            corr[0] = corr[0] + 2
            out = convolve(out, corr, k2)
            k = k2
        return out
    for m in range(1, n):
        acc = None
        for i in range(1, min(m, len(c) - 1) + 1):
            t = c[i] * out[m - i]
            acc = t if acc is None else acc + t
        out.append(ZERO if acc is None else -(acc * inv0))
    return out


# ---------------------------------------------------------------------------


def compose(outer: LaurentSeries, inner: LaurentSeries) -> LaurentSeries:
    return outer.compose(inner)


def residue(a: LaurentSeries):
    return a.residue()


def integrate_termwise(a: LaurentSeries) -> LaurentSeries:
    if a.valuation < 0:
        raise ValueError("termwise integration expects a power series")
    return a.integrate()


def ls_arith(a: LaurentSeries, b: LaurentSeries, op: str, prec=None) -> LaurentSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a.mul(b)
    if op == "div":
        return a.div(b, prec)
    raise ValueError(f"unknown operation {op!r}")


def substitute_series(f, assignment: dict, prec=None) -> LaurentSeries:
    """Expand a RationalFunction with some variables replaced by series.

    Variables not in ``assignment`` stay symbolic inside RationalFunction
    coefficients.  ``prec`` bounds the result when all inputs are exact and
    the denominator is not a monomial.
    """
    from .ratfun import MultiPoly, RationalFunction

    rest = tuple(v for v in f.vars if v not in assignment)

    def expand(poly: MultiPoly) -> LaurentSeries:
        total = LaurentSeries.zero()
        cache: dict = {}
        for exps, c in poly.terms.items():
            term = LaurentSeries.constant(c)
            sym = {}
            for v, e in zip(poly.vars, exps):
                if not e:
                    continue
                if v in assignment:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = assignment[v] ** e
                    term = term.mul(cache[key])
                else:
                    sym[v] = e
            if sym and rest:
                mono = RationalFunction(MultiPoly(rest, {tuple(sym.get(v, 0) for v in rest): 1}))
                term = LaurentSeries([mono * x for x in term.coeffs], term.val, term.prec)
            total = total + term
        return total

    num = expand(f.num)
    den = expand(f.den)
    if not den.coeffs and den.prec == INF:
        raise DivisionByZeroSeries("denominator vanishes identically under the substitution")
    if den.prec == INF and num.prec == INF and len(den.coeffs) > 1:
        q = _exact_poly_div(num.coeffs, den.coeffs) if num.coeffs else []
        if q is not None:
            return LaurentSeries(q, num.val - den.val, INF)
        if prec is None:
            raise ValueError("expansion of an exact quotient needs a truncation bound")
        return num.mul(den.inverse(prec - num.valuation), prec)
    if den.prec == INF:
        return num.div(den, prec)
    out = num.mul(den.inverse())
    return out if prec is None else out.truncate(prec)
