"""Multivariate polynomials and rational functions over ``FieldElement``.

Polynomials are stored sparsely (exponent vector -> coefficient).  GCDs go
through a recursive dense form and the subresultant PRS, so every
``RationalFunction`` is kept in lowest terms with a denominator whose
graded-lex leading coefficient is 1.
"""

from __future__ import annotations

import math
import re
from typing import Sequence

from .errors import DivisionByZero
from .field import ONE, ZERO, FieldElement, divisors, format_rational, to_rational, totient

# ---------------------------------------------------------------------------
# variable ordering


def var_key(name: str):
    m = re.fullmatch(r"p(\d+)", name)
    if name == "t":
        return (0, 0, name)
    if m:
        return (1, int(m.group(1)), name)
    return (2, 0, name)


def _as_fe(c) -> FieldElement:
    return c if isinstance(c, FieldElement) else FieldElement.rational(c)


class MultiPoly:
    """Sparse polynomial in an ordered tuple of variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms=None):
        self.vars = tuple(vars)
        clean = {}
        if terms:
            nv = len(self.vars)
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != nv:
                    raise ValueError("exponent vector length does not match variables")
                c = _as_fe(c)
                if c:
                    clean[exps] = c
        self.terms = clean

    @classmethod
    def _raw(cls, vars, terms):
        obj = object.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, vars, value) -> "MultiPoly":
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): value})

    @classmethod
    def variable(cls, vars, name) -> "MultiPoly":
        vars = tuple(vars)
        exps = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, {exps: ONE})

    @classmethod
    def from_univariate(cls, var: str, coeffs: Sequence) -> "MultiPoly":
        return cls((var,), {(i,): c for i, c in enumerate(coeffs)})

    # -- structure ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> FieldElement:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * len(self.vars), ZERO)

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def leading_term(self):
        """(exponents, coefficient) of the graded-lex leading term."""
        exps = max(self.terms, key=lambda e: (sum(e), e))
        return exps, self.terms[exps]

    def with_vars(self, vars: Sequence[str]) -> "MultiPoly":
        vars = tuple(vars)
        if vars == self.vars:
            return self
        idx = []
        for v in self.vars:
            if v not in vars:
                if self.degree(v) > 0:
                    raise ValueError(f"variable {v} missing from target variable list")
                idx.append(None)
            else:
                idx.append(vars.index(v))
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * len(vars)
            for e, j in zip(exps, idx):
                if j is not None:
                    new[j] = e
            terms[tuple(new)] = c
        return MultiPoly._raw(vars, terms)

    def univariate_coeffs(self) -> list[FieldElement]:
        if len(self.vars) != 1:
            raise ValueError("polynomial is not univariate")
        deg = self.degree()
        out = [ZERO] * (deg + 1)
        for (e,), c in self.terms.items():
            out[e] = c
        return out

    # -- arithmetic ---------------------------------------------------------
    def _unify(self, other):
        if isinstance(other, MultiPoly):
            if other.vars == self.vars:
                return self, other
            vars = tuple(sorted(set(self.vars) | set(other.vars), key=var_key))
            return self.with_vars(vars), other.with_vars(vars)
        return self, MultiPoly.constant(self.vars, other)

    def __add__(self, other):
        a, b = self._unify(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly._raw(a.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._unify(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = _as_fe(other)
            if not c:
                return MultiPoly._raw(self.vars, {})
            return MultiPoly._raw(self.vars, {e: v * c for e, v in self.terms.items()})
        a, b = self._unify(other)
        terms: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(e)
                terms[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._raw(a.vars, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(self.vars, ONE)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            a, b = self._unify(other)
            return a.terms == b.terms
        try:
            return self == MultiPoly.constant(self.vars, other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset((tuple(zip(self.vars, e)), c) for e, c in self.terms.items()))

    def derivative(self, var: str) -> "MultiPoly":
        if var not in self.vars:
            return MultiPoly._raw(self.vars, {})
        i = self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                terms[ne] = c * e[i]
        return MultiPoly._raw(self.vars, terms)

    def evaluate(self, values: dict):
        """Substitute values (anything supporting ring ops) for some variables."""
        result = None
        for e, c in self.terms.items():
            term = c
            rest = []
            for v, k in zip(self.vars, e):
                if v in values:
                    if k:
                        term = term * values[v] ** k
                else:
                    rest.append(k)
            if len(rest) < len(self.vars):
                remaining = tuple(v for v in self.vars if v not in values)
                if remaining:
                    term = MultiPoly(remaining, {tuple(rest): ONE}) * term
            result = term if result is None else result + term
        if result is None:
            remaining = tuple(v for v in self.vars if v not in values)
            return MultiPoly(remaining) if remaining else ZERO
        return result

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        a, b = self._unify(other)
        if not b:
            raise DivisionByZero("polynomial division by zero")
        nv = len(a.vars)
        q = _exquo(_to_dense(a.terms, nv), _to_dense(b.terms, nv), nv)
        return MultiPoly._raw(a.vars, _from_dense(q, nv))

    def gcd(self, other: "MultiPoly") -> "MultiPoly":
        a, b = self._unify(other)
        nv = len(a.vars)
        if nv == 0:
            return MultiPoly.constant((), ONE if (a or b) else ZERO)
        g = _gcd(_to_dense(a.terms, nv), _to_dense(b.terms, nv), nv)
        return MultiPoly._raw(a.vars, _from_dense(g, nv))

    def __str__(self):
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda e: (sum(e), e), reverse=True)
        out = ""
        for k, exps in enumerate(keys):
            c = self.terms[exps]
            mono = "*".join(
                (v if e == 1 else f"{v}^{e}") for v, e in zip(self.vars, exps) if e
            )
            if c.is_rational():
                r = c.to_rational()
                sign = "-" if r < 0 else "+"
                mag = format_rational(abs(r))
                if mono:
                    if "/" in mag:
                        mag = f"({mag})"
                    body = mono if mag == "1" else f"{mag}*{mono}"
                else:
                    body = mag
            else:
                sign = "+"
                body = f"({c.to_text()})" + (f"*{mono}" if mono else "")
            if k == 0:
                out = ("-" if sign == "-" else "") + body
            else:
                out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultiPoly({self.vars}, {str(self)!r})"


# ---------------------------------------------------------------------------
# recursive dense representation: level 0 is a FieldElement, level u >= 1 is
# a list (lowest degree first, no trailing zeros) of level u-1 objects.


def _to_dense(terms: dict, nv: int):
    if nv == 0:
        return terms.get((), ZERO)
    groups: dict = {}
    for e, c in terms.items():
        groups.setdefault(e[0], {})[e[1:]] = c
    if not groups:
        return []
    out = [None] * (max(groups) + 1)
    for i in range(len(out)):
        out[i] = _to_dense(groups.get(i, {}), nv - 1)
    return out


def _from_dense(f, nv: int, prefix=()) -> dict:
    if nv == 0:
        return {prefix: f} if f else {}
    out = {}
    for i, c in enumerate(f):
        out.update(_from_dense(c, nv - 1, prefix + (i,)))
    return out


def _is_zero(f, u):
    return (not f) if u else (not f)


def _zero(u):
    return [] if u else ZERO


def _one(u):
    return [_one(u - 1)] if u else ONE


def _strip(f):
    while f and _is_zero_any(f[-1]):
        f.pop()
    return f


def _is_zero_any(c):
    if isinstance(c, list):
        return not c
    return not c


def _add(f, g, u):
    if not u:
        return f + g
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        if i >= len(f):
            out.append(g[i])
        elif i >= len(g):
            out.append(f[i])
        else:
            out.append(_add(f[i], g[i], u - 1))
    return _strip(out)


def _neg(f, u):
    if not u:
        return -f
    return [_neg(c, u - 1) for c in f]


def _sub(f, g, u):
    return _add(f, _neg(g, u), u)


def _mul(f, g, u):
    if not u:
        return f * g
    if not f or not g:
        return []
    out = [_zero(u - 1)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if _is_zero_any(a):
            continue
        for j, b in enumerate(g):
            if _is_zero_any(b):
                continue
            out[i + j] = _add(out[i + j], _mul(a, b, u - 1), u - 1)
    return _strip(out)


def _mul_ground(f, c, u):
    """Multiply level-u f by a level-(u-1) coefficient c."""
    return _strip([_mul(a, c, u - 1) for a in f])


def _pow(f, k, u):
    result = _one(u)
    for _ in range(k):
        result = _mul(result, f, u)
    return result


def _shift(f, k, u):
    return [_zero(u - 1)] * k + f if f else []


def _exquo(f, g, u):
    """Exact quotient f/g at level u; raises if g does not divide f."""
    if not u:
        return f / g
    if not g:
        raise DivisionByZero("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    lc = g[-1]
    if len(r) - 1 < dg:
        if r:
            raise ValueError("inexact polynomial division")
        return []
    q = [_zero(u - 1)] * (len(r) - dg)
    while r and len(r) - 1 >= dg:
        k = len(r) - 1 - dg
        c = _exquo(r[-1], lc, u - 1)
        q[k] = c
        r = _sub(r, _shift(_mul_ground(g, c, u), k, u), u)
    if r:
        raise ValueError("inexact polynomial division")
    return _strip(q)


def _prem(f, g, u):
    """Pseudo-remainder of f by g at level u."""
    df, dg = len(f) - 1, len(g) - 1
    r = list(f)
    if df < dg:
        return r
    n = df - dg + 1
    lc = g[-1]
    while r and len(r) - 1 >= dg:
        j = len(r) - 1 - dg
        lr = r[-1]
        r = _sub(_mul_ground(r, lc, u), _shift(_mul_ground(g, lr, u), j, u), u)
        n -= 1
    return _mul_ground(r, _pow_ground(lc, n, u - 1), u) if n else r


def _pow_ground(c, k, u):
    if not u:
        return c**k
    return _pow(c, k, u)


def _ground_lc(f, u):
    while u:
        f = f[-1]
        u -= 1
    return f


def _scale_ground(f, c, u):
    """Multiply every ground coefficient by the field element c."""
    if not u:
        return f * c
    return [_scale_ground(a, c, u - 1) for a in f]


def _monic(f, u):
    if _is_zero_any(f):
        return f
    return _scale_ground(f, _ground_lc(f, u).inverse(), u)


def _content(f, u):
    """gcd of the level-(u-1) coefficients of f, normalized monic."""
    cont = _zero(u - 1)
    for c in f:
        cont = _gcd(cont, c, u - 1)
        if u - 1 == 0:
            if cont:
                return ONE
        elif len(cont) == 1 and (u - 1 == 1 or _degree_total_zero(cont, u - 1)):
            return _one(u - 1)
    return cont


def _degree_total_zero(f, u):
    while u:
        if len(f) != 1:
            return False
        f = f[0]
        u -= 1
    return True


def _primitive(f, u):
    cont = _content(f, u)
    if _is_zero_any(cont):
        return cont, f
    return cont, [_exquo(c, cont, u - 1) for c in f]


def _subresultant_last(f, g, u):
    """Last nonzero polynomial of the subresultant PRS of f, g (level u)."""
    if len(f) < len(g):
        f, g = g, f
    n, m = len(f) - 1, len(g) - 1
    if not g:
        return f
    d = n - m
    b = _pow_ground(_neg(_one(u - 1), u - 1), d + 1, u - 1)
    h = _mul_ground(_prem(f, g, u), b, u)
    lc = g[-1]
    c = _pow_ground(lc, d, u - 1)
    c = _neg(c, u - 1)
    last = g
    while h:
        k = len(h) - 1
        last = h
        f, g, m, d = g, h, k, m - k
        b = _mul(_neg(lc, u - 1), _pow_ground(c, d, u - 1), u - 1)
        h = _prem(f, g, u)
        h = _strip([_exquo(a, b, u - 1) for a in h])
        lc = g[-1]
        if d > 1:
            p = _pow_ground(_neg(lc, u - 1), d, u - 1)
            q = _pow_ground(c, d - 1, u - 1)
            c = _exquo(p, q, u - 1)
        else:
            c = _neg(lc, u - 1)
    return last


def _gcd(f, g, u):
    if not u:
        return ONE if (f or g) else ZERO
    if not f:
        return _monic(list(g), u)
    if not g:
        return _monic(list(f), u)
    if u == 1:
        a, b = list(f), list(g)
        while b:
            a, b = b, _urem(a, b)
        return _monic(a, 1)
    cf, pf = _primitive(f, u)
    cg, pg = _primitive(g, u)
    c = _gcd(cf, cg, u - 1)
    if len(pf) == 1 or len(pg) == 1:
        h = _one(u)
    else:
        h = _subresultant_last(pf, pg, u)
        _, h = _primitive(h, u)
    return _monic(_mul_ground(h, c, u), u)


def _urem(a, b):
    a = list(a)
    db = len(b) - 1
    inv = b[-1].inverse()
    while len(a) - 1 >= db and a:
        c = a[-1] * inv
        k = len(a) - 1 - db
        for j in range(db + 1):
            a[k + j] = a[k + j] - c * b[j]
        a.pop()
        _strip(a)
    return a


# ---------------------------------------------------------------------------


class RationalFunction:
    """num/den in lowest terms; den has graded-lex leading coefficient 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _canonical=False):
        if not isinstance(num, MultiPoly):
            vars = den.vars if isinstance(den, MultiPoly) else ()
            num = MultiPoly.constant(vars, num)
        if den is None:
            den = MultiPoly.constant(num.vars, ONE)
        elif not isinstance(den, MultiPoly):
            den = MultiPoly.constant(num.vars, den)
        num, den = num._unify(den)
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den

    @property
    def vars(self):
        return self.num.vars

    @classmethod
    def constant(cls, vars, value):
        return cls(MultiPoly.constant(vars, value))

    @classmethod
    def variable(cls, vars, name):
        return cls(MultiPoly.variable(vars, name))

    def with_vars(self, vars):
        return RationalFunction(self.num.with_vars(vars), self.den.with_vars(vars), _canonical=True)

    def rename(self, mapping: dict) -> "RationalFunction":
        """Substitute variable names, e.g. ``{"t": "p0"}``."""
        new = tuple(mapping.get(v, v) for v in self.vars)
        if len(set(new)) != len(new):
            raise ValueError("renaming would merge variables")
        num = MultiPoly._raw(new, dict(self.num.terms))
        den = MultiPoly._raw(new, dict(self.den.terms))
        order = tuple(sorted(new, key=var_key))
        if order == new:
            return RationalFunction(num, den, _canonical=True)
        return RationalFunction(num.with_vars(order), den.with_vars(order))

    def _unify(self, other):
        if not isinstance(other, RationalFunction):
            if isinstance(other, MultiPoly):
                other = RationalFunction(other)
            else:
                other = RationalFunction.constant(self.vars, other)
        if other.vars == self.vars:
            return self, other
        vars = tuple(sorted(set(self.vars) | set(other.vars), key=var_key))
        return self.with_vars(vars), other.with_vars(vars)

    def __bool__(self):
        return bool(self.num)

    def __add__(self, other):
        try:
            a, b = self._unify(other)
        except TypeError:
            return NotImplemented
        if a.den == b.den:
            return RationalFunction(a.num + b.num, a.den)
        g = a.den.gcd(b.den)
        da = a.den.exact_div(g)
        db = b.den.exact_div(g)
        return RationalFunction(a.num * db + b.num * da, da * b.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        try:
            a, b = self._unify(other)
        except TypeError:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            a, b = self._unify(other)
        except TypeError:
            return NotImplemented
        g1 = a.num.gcd(b.den)
        g2 = b.num.gcd(a.den)
        num = a.num.exact_div(g1) * b.num.exact_div(g2)
        den = a.den.exact_div(g2) * b.den.exact_div(g1)
        return RationalFunction(num, den, _canonical=False)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        try:
            a, b = self._unify(other)
        except TypeError:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num**k, self.den**k, _canonical=True)

    def __eq__(self, other):
        try:
            a, b = self._unify(other)
        except TypeError:
            return NotImplemented
        return a.num.terms == b.num.terms and a.den.terms == b.den.terms

    def __hash__(self):
        return hash((self.num, self.den))

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> FieldElement:
        return self.num.constant_value() / self.den.constant_value()

    def derivative(self, var: str) -> "RationalFunction":
        if var not in self.vars:
            raise ValueError(f"{var} is not a variable of this function")
        num = self.num.derivative(var) * self.den - self.num * self.den.derivative(var)
        return RationalFunction(num, self.den * self.den)

    def evaluate(self, values: dict):
        n = self.num.evaluate(values)
        d = self.den.evaluate(values)
        if isinstance(d, FieldElement) and not d:
            raise DivisionByZero("denominator vanishes at evaluation point")
        return n / d

    def __str__(self):
        if self.den.is_constant():
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1 or "/" in num:
            num = f"({num})"
        den = str(self.den)
        if not _single_factor(self.den):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalFunction({str(self)!r}, vars={self.vars})"

    # -- JSON ----------------------------------------------------------------
    def to_json(self) -> dict:
        cond = 1
        for c in list(self.num.terms.values()) + list(self.den.terms.values()):
            cond = cond * c.n // math.gcd(cond, c.n)

        def terms(p):
            keys = sorted(p.terms, key=lambda e: (sum(e), e), reverse=True)
            return [[list(e), p.terms[e].embed(cond).to_text()] for e in keys]

        out = {"vars": list(self.vars), "num": terms(self.num), "den": terms(self.den)}
        if cond != 1:
            out["conductor"] = cond
        return out

    @classmethod
    def from_json(cls, data: dict) -> "RationalFunction":
        cond = data.get("conductor", 1)
        vars = tuple(data["vars"])

        def poly(items):
            return MultiPoly(vars, {tuple(e): FieldElement.from_text(c, cond) for e, c in items})

        return cls(poly(data["num"]), poly(data["den"]), _canonical=True)


def _single_factor(p: MultiPoly) -> bool:
    """True for a bare power of one variable, e.g. ``t`` or ``p0^3``."""
    if len(p.terms) != 1:
        return False
    (exps, c), = p.terms.items()
    return c == ONE and sum(1 for e in exps if e) == 1


def _canonicalize(num: MultiPoly, den: MultiPoly):
    if not num:
        return num, MultiPoly.constant(num.vars, ONE)
    if den.is_constant():
        c = den.constant_value()
        return num * c.inverse(), MultiPoly.constant(num.vars, ONE)
    g = num.gcd(den)
    if not g.is_constant():
        num = num.exact_div(g)
        den = den.exact_div(g)
    _, lc = den.leading_term()
    if lc != ONE:
        inv = lc.inverse()
        num = num * inv
        den = den * inv
    return num, den


def rf_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def derivative(f: RationalFunction, var: str) -> RationalFunction:
    return f.derivative(var)


# ---------------------------------------------------------------------------
# root finding


def _rational_roots_int(coeffs: list) -> list:
    """Rational roots of a univariate polynomial with rational coefficients."""
    from gmpy2 import mpq

    qs = [to_rational(c) for c in coeffs]
    while qs and not qs[-1]:
        qs.pop()
    roots = []
    if len(qs) <= 1:
        return roots
    k = 0
    while not qs[k]:
        k += 1
    if k:
        roots.append(mpq(0))
    qs = qs[k:]
    if len(qs) == 1:
        return roots
    den = 1
    for q in qs:
        den = den * q.denominator // math.gcd(den, q.denominator)
    ints = [int(q * den) for q in qs]
    a0, an = abs(ints[0]), abs(ints[-1])
    for p in divisors(a0):
        for q in divisors(an):
            if math.gcd(p, q) != 1:
                continue
            for sgn in (1, -1):
                r = mpq(sgn * p, q)
                val = 0
                for c in reversed(ints):
                    val = val * r + c
                if val == 0:
                    roots.append(r)
    return roots


def _poly_quo_linear(coeffs: list, root: FieldElement):
    """Synthetic division by (t - root); returns (quotient, remainder)."""
    n = len(coeffs) - 1
    out = [ZERO] * n
    acc = ZERO
    for i in range(n, 0, -1):
        acc = acc * root + coeffs[i]
        out[i - 1] = acc
    rem = acc * root + coeffs[0]
    return out, rem


def _cyclotomic_candidates(coeffs: list, d: int) -> list:
    """Roots r*zeta_d (r rational, r != 0) of a rational polynomial."""
    from .field import _reduce

    phi = totient(d)
    # p(r zeta) = sum_i c_i r^i zeta^i; collect components as polys in r
    comp = [[to_rational(0)] * len(coeffs) for _ in range(phi)]
    for i, c in enumerate(coeffs):
        c = to_rational(c)
        if not c:
            continue
        vec = [to_rational(0)] * max(i + 1, phi)
        vec[i] = to_rational(1)
        img = _reduce(vec, d)
        for j, v in enumerate(img):
            if v:
                comp[j][i] += c * v
    polys = [MultiPoly.from_univariate("r", p) for p in comp]
    g = MultiPoly(("r",))
    for p in polys:
        g = g.gcd(p)
    if not g or g.degree() < 1:
        return []
    return [r for r in _rational_roots_int([c.to_rational() for c in g.univariate_coeffs()]) if r]


def rational_roots(p: MultiPoly, extension: int = 1):
    """Roots of a univariate polynomial in Q or of the form r*zeta_N^j.

    Returns ``(roots, remainder_degree)`` where ``roots`` is a list of
    ``(FieldElement, multiplicity)``.
    """
    from .field import root_of_unity

    coeffs = p.univariate_coeffs()
    if not any(coeffs):
        raise ValueError("zero polynomial has no finite root set")
    found = []
    work = list(coeffs)
    rat = all(c.is_rational() for c in coeffs)
    candidates = []
    if rat:
        candidates.extend(FieldElement.rational(r) for r in _rational_roots_int([c.to_rational() for c in coeffs]))
        for d in divisors(extension):
            if d <= 2:
                continue
            for r in _cyclotomic_candidates([c.to_rational() for c in coeffs], d):
                for j in range(1, d):
                    if math.gcd(j, d) == 1:
                        candidates.append(root_of_unity(d, j) * r)
    else:
        raise ValueError("root search requires rational coefficients")
    seen = []
    for root in candidates:
        if any(root == s for s in seen):
            continue
        seen.append(root)
        mult = 0
        while len(work) > 1:
            q, rem = _poly_quo_linear(work, root)
            if rem:
                break
            work = q
            mult += 1
        if mult:
            found.append((root, mult))
    return found, len(work) - 1
