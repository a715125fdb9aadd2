"""Exact arithmetic in Q and in cyclotomic fields Q(zeta_N).

Elements of Q(zeta_N) are stored in the power basis 1, z, ..., z^(phi(N)-1)
reduced modulo the N-th cyclotomic polynomial, so equality is a plain
coefficient comparison.  Rationals are ``gmpy2.mpq``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq

from .errors import DivisionByZero

Rational = type(mpq())

_ZERO = mpq(0)
_ONE = mpq(1)


def to_rational(value) -> Rational:
    """Coerce int, Fraction, mpq or an ``"a/b"`` string to an mpq."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, FieldElement):
        return value.to_rational()
    raise TypeError(f"cannot convert {value!r} to a rational")


def parse_rational(text: str) -> Rational:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        den_i = int(den)
        if den_i == 0:
            raise DivisionByZero("zero denominator in rational literal")
        return mpq(int(num), den_i)
    return mpq(int(text))


def format_rational(q) -> str:
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def totient(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        poly = _int_exact_div(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _int_exact_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    assert not any(num), "cyclotomic division not exact"
    return quot


@lru_cache(maxsize=None)
def _trace_vector(n: int) -> tuple[int, ...]:
    # Tr(zeta_n^i) is the Ramanujan sum c_n(i)
    phi = totient(n)
    out = []
    for i in range(phi):
        g = math.gcd(n, i)
        m = n // g
        out.append(mobius(m) * phi // totient(m))
    return tuple(out)


def _reduce(vec: list, n: int) -> tuple:
    cyc = cyclotomic_polynomial(n)
    phi = len(cyc) - 1
    for i in range(len(vec) - 1, phi - 1, -1):
        c = vec[i]
        if c:
            base = i - phi
            for j in range(phi):
                if cyc[j]:
                    vec[base + j] -= c * cyc[j]
    if len(vec) < phi:
        vec = list(vec) + [_ZERO] * (phi - len(vec))
    return tuple(mpq(c) for c in vec[:phi])


@lru_cache(maxsize=None)
def _embedding(m: int, n: int) -> tuple[tuple, ...]:
    """Images of zeta_m^i (i < phi(m)) inside Q(zeta_n), for m | n."""
    step = n // m
    phi_n = totient(n)
    images = []
    for i in range(totient(m)):
        vec = [_ZERO] * max(phi_n, i * step + 1)
        vec[i * step] = _ONE
        images.append(_reduce(vec, n))
    return tuple(images)


class FieldElement:
    """An element of Q(zeta_N), immutable.

    ``FieldElement([c0, c1, ...], conductor=N)`` reduces the given power-basis
    coefficients modulo Phi_N.  Conductor 2 is folded into 1.
    """

    __slots__ = ("n", "c")

    def __init__(self, coeffs=(0,), conductor: int = 1):
        if isinstance(coeffs, (int, Rational, Fraction, str)):
            coeffs = (coeffs,)
        if conductor < 1:
            raise ValueError("conductor must be positive")
        vec = [to_rational(c) for c in coeffs] or [_ZERO]
        if conductor == 2:
            # zeta_2 = -1
            vec = [sum((c if i % 2 == 0 else -c for i, c in enumerate(vec)), _ZERO)]
            conductor = 1
        self.n = conductor
        self.c = _reduce(vec, conductor)

    @classmethod
    def _make(cls, n: int, c: tuple) -> "FieldElement":
        obj = object.__new__(cls)
        obj.n = n
        obj.c = c
        return obj

    @classmethod
    def rational(cls, value) -> "FieldElement":
        return cls._make(1, (to_rational(value),))

    # -- predicates ------------------------------------------------------
    def __bool__(self) -> bool:
        return any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_rational(self) -> Rational:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.c[0]

    @property
    def conductor(self) -> int:
        return self.n

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(c.numerator), int(c.denominator)) for c in self.c)

    # -- conductor handling ---------------------------------------------
    def embed(self, n: int) -> "FieldElement":
        """The same number viewed in Q(zeta_n); requires conductor | n."""
        if n == 2:
            n = 1
        if n == self.n:
            return self
        if n % self.n:
            raise ValueError(f"cannot embed conductor {self.n} into {n}")
        phi = totient(n)
        if len(self.c) == 1:
            return FieldElement._make(n, (self.c[0],) + (_ZERO,) * (phi - 1))
        out = [_ZERO] * phi
        for ci, img in zip(self.c, _embedding(self.n, n)):
            if ci:
                for j, v in enumerate(img):
                    if v:
                        out[j] += ci * v
        return FieldElement._make(n, tuple(out))

    def simplify(self) -> "FieldElement":
        """Drop to conductor 1 when the value is rational."""
        if self.n != 1 and self.is_rational():
            return FieldElement._make(1, (self.c[0],))
        return self

    def _pair(self, other):
        if not isinstance(other, FieldElement):
            q = to_rational(other)
            return self.n, self.c, None, q
        if other.n == self.n:
            return self.n, self.c, other.c, None
        if len(other.c) == 1:
            return self.n, self.c, None, other.c[0]
        if len(self.c) == 1:
            # scalar on the left: handled by callers through swapping
            return other.n, None, other.c, self.c[0]
        lcm = self.n * other.n // math.gcd(self.n, other.n)
        return lcm, self.embed(lcm).c, other.embed(lcm).c, None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            n, a, b, q = self._pair(other)
        except TypeError:
            return NotImplemented
        if q is not None:
            base = a if a is not None else b
            return FieldElement._make(n, (base[0] + q,) + base[1:])
        return FieldElement._make(n, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._make(self.n, tuple(-x for x in self.c))

    def __sub__(self, other):
        if isinstance(other, FieldElement):
            return self + (-other)
        try:
            return self + (-to_rational(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            n, a, b, q = self._pair(other)
        except TypeError:
            return NotImplemented
        if q is not None:
            base = a if a is not None else b
            return FieldElement._make(n, tuple(x * q for x in base))
        if n == 1:
            return FieldElement._make(1, (a[0] * b[0],))
        return FieldElement._make(n, _mul_vec(a, b, n))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self:
            raise DivisionByZero("inverse of zero field element")
        if len(self.c) == 1 or self.is_rational():
            return FieldElement._make(self.n, (1 / self.c[0],) + self.c[1:])
        return FieldElement._make(self.n, _inverse_vec(self.c, self.n))

    def __truediv__(self, other):
        if isinstance(other, FieldElement):
            return self * other.inverse()
        try:
            q = to_rational(other)
        except TypeError:
            return NotImplemented
        if not q:
            raise DivisionByZero("division by zero")
        return self * (1 / q)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = FieldElement._make(self.n, (_ONE,) + (_ZERO,) * (len(self.c) - 1))
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.n == self.n:
                return self.c == other.c
            if len(self.c) == 1 or len(other.c) == 1 or (self.is_rational() and other.is_rational()):
                return self.is_rational() and other.is_rational() and self.c[0] == other.c[0]
            lcm = self.n * other.n // math.gcd(self.n, other.n)
            return self.embed(lcm).c == other.embed(lcm).c
        try:
            q = to_rational(other)
        except TypeError:
            return NotImplemented
        return self.is_rational() and self.c[0] == q

    def __hash__(self):
        # normalized trace is independent of the ambient conductor
        if len(self.c) == 1 or self.is_rational():
            return hash(self.c[0])
        tv = _trace_vector(self.n)
        tr = sum((c * t for c, t in zip(self.c, tv)), _ZERO) / len(self.c)
        return hash(("cyc", tr))

    # -- text --------------------------------------------------------------
    def to_text(self) -> str:
        """Render as ``c0 + c1*z + c2*z^2``; ``z`` is zeta_N."""
        terms = []
        for i, c in enumerate(self.c):
            if not c:
                continue
            mag = format_rational(abs(c))
            if i == 0:
                body = mag
            else:
                zpart = "z" if i == 1 else f"z^{i}"
                body = zpart if mag == "1" else f"{mag}*{zpart}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    @classmethod
    def from_text(cls, text: str, conductor: int = 1) -> "FieldElement":
        src = text.replace(" ", "")
        if not src:
            raise ValueError("empty field element text")
        vec: dict[int, Rational] = {}
        for m in re.finditer(r"([+-]?)([^+-]+)", src):
            sign, body = m.group(1), m.group(2)
            if "z" in body:
                if "*" in body:
                    coef_s, zpart = body.split("*", 1)
                    coef = parse_rational(coef_s)
                else:
                    coef, zpart = _ONE, body
                power = int(zpart[2:]) if zpart.startswith("z^") else 1
                if zpart not in ("z",) and not zpart.startswith("z^"):
                    raise ValueError(f"bad term {body!r}")
            else:
                coef, power = parse_rational(body), 0
            if sign == "-":
                coef = -coef
            vec[power] = vec.get(power, _ZERO) + coef
        size = max(vec) + 1
        return cls([vec.get(i, _ZERO) for i in range(size)], conductor)

    def __str__(self):
        if self.is_rational():
            return format_rational(self.c[0])
        return self.to_text()

    def __repr__(self):
        if self.n == 1:
            return f"FieldElement({format_rational(self.c[0])!r})"
        return f"FieldElement.from_text({self.to_text()!r}, conductor={self.n})"

    def to_complex(self) -> complex:
        """Numerical value, for diagnostics only."""
        import cmath

        z = cmath.exp(2j * cmath.pi / self.n)
        return sum(float(c) * z**i for i, c in enumerate(self.c))


def _mul_vec(a: tuple, b: tuple, n: int) -> tuple:
    phi = len(a)
    prod = [_ZERO] * (2 * phi - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    return _reduce(prod, n)


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    num = list(num)
    dd = len(den) - 1
    inv_lc = 1 / den[-1]
    quot = [_ZERO] * max(len(num) - dd, 1)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] * inv_lc
        if c:
            quot[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    rem = num[:dd] if dd else []
    while rem and not rem[-1]:
        rem.pop()
    return quot, rem


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list, b: list) -> list:
    size = max(len(a), len(b))
    out = [(a[i] if i < len(a) else _ZERO) - (b[i] if i < len(b) else _ZERO) for i in range(size)]
    while out and not out[-1]:
        out.pop()
    return out


def _inverse_vec(a: tuple, n: int) -> tuple:
    # extended Euclid: find u with a*u = 1 mod Phi_n
    r0 = [mpq(c) for c in cyclotomic_polynomial(n)]
    r1 = list(a)
    while r1 and not r1[-1]:
        r1.pop()
    s0, s1 = [], [_ONE]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    inv_c = 1 / r1[0]
    vec = [c * inv_c for c in s1]
    return _reduce(vec, n)


def root_of_unity(n: int, j: int = 1) -> FieldElement:
    """zeta_n^(j mod n) as an element of Q(zeta_n)."""
    if n < 1:
        raise ValueError("order must be positive")
    j %= n
    if n <= 2:
        return FieldElement(-1 if j else 1)
    vec = [_ZERO] * max(totient(n), j + 1)
    vec[j] = _ONE
    return FieldElement._make(n, _reduce(vec, n))


ZERO = FieldElement(0)
ONE = FieldElement(1)


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out
