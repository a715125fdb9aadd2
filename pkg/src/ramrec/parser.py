"""Parser for curve expressions such as ``t + 1/t`` or ``(1/3)*t^3``.

Precedence from tightest to loosest: ``^`` (right associative, constant
integer exponent), unary minus, ``* /``, ``+ -``.  Implicit multiplication
is not accepted.  Literals are integers or decimals and are read exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .field import FieldElement, to_rational
from .ratfun import RationalFunction

VARIABLE = "t"


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: object


_PUNCT = "+-*/^()"


def _tokenize(src: str):
    tokens = []
    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and src[i + 1].isdigit()):
            j = i
            while j < n and src[j].isdigit():
                j += 1
            if j < n and src[j] == ".":
                j += 1
                while j < n and src[j].isdigit():
                    j += 1
            tokens.append(("num", src[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("name", src[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i, ("number", VARIABLE, "(", "-"))
    tokens.append(("end", "", n))
    return tokens


_OPERAND_START = ("number", VARIABLE, "(", "-")


class _Parser:
    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"unexpected {_describe(tok)}", tok[2], (kind,))
        return self.take()

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0, _OPERAND_START)
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {_describe(tok)}", tok[2], ("+", "-", "*", "/", "^", "end of input"))
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            return Pow(base, self.exponent())
        return base

    def exponent(self):
        # the right operand of ^ may carry its own sign: t^-2, t^(-2)
        if self.peek()[0] == "-":
            self.take()
            return Neg(self.exponent())
        return self.power()

    def atom(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "num":
            self.take()
            return Num(Fraction(tok[1]))
        if kind == "name":
            if tok[1] != VARIABLE:
                raise ParseError(f"unknown variable {tok[1]!r}", tok[2], (VARIABLE,))
            self.take()
            return Var(tok[1])
        if kind == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {_describe(tok)}", tok[2], _OPERAND_START)


def _describe(tok) -> str:
    if tok[0] == "end":
        return "end of input"
    return f"token {tok[1]!r}"


def parse_expression(src: str):
    """Parse text into an expression tree."""
    return _Parser(src).parse()


def to_text(node) -> str:
    """Fully parenthesized text that parses back to the same tree."""
    if isinstance(node, Num):
        return _format_literal(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_text(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    if isinstance(node, Pow):
        return f"({to_text(node.base)}^{to_text(node.exponent)})"
    raise TypeError(f"not an expression node: {node!r}")


def _format_literal(value: Fraction) -> str:
    if value < 0:
        raise ValueError("literals are non-negative; use Neg for signs")
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise ValueError(f"{value} has no finite decimal literal")
    digits = max(twos, fives)
    scaled = value * 10**digits
    whole, frac = divmod(int(scaled), 10**digits)
    return f"{whole}.{str(frac).zfill(digits)}"


def _constant(node):
    """Exact value of a constant subtree, or None if it mentions t."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return None
    if isinstance(node, Neg):
        v = _constant(node.operand)
        return None if v is None else -v
    if isinstance(node, BinOp):
        a, b = _constant(node.left), _constant(node.right)
        if a is None or b is None:
            return None
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0:
            raise ParseError("division by zero in constant expression", 0, ())
        return a / b
    if isinstance(node, Pow):
        a, e = _constant(node.base), _constant(node.exponent)
        if a is None or e is None:
            return None
        if e.denominator != 1:
            raise ParseError("exponent must be an integer", 0, ())
        if a == 0 and e < 0:
            raise ParseError("division by zero in constant expression", 0, ())
        return a ** int(e)
    raise TypeError(f"not an expression node: {node!r}")


def lower(node) -> RationalFunction:
    """Lower an expression tree to a RationalFunction in t."""
    vars = (VARIABLE,)
    if isinstance(node, Num):
        return RationalFunction.constant(vars, FieldElement.rational(to_rational(node.value)))
    if isinstance(node, Var):
        return RationalFunction.variable(vars, node.name)
    if isinstance(node, Neg):
        return -lower(node.operand)
    if isinstance(node, BinOp):
        a, b = lower(node.left), lower(node.right)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if not b:
            raise ParseError("division by zero", 0, ())
        return a / b
    if isinstance(node, Pow):
        e = _constant(node.exponent)
        if e is None or e.denominator != 1:
            raise ParseError("exponent must be a constant integer", 0, ())
        base = lower(node.base)
        if not base and e < 0:
            raise ParseError("division by zero", 0, ())
        return base ** int(e)
    raise TypeError(f"not an expression node: {node!r}")


def parse_to_function(src: str) -> RationalFunction:
    return lower(parse_expression(src))
