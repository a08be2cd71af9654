"""Text syntax for polynomials.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | "x" INT | "(" expr ")"

Variables are ``x1..xm``. ``/`` is only legal inside a rational literal.
"""
import re

from gmpy2 import mpq

from .errors import ParseError
from .polyfield import PolyScalar

_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, var, op = m.groups()
        col = m.start(m.lastindex)
        if num is not None:
            tokens.append(("num", int(num), col))
        elif var is not None:
            tokens.append(("var", int(var[1:]), col))
        elif op in "+-*^/()":
            tokens.append(("op", op, col))
        else:
            raise ParseError(f"unexpected character {op!r}", f"column {col + 1}")
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, num_vars):
        self.tokens = _tokenize(text)
        self.i = 0
        self.m = num_vars

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, f"column {tok[2] + 1}")

    def expect_op(self, op):
        tok = self.take()
        if tok[:2] != ("op", op):
            self.fail(f"expected {op!r}", tok)

    def expr(self):
        acc = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            acc = acc * self.unary()
        return acc

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            val = self.unary()
            return -val if tok[1] == "-" else val
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.fail("exponent must be a nonnegative integer", tok)
            base = base ** tok[1]
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            value = mpq(val)
            if self.peek()[:2] == ("op", "/"):
                self.take()
                den = self.take()
                if den[0] != "num":
                    self.fail("expected an integer denominator", den)
                if den[1] == 0:
                    self.fail("zero denominator", den)
                value = mpq(val, den[1])
            return PolyScalar.constant(value, self.m)
        if kind == "var":
            if not 1 <= val <= self.m:
                self.fail(f"variable x{val} outside x1..x{self.m}", tok)
            return PolyScalar.variable(val - 1, self.m)
        if tok[:2] == ("op", "("):
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected token {val!r}", tok)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty polynomial")
        result = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return result


def parse_polynomial(text, num_vars):
    """Parse ``text`` into a PolyScalar in ``num_vars`` variables."""
    if not isinstance(text, str):
        raise ParseError(f"polynomial must be a string, got {type(text).__name__}")
    return _Parser(text, num_vars).parse()


def parse_rational(text):
    """Parse ``"p/q"`` or ``"p"`` (optionally signed) into an mpq."""
    if isinstance(text, int) and not isinstance(text, bool):
        return mpq(text)
    if not isinstance(text, str) or not re.fullmatch(r"\s*[+-]?\d+(\s*/\s*\d+)?\s*", text):
        raise ParseError(f"not a rational literal: {text!r}")
    try:
        return mpq(text.replace(" ", ""))
    except ZeroDivisionError as exc:
        raise ParseError(f"zero denominator in {text!r}") from exc


def parse_point(text, dim=None):
    """Comma-separated rationals, e.g. ``"0,1/2,-3"``."""
    parts = [p for p in text.split(",")] if text.strip() else []
    point = [parse_rational(p) for p in parts]
    if dim is not None and len(point) != dim:
        raise ParseError(f"point has {len(point)} coordinates, expected {dim}")
    return point


def format_rational(value):
    value = mpq(value)
    return str(value)
