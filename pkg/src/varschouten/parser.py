"""Expression parser for jet-space differential polynomials.

Grammar, in words: an expression is a signed sum of terms; a term is a
product of factors joined by `*` (juxtaposition is rejected so derivative
suffixes like `b_x1x2` stay unambiguous); a factor is a rational literal,
a variable token, a bound name, or a parenthesized expression, optionally
raised to a nonnegative integer power with `^`.

Variable tokens:
    x           the base variable (n = 1), or x1..xn for n > 1
    q, q2       fiber coordinates; the bare alias is only valid when m = 1
    b, b2       odd covector coordinates, same fiber convention
    p1, p1.2    covector slot variables, slot first, then .fiber when m > 1
    _xx, _x1x2  derivative suffix on any jet token

Powers on jet variables are accepted (q_x^2 means q_x*q_x); an odd square
canonicalizes to zero rather than erroring.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple

from .algebra import (
    BKIND,
    PKIND,
    QKIND,
    DiffPolynomial,
    Geometry,
    JetVariable,
    midx,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class Token(NamedTuple):
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>\d+(?:/\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_.]*)"
    r"|(?P<op>[-+*^()])"
)

_JET_RE = re.compile(r"([qb])([0-9]*)(?:_([A-Za-z0-9]*))?$")
_SLOT_RE = re.compile(r"p([0-9]+)(?:\.([0-9]+))?(?:_([A-Za-z0-9]*))?$")
_BASE_RE = re.compile(r"x([0-9]+)$")

_KINDS = {"q": QKIND, "b": BKIND}


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - text.rfind("\n", 0, pos)
    return line, col


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            line, col = _line_col(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


def _parse_suffix(suffix: str, g: Geometry) -> tuple[int, ...] | None:
    """Derivative letters to a dim sequence; None when malformed."""
    if g.n == 1:
        if suffix and set(suffix) == {"x"}:
            return (1,) * len(suffix)
        return None
    if not re.fullmatch(r"(?:x[0-9]+)+", suffix):
        return None
    dims = tuple(int(d) for d in re.findall(r"x([0-9]+)", suffix))
    for d in dims:
        if not 1 <= d <= g.n:
            return None
    return dims


class _ExprParser:
    def __init__(self, text: str, geometry: Geometry, names=None):
        self.text = text
        self.g = geometry
        self.names = names or {}
        self.tokens = tokenize(text)
        self.i = 0

    def _err(self, message: str, pos: int | None = None):
        if pos is None:
            pos = self.tokens[self.i].pos
        line, col = _line_col(self.text, pos)
        raise ParseError(message, line, col)

    def _peek(self) -> Token:
        return self.tokens[self.i]

    def _take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> DiffPolynomial:
        value = self._expr()
        tok = self._peek()
        if tok.kind != "end":
            self._err(f"unexpected {tok.text!r} after expression")
        return value

    def _expr(self) -> DiffPolynomial:
        sign = 1
        if self._peek().kind == "op" and self._peek().text in "+-":
            if self._take().text == "-":
                sign = -1
        value = self._term()
        if sign < 0:
            value = -value
        while self._peek().kind == "op" and self._peek().text in "+-":
            op = self._take().text
            term = self._term()
            value = value + term if op == "+" else value - term
        return value

    def _term(self) -> DiffPolynomial:
        value = self._power()
        while self._peek().kind == "op" and self._peek().text == "*":
            self._take()
            value = value * self._power()
        # adjacent factors without an operator read as juxtaposition
        nxt = self._peek()
        if nxt.kind in ("num", "name") or (nxt.kind == "op" and nxt.text == "("):
            self._err("missing operator before this factor (use explicit '*')")
        return value

    def _power(self) -> DiffPolynomial:
        value = self._atom()
        if self._peek().kind == "op" and self._peek().text == "^":
            self._take()
            tok = self._peek()
            if tok.kind != "num" or "/" in tok.text:
                self._err("exponent must be a nonnegative integer")
            self._take()
            exp = int(tok.text)
            result = DiffPolynomial.const(self.g, 1)
            for _ in range(exp):
                result = result * value
            return result
        return value

    def _atom(self) -> DiffPolynomial:
        tok = self._peek()
        if tok.kind == "num":
            self._take()
            try:
                value = Fraction(tok.text)
            except ZeroDivisionError:
                self._err("zero denominator in rational literal", tok.pos)
            return DiffPolynomial.const(self.g, value)
        if tok.kind == "name":
            self._take()
            return self._variable(tok)
        if tok.kind == "op" and tok.text == "(":
            self._take()
            value = self._expr()
            closer = self._peek()
            if closer.kind != "op" or closer.text != ")":
                self._err("expected ')'", closer.pos)
            self._take()
            return value
        if tok.kind == "end":
            self._err("unexpected end of input")
        self._err(f"unexpected {tok.text!r}")

    def _variable(self, tok: Token) -> DiffPolynomial:
        name, g = tok.text, self.g
        if name in self.names:
            bound = self.names[name]
            if bound.geometry != g:
                self._err(f"name {name!r} was bound over a different geometry", tok.pos)
            return bound

        if name == "x":
            if g.n != 1:
                self._err("bare 'x' needs n = 1; use x1..x{n}".format(n=g.n), tok.pos)
            return DiffPolynomial.base(g, 1)
        m = _BASE_RE.match(name)
        if m and g.n > 1:
            dim = int(m.group(1))
            if not 1 <= dim <= g.n:
                self._err(f"base index {dim} out of range 1..{g.n}", tok.pos)
            return DiffPolynomial.base(g, dim)

        m = _JET_RE.match(name)
        if m:
            letter, fiber_s, suffix = m.groups()
            fiber = self._fiber(fiber_s, tok)
            dims = self._dims(suffix, tok)
            return DiffPolynomial.variable(
                g, JetVariable(_KINDS[letter], fiber, _to_index(dims))
            )
        m = _SLOT_RE.match(name)
        if m:
            slot_s, fiber_s, suffix = m.groups()
            slot = int(slot_s)
            if not 1 <= slot <= g.s:
                self._err(f"covector slot {slot} out of range 1..{g.s}", tok.pos)
            if fiber_s is None and g.m > 1:
                self._err(f"p{slot} needs a fiber with m = {g.m}: p{slot}.<fiber>", tok.pos)
            fiber = int(fiber_s) if fiber_s is not None else 1
            if not 1 <= fiber <= g.m:
                self._err(f"fiber index {fiber} out of range 1..{g.m}", tok.pos)
            dims = self._dims(suffix, tok)
            return DiffPolynomial.variable(
                g, JetVariable(PKIND, fiber, _to_index(dims), slot)
            )
        self._err(f"unknown name {name!r}", tok.pos)

    def _fiber(self, fiber_s: str, tok: Token) -> int:
        g = self.g
        if not fiber_s:
            if g.m != 1:
                self._err(f"fiber index required when m = {g.m}", tok.pos)
            return 1
        fiber = int(fiber_s)
        if not 1 <= fiber <= g.m:
            self._err(f"fiber index {fiber} out of range 1..{g.m}", tok.pos)
        return fiber

    def _dims(self, suffix: str | None, tok: Token) -> tuple[int, ...]:
        if suffix is None:
            return ()
        dims = _parse_suffix(suffix, self.g)
        if dims is None:
            expected = "'x' letters" if self.g.n == 1 else "pairs like x1x1x2"
            self._err(f"bad derivative suffix {suffix!r}; expected {expected}", tok.pos)
        return dims


def _to_index(dims: tuple[int, ...]):
    return midx(*dims)


def parse_polynomial(
    text: str, geometry: Geometry, names: dict[str, DiffPolynomial] | None = None
) -> DiffPolynomial:
    return _ExprParser(text, geometry, names).parse()
