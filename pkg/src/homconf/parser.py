"""Parser for polynomial expressions.

Grammar (whitespace insignificant, no implicit multiplication):

    expr     := ('+'|'-')? term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' uint)?
    base     := rational | variable | '(' expr ')'
    rational := uint ('/' uint)?
    variable := 'd' | 'l' | 'l1' .. 'l9'

A leading sign on the first term covers the signed-integer case of the
rational production.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .poly import VARS, MultiPoly

__all__ = ["PolyParseError", "parse_poly"]


class PolyParseError(ValueError):
    """Syntax or unknown-variable error, carrying the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([a-zA-Z][a-zA-Z0-9]*)|([-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise PolyParseError(f"unexpected character {stripped[0]!r}", pos)
        if m.group(1):
            tokens.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, allowed_vars: frozenset[str]):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.allowed = allowed_vars

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise PolyParseError("unexpected end of input", len(self.text))
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.next()
        if tok[0] != "op" or tok[1] != op:
            raise PolyParseError(f"expected {op!r}, got {tok[1]!r}", tok[2])

    def parse(self) -> MultiPoly:
        value = self.expr()
        tok = self.peek()
        if tok is not None:
            raise PolyParseError(f"unexpected token {tok[1]!r}", tok[2])
        return value

    def expr(self) -> MultiPoly:
        sign = 1
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.next()
            sign = -1 if tok[1] == "-" else 1
        value = self.term().scale(sign)
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.next()
                rhs = self.term()
                value = value + rhs if tok[1] == "+" else value - rhs
            else:
                return value

    def term(self) -> MultiPoly:
        value = self.factor()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] == "*":
                self.next()
                value = value * self.factor()
            else:
                return value

    def factor(self) -> MultiPoly:
        value = self.base()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.next()
            exp_tok = self.next()
            if exp_tok[0] != "num":
                raise PolyParseError("exponent must be an unsigned integer", exp_tok[2])
            value = value ** int(exp_tok[1])
        return value

    def base(self) -> MultiPoly:
        tok = self.next()
        kind, text, pos = tok
        if kind == "num":
            numerator = int(text)
            nxt = self.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "/":
                self.next()
                den_tok = self.next()
                if den_tok[0] != "num":
                    raise PolyParseError("denominator must be an unsigned integer", den_tok[2])
                return MultiPoly.const(Fraction(numerator, int(den_tok[1])))
            return MultiPoly.const(numerator)
        if kind == "name":
            if text not in self.allowed:
                raise PolyParseError(f"unknown variable {text!r}", pos)
            return MultiPoly.var(text)
        if kind == "op" and text == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        raise PolyParseError(f"unexpected token {text!r}", pos)


def parse_poly(text: str, allowed_vars: frozenset[str] | set[str] | None = None) -> MultiPoly:
    """Parse an expression into canonical form.

    ``allowed_vars`` restricts which variables may occur (defaults to the
    full universe); any other identifier raises :class:`PolyParseError`.
    """
    allowed = frozenset(allowed_vars) if allowed_vars is not None else frozenset(VARS)
    bad = allowed - set(VARS)
    if bad:
        raise ValueError(f"not in the variable universe: {sorted(bad)}")
    return _Parser(text, allowed).parse()
