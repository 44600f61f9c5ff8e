"""Recursive-descent parser for the expression grammar — pure math, no I/O.

Grammar (see content/grammar.md)::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := ("+" | "-") unary | power
    power    := atom ("^" exponent)?
    exponent := INTEGER | "(" ("+" | "-")? INTEGER ")"
    atom     := INTEGER | "i" | NAME | "(" expr ")"
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import sympy as sp

from gaq_toolkit.errors import ExpressionSyntaxError, UndeclaredSymbolError
from gaq_toolkit.mechanics.symbolic import SymbolTable, canonical, is_zero

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\*\*|[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ExpressionSyntaxError(f"Unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup or "op"
        value = m.group(kind)
        start = m.start(kind)
        tokens.append(Token(kind, "^" if value == "**" else value, start))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, table: SymbolTable):
        self.text = text
        self.table = table
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def _expect(self, text: str) -> Token:
        tok = self.current
        if tok.text != text or tok.kind != "op":
            found = tok.text or "end of input"
            raise ExpressionSyntaxError(f"Expected '{text}' but found '{found}'", self.text, tok.position)
        return self._advance()

    def parse(self) -> sp.Expr:
        if self.current.kind == "end":
            raise ExpressionSyntaxError("Empty expression", self.text, 0)
        result = self._expr()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(f"Unexpected '{self.current.text}'", self.text, self.current.position)
        return result

    def _expr(self) -> sp.Expr:
        result = self._term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self._advance().text
            rhs = self._term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def _term(self) -> sp.Expr:
        result = self._unary()
        while self.current.kind == "op" and self.current.text in "*/":
            tok = self._advance()
            rhs = self._unary()
            if tok.text == "*":
                result = result * rhs
            else:
                if not self.table.noncommutative and is_zero(rhs, self.table.relations):
                    raise ExpressionSyntaxError("Division by an expression that is identically zero", self.text, tok.position)
                result = result / rhs
        return result

    def _unary(self) -> sp.Expr:
        if self.current.kind == "op" and self.current.text in "+-":
            op = self._advance().text
            operand = self._unary()
            return -operand if op == "-" else operand
        return self._power()

    def _power(self) -> sp.Expr:
        base = self._atom()
        if self.current.kind == "op" and self.current.text == "^":
            self._advance()
            exponent = self._exponent()
            if exponent < 0 and not self.table.noncommutative and is_zero(base, self.table.relations):
                raise ExpressionSyntaxError("Negative power of zero", self.text, self.current.position)
            return base**exponent
        return base

    def _exponent(self) -> int:
        tok = self.current
        if tok.kind == "num":
            return int(self._advance().text)
        if tok.kind == "op" and tok.text == "(":
            self._advance()
            sign = 1
            if self.current.kind == "op" and self.current.text in "+-":
                sign = -1 if self._advance().text == "-" else 1
            if self.current.kind != "num":
                raise ExpressionSyntaxError("Exponent must be an integer", self.text, self.current.position)
            value = sign * int(self._advance().text)
            self._expect(")")
            return value
        raise ExpressionSyntaxError("Exponent must be an integer", self.text, tok.position)

    def _atom(self) -> sp.Expr:
        tok = self.current
        if tok.kind == "num":
            self._advance()
            return sp.Integer(int(tok.text))
        if tok.kind == "name":
            self._advance()
            if tok.text == "i":
                return sp.I
            try:
                return self.table.symbol(tok.text)
            except UndeclaredSymbolError:
                raise UndeclaredSymbolError(tok.text, tok.position) from None
        if tok.kind == "op" and tok.text == "(":
            self._advance()
            inner = self._expr()
            self._expect(")")
            return inner
        found = tok.text or "end of input"
        raise ExpressionSyntaxError(f"Unexpected '{found}'", self.text, tok.position)


def parse_expr(text: str, table: SymbolTable) -> sp.Expr:
    """Parse ``text`` into a canonical expression over the symbols of ``table``."""
    result = _Parser(text, table).parse()
    if table.noncommutative:
        return sp.expand(result)
    return canonical(result, table.relations)
