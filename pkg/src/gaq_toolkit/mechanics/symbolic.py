"""Exact expression core: symbol tables, canonical form, derivatives — pure math, no I/O.

Expressions are plain sympy objects over the Gaussian rationals. Square roots
such as |S|^(1/2) enter as auxiliary symbols ``s`` with a relation
``s^2 = R``; every canonical form has numerators of degree at most one in each
auxiliary and auxiliary-free denominators.
"""
from __future__ import annotations

import logging
import re
from collections.abc import Mapping
from dataclasses import dataclass, field

import sympy as sp

from gaq_toolkit.errors import SpecInputError, UndeclaredSymbolError, ZeroDenominatorError

logger = logging.getLogger(__name__)

Expr = sp.Expr
Relations = Mapping[sp.Symbol, sp.Expr]

RESERVED_NAMES = frozenset({"i", "I"})
_IMAGINARY_RE = re.compile(r"\bI\b")


def coordinate_symbol(name: str, noncommutative: bool = False) -> sp.Symbol:
    return sp.Symbol(name, commutative=not noncommutative)


def auxiliary_symbol(name: str) -> sp.Symbol:
    return sp.Symbol(name, nonzero=True)


@dataclass(frozen=True)
class Parameter:
    """A formal constant such as m, hbar or omega."""

    name: str
    positive: bool = False
    nonzero: bool = False

    @property
    def symbol(self) -> sp.Symbol:
        if self.positive:
            return sp.Symbol(self.name, positive=True)
        if self.nonzero:
            return sp.Symbol(self.name, nonzero=True)
        return sp.Symbol(self.name)


@dataclass(frozen=True)
class Auxiliary:
    """A named square root: ``name^2 = square``."""

    name: str
    square: sp.Expr

    @property
    def symbol(self) -> sp.Symbol:
        return auxiliary_symbol(self.name)


@dataclass(frozen=True)
class SymbolTable:
    coordinates: tuple[str, ...] = ()
    parameters: tuple[Parameter, ...] = ()
    auxiliaries: tuple[Auxiliary, ...] = ()
    noncommutative: bool = False
    _symbols: dict[str, sp.Symbol] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        names = list(self.coordinates) + [p.name for p in self.parameters] + [a.name for a in self.auxiliaries]
        seen: set[str] = set()
        for name in names:
            if name in RESERVED_NAMES:
                raise SpecInputError(f"'{name}' is reserved for the imaginary unit")
            if name in seen:
                raise SpecInputError(f"Duplicate symbol name: {name}")
            seen.add(name)
        for name in self.coordinates:
            self._symbols[name] = coordinate_symbol(name, self.noncommutative)
        for p in self.parameters:
            self._symbols[p.name] = p.symbol
        for a in self.auxiliaries:
            self._symbols[a.name] = a.symbol

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._symbols)

    def has(self, name: str) -> bool:
        return name in self._symbols

    def symbol(self, name: str) -> sp.Symbol:
        try:
            return self._symbols[name]
        except KeyError:
            raise UndeclaredSymbolError(name) from None

    def symbols(self, names: tuple[str, ...] | list[str]) -> tuple[sp.Symbol, ...]:
        return tuple(self.symbol(n) for n in names)

    @property
    def coordinate_symbols(self) -> tuple[sp.Symbol, ...]:
        return self.symbols(self.coordinates)

    @property
    def parameter_symbols(self) -> tuple[sp.Symbol, ...]:
        return tuple(p.symbol for p in self.parameters)

    @property
    def relations(self) -> dict[sp.Symbol, sp.Expr]:
        return {a.symbol: a.square for a in self.auxiliaries}

    def extend(
        self,
        coordinates: tuple[str, ...] = (),
        parameters: tuple[Parameter, ...] = (),
        auxiliaries: tuple[Auxiliary, ...] = (),
    ) -> SymbolTable:
        return SymbolTable(
            coordinates=self.coordinates + tuple(coordinates),
            parameters=self.parameters + tuple(parameters),
            auxiliaries=self.auxiliaries + tuple(auxiliaries),
            noncommutative=self.noncommutative,
        )

    def check_expr(self, e: sp.Expr) -> None:
        """Raise if ``e`` mentions a symbol this table does not declare."""
        declared = set(self._symbols.values())
        for sym in sp.sympify(e).free_symbols:
            if sym not in declared:
                raise UndeclaredSymbolError(str(sym))


def _reduce_powers(e: sp.Expr, relations: Relations) -> sp.Expr:
    expr = sp.expand(e)
    for s, square in relations.items():
        if not expr.has(s):
            continue
        poly = sp.Poly(expr, s)
        expr = sp.expand(sum(c * square ** (k // 2) * s ** (k % 2) for (k,), c in poly.terms()))
    return expr


def canonical(e: sp.Expr, relations: Relations | None = None) -> sp.Expr:
    """Canonical fraction: cancelled, auxiliary powers reduced, denominators rationalized."""
    expr = sp.cancel(sp.together(sp.sympify(e)))
    if not relations:
        return expr
    active = {s: sq for s, sq in relations.items() if expr.has(s)}
    if not active:
        return expr
    for _ in range(4):
        num, den = sp.fraction(expr)
        num = _reduce_powers(num, active)
        den = _reduce_powers(den, active)
        for s, square in active.items():
            if not den.has(s):
                continue
            poly = sp.Poly(den, s)
            a = poly.coeff_monomial(1)
            b = poly.coeff_monomial(s)
            num = _reduce_powers(num * (a - b * s), active)
            den = _reduce_powers(a**2 - b**2 * square, active)
        expr = sp.cancel(num / den)
        num, den = sp.fraction(expr)
        if not any(den.has(s) for s in active) and all(
            sp.degree(num, s) <= 1 for s in active if num.has(s)
        ):
            return expr
    logger.debug("canonical form did not settle for %s", expr)
    return expr


def is_zero(e: sp.Expr, relations: Relations | None = None) -> bool:
    return canonical(e, relations) == 0


def equal(a: sp.Expr, b: sp.Expr, relations: Relations | None = None) -> bool:
    return is_zero(sp.sympify(a) - sp.sympify(b), relations)


def derivative(e: sp.Expr, var: sp.Symbol, relations: Relations | None = None) -> sp.Expr:
    """Partial derivative, with the chain rule through auxiliary square roots."""
    e = sp.sympify(e)
    out = sp.diff(e, var)
    for s, square in (relations or {}).items():
        if s == var or not e.has(s):
            continue
        dsq = sp.diff(square, var)
        if dsq != 0:
            out += sp.diff(e, s) * dsq / (2 * s)
    return canonical(out, relations)


def diff(e: sp.Expr, var: str, table: SymbolTable) -> sp.Expr:
    return derivative(e, table.symbol(var), table.relations)


def substitute(
    e: sp.Expr,
    bindings: Mapping[str | sp.Symbol, sp.Expr],
    table: SymbolTable | None = None,
    relations: Relations | None = None,
) -> sp.Expr:
    """Simultaneous substitution followed by canonicalization."""
    if relations is None and table is not None:
        relations = table.relations
    mapping: dict[sp.Symbol, sp.Expr] = {}
    for key, value in bindings.items():
        if isinstance(key, str):
            if table is None:
                raise UndeclaredSymbolError(key)
            key = table.symbol(key)
        mapping[key] = sp.sympify(value)
    num, den = sp.fraction(canonical(e, relations))
    new_den = den.xreplace(mapping)
    if is_zero(new_den, relations):
        raise ZeroDenominatorError(f"Denominator {to_text(den)} vanishes after substitution")
    return canonical(num.xreplace(mapping) / new_den, relations)


def evaluate(e: sp.Expr, point: Mapping[str | sp.Symbol, sp.Expr], table: SymbolTable | None = None) -> sp.Expr:
    return substitute(e, point, table)


def is_polynomial_in(e: sp.Expr, symbols: tuple[sp.Symbol, ...]) -> bool:
    return sp.sympify(e).is_polynomial(*symbols)


def to_text(e: sp.Expr) -> str:
    """Print in the expression grammar: ``^`` for powers, ``i`` for the imaginary unit."""
    text = sp.sstr(sp.sympify(e), order="grlex")
    return _IMAGINARY_RE.sub("i", text.replace("**", "^"))
