"""Exact spans, ranks and kernels over expressions with parameters — pure math, no I/O.

Parameters are treated as generic: an entry counts as zero only when it
cancels to zero identically.
"""
from __future__ import annotations

from collections.abc import Sequence

import sympy as sp

Vector = tuple[sp.Expr, ...]


def _iszero(x: sp.Expr) -> bool:
    return sp.cancel(sp.together(sp.expand(x))) == 0


def _simplify(x: sp.Expr) -> sp.Expr:
    return sp.cancel(sp.together(x))


def matrix(vectors: Sequence[Sequence[sp.Expr]], width: int | None = None) -> sp.Matrix:
    if not vectors:
        return sp.zeros(0, width or 0)
    return sp.Matrix([list(v) for v in vectors])


def rank(vectors: Sequence[Sequence[sp.Expr]]) -> int:
    if not vectors:
        return 0
    return matrix(vectors).rank(iszerofunc=_iszero, simplify=_simplify)


def span_basis(vectors: Sequence[Sequence[sp.Expr]]) -> list[Vector]:
    """Reduced row-echelon basis; equal spans give equal bases."""
    if not vectors:
        return []
    reduced, pivots = matrix(vectors).rref(iszerofunc=_iszero, simplify=_simplify)
    return [tuple(_simplify(x) for x in reduced.row(i)) for i in range(len(pivots))]


def span_key(vectors: Sequence[Sequence[sp.Expr]]) -> tuple[Vector, ...]:
    return tuple(span_basis(vectors))


def in_span(basis: Sequence[Sequence[sp.Expr]], v: Sequence[sp.Expr]) -> bool:
    if all(_iszero(x) for x in v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [v]) == rank(basis)


def coordinates_in(basis: Sequence[Sequence[sp.Expr]], v: Sequence[sp.Expr]) -> Vector | None:
    """Coefficients c with Σ c_k basis_k = v, or None."""
    unknowns = sp.symbols(f"c0:{len(basis)}", cls=sp.Dummy)
    equations = [
        sp.expand(sum((c * b[i] for c, b in zip(unknowns, basis)), sp.S.Zero) - v[i]) for i in range(len(v))
    ]
    solutions = sp.linsolve(equations, unknowns)
    if not solutions:
        return None
    sol = next(iter(solutions))
    return tuple(_simplify(x.subs({u: 0 for u in unknowns})) for x in sol)


def nullspace(rows: Sequence[Sequence[sp.Expr]], width: int) -> list[Vector]:
    if not rows:
        return [tuple(sp.S.One if i == k else sp.S.Zero for i in range(width)) for k in range(width)]
    return [
        tuple(_simplify(x) for x in v)
        for v in matrix(rows).nullspace(iszerofunc=_iszero, simplify=_simplify)
    ]


def is_zero_vector(v: Sequence[sp.Expr]) -> bool:
    return all(_iszero(x) for x in v)


def has_imaginary(vectors: Sequence[Sequence[sp.Expr]]) -> bool:
    return any(sp.sympify(x).has(sp.I) for v in vectors for x in v)
