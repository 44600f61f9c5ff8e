"""Group laws in named coordinates — pure math, no I/O."""
from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from functools import cached_property

import sympy as sp

from gaq_toolkit.errors import NonClosureError, VerificationError
from gaq_toolkit.mechanics.symbolic import (
    Auxiliary,
    SymbolTable,
    auxiliary_symbol,
    canonical,
    coordinate_symbol,
    is_zero,
    substitute,
    to_text,
)

logger = logging.getLogger(__name__)

DEFAULT_JET_ORDER = 6


@dataclass(frozen=True)
class GroupPoint:
    """Coordinate values plus auxiliary values, and the relations their symbols obey."""

    coords: tuple[sp.Expr, ...]
    aux: tuple[sp.Expr, ...] = ()
    relations: tuple[tuple[sp.Symbol, sp.Expr], ...] = ()

    @property
    def relation_map(self) -> dict[sp.Symbol, sp.Expr]:
        return dict(self.relations)


def _merge_relations(*points: GroupPoint) -> dict[sp.Symbol, sp.Expr]:
    merged: dict[sp.Symbol, sp.Expr] = {}
    for p in points:
        merged.update(p.relations)
    return merged


@dataclass(frozen=True)
class GroupLaw:
    """g'' = g' * g, one composition expression per coordinate.

    Composition expressions use primed symbols (``name + prime_suffix``) for
    the left factor and plain symbols for the right factor.
    """

    name: str
    table: SymbolTable
    composition: tuple[sp.Expr, ...]
    identity: tuple[sp.Expr, ...]
    aux_composition: tuple[sp.Expr, ...] = ()
    aux_identity: tuple[sp.Expr, ...] = ()
    inverse: tuple[sp.Expr, ...] | None = None
    aux_inverse: tuple[sp.Expr, ...] | None = None
    prime_suffix: str = "p"
    phase: str | None = None
    description: str = field(default="", compare=False)

    @property
    def coordinates(self) -> tuple[str, ...]:
        return self.table.coordinates

    @property
    def dimension(self) -> int:
        return len(self.table.coordinates)

    @property
    def auxiliary_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.table.auxiliaries)

    def primed(self, name: str) -> str:
        return f"{name}{self.prime_suffix}"

    @cached_property
    def primed_table(self) -> SymbolTable:
        """Symbols of both factors: primed copies plus the plain ones."""
        rename = {coordinate_symbol(c): coordinate_symbol(self.primed(c)) for c in self.coordinates}
        rename.update({a.symbol: auxiliary_symbol(self.primed(a.name)) for a in self.table.auxiliaries})
        primed_aux = tuple(
            Auxiliary(self.primed(a.name), a.square.xreplace(rename)) for a in self.table.auxiliaries
        )
        return self.table.extend(
            coordinates=tuple(self.primed(c) for c in self.coordinates),
            auxiliaries=primed_aux,
        )

    @property
    def symbols(self) -> tuple[sp.Symbol, ...]:
        return self.table.coordinate_symbols

    @property
    def aux_symbols(self) -> tuple[sp.Symbol, ...]:
        return tuple(a.symbol for a in self.table.auxiliaries)

    @property
    def primed_symbols(self) -> tuple[sp.Symbol, ...]:
        return tuple(coordinate_symbol(self.primed(c)) for c in self.coordinates)

    @property
    def primed_aux_symbols(self) -> tuple[sp.Symbol, ...]:
        return tuple(auxiliary_symbol(self.primed(a)) for a in self.auxiliary_names)

    @property
    def relations(self) -> dict[sp.Symbol, sp.Expr]:
        return self.primed_table.relations

    def index(self, name: str) -> int:
        try:
            return self.coordinates.index(name)
        except ValueError:
            raise VerificationError(f"Unknown coordinate '{name}' in group {self.name}") from None

    def point(self) -> GroupPoint:
        return GroupPoint(self.symbols, self.aux_symbols, tuple(self.table.relations.items()))

    def primed_point(self) -> GroupPoint:
        rel = self.primed_table.relations
        aux = self.primed_aux_symbols
        return GroupPoint(self.primed_symbols, aux, tuple((s, rel[s]) for s in aux))

    def identity_point(self) -> GroupPoint:
        return GroupPoint(self.identity, self.aux_identity)

    def generic_point(self, tag: str) -> GroupPoint:
        """A fresh symbolic copy of the coordinates, named ``<coord>_<tag>``."""
        rename = {coordinate_symbol(c): coordinate_symbol(f"{c}_{tag}") for c in self.coordinates}
        aux_syms = tuple(auxiliary_symbol(f"{a}_{tag}") for a in self.auxiliary_names)
        relations = tuple(
            (sym, a.square.xreplace(rename)) for sym, a in zip(aux_syms, self.table.auxiliaries)
        )
        return GroupPoint(tuple(rename.values()), aux_syms, relations)

    def bindings(self, g: GroupPoint, primed: bool = False) -> dict[sp.Symbol, sp.Expr]:
        coords = self.primed_symbols if primed else self.symbols
        aux = self.primed_aux_symbols if primed else self.aux_symbols
        out = dict(zip(coords, g.coords))
        out.update(zip(aux, g.aux))
        return out

    def evaluate_at(self, exprs: tuple[sp.Expr, ...], g: GroupPoint) -> tuple[sp.Expr, ...]:
        """Evaluate expressions in the plain symbols at the point ``g``."""
        mapping = self.bindings(g)
        rel = g.relation_map
        return tuple(substitute(e, mapping, relations=rel) for e in exprs)


def compose(law: GroupLaw, gp: GroupPoint, g: GroupPoint) -> GroupPoint:
    """g'' = gp * g."""
    if len(gp.coords) != law.dimension or len(g.coords) != law.dimension:
        raise VerificationError(f"Point arity does not match the {law.dimension} coordinates of {law.name}")
    mapping = law.bindings(gp, primed=True)
    mapping.update(law.bindings(g))
    rel = _merge_relations(gp, g)
    coords = tuple(substitute(e, mapping, relations=rel) for e in law.composition)
    aux = tuple(substitute(e, mapping, relations=rel) for e in law.aux_composition)
    return GroupPoint(coords, aux, tuple(rel.items()))


def point_residuals(law: GroupLaw, a: GroupPoint, b: GroupPoint) -> list[str]:
    rel = _merge_relations(a, b)
    names = list(law.coordinates) + list(law.auxiliary_names)
    out = []
    for name, x, y in zip(names, a.coords + a.aux, b.coords + b.aux):
        r = canonical(x - y, rel)
        if r != 0:
            out.append(f"{name}: {to_text(r)}")
    return out


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    residuals: list[str] = field(default_factory=list)


@dataclass
class AxiomReport:
    law: str
    checks: list[AxiomCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass(frozen=True)
class InverseResult:
    coords: tuple[sp.Expr, ...]
    aux: tuple[sp.Expr, ...]
    exact: bool
    method: str
    order: int | None = None


def _check(name: str, residuals: list[str]) -> AxiomCheck:
    return AxiomCheck(name=name, passed=not residuals, residuals=residuals)


def verify_group_axioms(law: GroupLaw, jet_order: int = DEFAULT_JET_ORDER) -> AxiomReport:
    e = law.identity_point()
    g1, g2, g3 = (law.generic_point(t) for t in ("1", "2", "3"))
    checks = [
        _check("left identity", point_residuals(law, compose(law, e, g1), g1)),
        _check("right identity", point_residuals(law, compose(law, g1, e), g1)),
        _check(
            "associativity",
            point_residuals(law, compose(law, compose(law, g1, g2), g3), compose(law, g1, compose(law, g2, g3))),
        ),
    ]
    try:
        inv = invert(law, jet_order)
    except VerificationError as exc:
        checks.append(AxiomCheck("inverse", False, [str(exc)]))
    else:
        if inv.exact:
            g = law.generic_point("1")
            h = inverse_point(law, g, inv)
            res = point_residuals(law, compose(law, g, h), e) + point_residuals(law, compose(law, h, g), e)
            checks.append(_check("inverse", res))
        else:
            logger.info("Inverse of %s known only to order %s; skipping exact inverse axiom", law.name, inv.order)
    logger.debug("axioms for %s: %s", law.name, [(c.name, c.passed) for c in checks])
    return AxiomReport(law=law.name, checks=checks)


def inverse_point(law: GroupLaw, g: GroupPoint, inv: InverseResult | None = None) -> GroupPoint:
    inv = inv or invert(law)
    coords = law.evaluate_at(inv.coords, g)
    aux = law.evaluate_at(inv.aux, g)
    return GroupPoint(coords, aux, g.relations)


def _solve_inverse(law: GroupLaw) -> InverseResult | None:
    g = law.point()
    h = law.generic_point("inv")
    unknowns = list(h.coords) + list(h.aux)
    # the right factor is unknown: its auxiliaries are plain unknowns here
    h_free = GroupPoint(h.coords, h.aux)
    prod = compose(law, g, h_free)
    rel = g.relation_map
    equations = []
    for value, target in zip(prod.coords + prod.aux, law.identity + law.aux_identity):
        num, _ = sp.fraction(canonical(value - target, rel))
        equations.append(sp.expand(num))
    try:
        solutions = sp.linsolve(equations, unknowns)
    except ValueError:
        logger.debug("inverse of %s is not a linear solve; falling back", law.name)
        return None
    if not solutions or solutions is sp.S.EmptySet:
        return None
    solution = next(iter(solutions))
    if any(sym in unknowns for value in solution for sym in sp.sympify(value).free_symbols):
        return None
    values = tuple(canonical(v, rel) for v in solution)
    n = law.dimension
    return InverseResult(values[:n], values[n:], exact=True, method="solved")


def _truncate(e: sp.Expr, t: sp.Symbol, order: int) -> sp.Expr:
    e = sp.expand(e)
    if e.is_polynomial(t):
        poly = sp.Poly(e, t)
        return sp.expand(sum(c * t**k for (k,), c in poly.terms() if k <= order))
    return sp.expand(sp.series(e, t, 0, order + 1).removeO())


def jet_inverse(law: GroupLaw, order: int = DEFAULT_JET_ORDER) -> InverseResult:
    """Power-series inverse at the identity, truncated at total degree ``order``."""
    if law.table.auxiliaries:
        raise VerificationError(f"{law.name}: series inverse needs a law without auxiliary square roots")
    t = sp.Symbol("t_jet")
    e = law.identity
    g = GroupPoint(tuple(ei + t * (x - ei) for ei, x in zip(e, law.symbols)))
    h_syms = law.generic_point("jet").coords
    jac = sp.Matrix(
        [[sp.diff(c, hs) for hs in h_syms] for c in compose(law, law.identity_point(), GroupPoint(h_syms)).coords]
    ).subs(dict(zip(h_syms, e)))
    if jac.det() == 0:
        raise VerificationError(f"{law.name}: composition Jacobian is singular at the identity")
    jac_inv = jac.inv()
    h = list(e)
    for _ in range(order + 1):
        residual = sp.Matrix([c - ei for c, ei in zip(compose(law, g, GroupPoint(tuple(h))).coords, e)])
        step = jac_inv * residual
        h = [_truncate(hi - si, t, order) for hi, si in zip(h, step)]
    coords = tuple(canonical(hi.subs(t, 1)) for hi in h)
    check = compose(law, law.point(), GroupPoint(coords))
    exact = all(is_zero(c - ei) for c, ei in zip(check.coords, e))
    return InverseResult(coords, (), exact=exact, method="jet", order=order)


def invert(law: GroupLaw, order: int = DEFAULT_JET_ORDER) -> InverseResult:
    """Declared inverse if present, else an exact solve, else a truncated series."""
    if law.inverse is not None:
        return InverseResult(law.inverse, law.aux_inverse or (), exact=True, method="declared")
    solved = _solve_inverse(law)
    if solved is not None:
        return solved
    result = jet_inverse(law, order)
    if not result.exact:
        logger.warning("%s: inverse known only through order %d", law.name, order)
    return result


def with_inverse(law: GroupLaw, order: int = DEFAULT_JET_ORDER) -> GroupLaw:
    if law.inverse is not None:
        return law
    inv = invert(law, order)
    if not inv.exact:
        return law
    return replace(law, inverse=inv.coords, aux_inverse=inv.aux or None)


def restrict(law: GroupLaw, fixed: Mapping[str, sp.Expr], name: str | None = None) -> GroupLaw:
    """The subgroup on which the ``fixed`` coordinates (and auxiliaries) keep constant values."""
    coord_fixed = {k: sp.sympify(v) for k, v in fixed.items() if k in law.coordinates}
    aux_fixed = {k: sp.sympify(v) for k, v in fixed.items() if k in law.auxiliary_names}
    unknown = set(fixed) - set(coord_fixed) - set(aux_fixed)
    if unknown:
        raise VerificationError(f"Cannot restrict {law.name}: unknown names {sorted(unknown)}")

    mapping: dict[sp.Symbol, sp.Expr] = {}
    for c, v in coord_fixed.items():
        mapping[coordinate_symbol(c)] = v
        mapping[coordinate_symbol(law.primed(c))] = v
    for a, v in aux_fixed.items():
        mapping[auxiliary_symbol(a)] = v
        mapping[auxiliary_symbol(law.primed(a))] = v
    rel = law.relations

    for c, v in coord_fixed.items():
        value = substitute(law.composition[law.index(c)], mapping, relations=rel)
        if not is_zero(value - v, rel):
            raise NonClosureError(f"{law.name} does not close on {c} = {to_text(v)}", to_text(value - v))
    for i, a in enumerate(law.auxiliary_names):
        if a in aux_fixed:
            value = substitute(law.aux_composition[i], mapping, relations=rel)
            if not is_zero(value - aux_fixed[a], rel):
                raise NonClosureError(f"{law.name} does not close on {a}", to_text(value - aux_fixed[a]))

    keep = [i for i, c in enumerate(law.coordinates) if c not in coord_fixed]
    keep_aux = [i for i, a in enumerate(law.auxiliary_names) if a not in aux_fixed]
    table = SymbolTable(
        coordinates=tuple(law.coordinates[i] for i in keep),
        parameters=law.table.parameters,
        auxiliaries=tuple(
            Auxiliary(law.table.auxiliaries[i].name, law.table.auxiliaries[i].square.xreplace(mapping))
            for i in keep_aux
        ),
    )
    inverse = None
    aux_inverse = None
    if law.inverse is not None:
        inverse = tuple(canonical(law.inverse[i].xreplace(mapping), rel) for i in keep)
        if law.aux_inverse:
            aux_inverse = tuple(canonical(law.aux_inverse[i].xreplace(mapping), rel) for i in keep_aux)
    phase = law.phase if law.phase not in coord_fixed else None
    return GroupLaw(
        name=name or f"{law.name}|restricted",
        table=table,
        composition=tuple(substitute(law.composition[i], mapping, relations=rel) for i in keep),
        identity=tuple(law.identity[i] for i in keep),
        aux_composition=tuple(substitute(law.aux_composition[i], mapping, relations=rel) for i in keep_aux),
        aux_identity=tuple(law.aux_identity[i] for i in keep_aux),
        inverse=inverse,
        aux_inverse=aux_inverse,
        prime_suffix=law.prime_suffix,
        phase=phase,
        description=law.description,
    )
