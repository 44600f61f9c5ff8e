"""Turns a validated group definition file into the objects the mechanics work on."""
from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import replace
from functools import cached_property

import sympy as sp

from gaq_toolkit.errors import SpecFileError, SpecInputError
from gaq_toolkit.mechanics.enveloping import EnvelopingAlgebra, UEAElement
from gaq_toolkit.mechanics.extension import (
    CENTRAL_NAME,
    ExtendedAlgebra,
    GeneratingFunction,
    coboundary_from,
    extend_group,
    lie_two_cocycle,
)
from gaq_toolkit.mechanics.group_law import DEFAULT_JET_ORDER, GroupLaw, restrict
from gaq_toolkit.mechanics.lie_structure import LieStructure
from gaq_toolkit.mechanics.linear import Vector
from gaq_toolkit.mechanics.parser import parse_expr
from gaq_toolkit.mechanics.representation import PolarizedChart, PowerFactor
from gaq_toolkit.mechanics.symbolic import Auxiliary, Parameter, SymbolTable, canonical, to_text
from gaq_toolkit.mechanics.virasoro import VirasoroSpec, virasoro_algebra
from gaq_toolkit.models.spec_file import ChartSpec, GroupSpecFile, PolarizationSpec

logger = logging.getLogger(__name__)

VIRASORO_PARAMETERS = ("c", "cp")


def linear_vector(text: str, names: Sequence[str], table: SymbolTable) -> Vector:
    """Coefficients of a linear combination of generator names, e.g. ``z1 - z1s + i*lam*Xi``."""
    gen_table = table.extend(coordinates=tuple(n for n in names if not table.has(n)))
    expr = parse_expr(text, gen_table)
    symbols = gen_table.symbols(list(names))
    coefficients = [canonical(sp.diff(expr, s)) for s in symbols]
    rest = canonical(expr - sum((c * s for c, s in zip(coefficients, symbols)), sp.S.Zero))
    nonlinear = [to_text(c) for c in coefficients if c.free_symbols & set(symbols)]
    if rest != 0 or nonlinear:
        raise SpecInputError(f"'{text}' is not a linear combination of {list(names)}")
    return tuple(coefficients)


class BuiltGroup:
    """Everything one definition file describes, built lazily and cached."""

    def __init__(self, spec: GroupSpecFile, source: str = "<memory>", jet_order: int = DEFAULT_JET_ORDER):
        self.spec = spec
        self.source = source
        self.jet_order = jet_order
        self._subgroups: dict[str, GroupLaw] = {}
        self._sub_structures: dict[str, LieStructure] = {}
        self._sub_algebras: dict[str, ExtendedAlgebra] = {}

    @property
    def kind(self) -> str:
        return self.spec.kind

    @property
    def is_group(self) -> bool:
        return self.kind == "group"

    def _require_group(self, what: str) -> None:
        if not self.is_group:
            raise SpecInputError(f"{self.spec.id} defines a {self.kind}, not a group law: {what} needs coordinates")

    # -- symbols --

    @cached_property
    def parameters(self) -> tuple[Parameter, ...]:
        params = tuple(Parameter(p.name, p.positive, p.nonzero) for p in self.spec.parameters)
        if self.kind == "virasoro":
            declared = {p.name for p in params}
            params += tuple(Parameter(n) for n in VIRASORO_PARAMETERS if n not in declared)
        return params

    @cached_property
    def parameter_table(self) -> SymbolTable:
        return SymbolTable(parameters=self.parameters)

    @cached_property
    def table(self) -> SymbolTable:
        self._require_group("the symbol table")
        base = SymbolTable(coordinates=tuple(self.spec.coordinates), parameters=self.parameters)
        auxiliaries = tuple(Auxiliary(a.name, self._parse(a.square, base, f"auxiliaries.{a.name}")) for a in self.spec.auxiliaries)
        return SymbolTable(coordinates=base.coordinates, parameters=base.parameters, auxiliaries=auxiliaries)

    def _parse(self, text: str, table: SymbolTable, where: str) -> sp.Expr:
        try:
            return parse_expr(text, table)
        except SpecInputError as exc:
            raise SpecFileError(f"{self.source}: {where}: {exc}") from None

    # -- group law and extension --

    @cached_property
    def law(self) -> GroupLaw:
        self._require_group("the group law")
        spec, table = self.spec, self.table
        draft = GroupLaw(spec.name, table, (), (), description=spec.description)
        primed = draft.primed_table
        composition = tuple(self._parse(spec.composition[c], primed, f"composition.{c}") for c in spec.coordinates)
        identity = tuple(self._parse(spec.identity[c], table, f"identity.{c}") for c in spec.coordinates)
        aux_composition = tuple(self._parse(a.composition, primed, f"auxiliaries.{a.name}") for a in spec.auxiliaries)
        aux_identity = tuple(self._parse(a.identity, table, f"auxiliaries.{a.name}") for a in spec.auxiliaries)
        inverse = aux_inverse = None
        if spec.inverse is not None:
            inverse = tuple(self._parse(spec.inverse[c], table, f"inverse.{c}") for c in spec.coordinates)
            if any(a.inverse is None for a in spec.auxiliaries):
                raise SpecFileError(f"{self.source}: a declared inverse needs the inverse of every auxiliary")
            aux_inverse = tuple(self._parse(a.inverse, table, f"auxiliaries.{a.name}") for a in spec.auxiliaries) or None
        law = replace(
            draft,
            composition=composition,
            identity=identity,
            aux_composition=aux_composition,
            aux_identity=aux_identity,
            inverse=inverse,
            aux_inverse=aux_inverse,
        )
        logger.debug("built group law %s on %s", law.name, law.coordinates)
        return law

    @cached_property
    def generating_function(self) -> GeneratingFunction | None:
        ext = self.spec.extension
        if ext is None or ext.generating_function is None:
            return None
        return GeneratingFunction(self._parse(ext.generating_function, self.table, "extension.generating_function"))

    @cached_property
    def cocycle(self) -> sp.Expr:
        """ξ as declared plus the coboundary of the generating function, if any."""
        ext = self.spec.extension
        xi = sp.S.Zero
        if ext is not None and ext.cocycle is not None:
            xi = self._parse(ext.cocycle, self.law.primed_table, "extension.cocycle")
        if self.generating_function is not None:
            xi = canonical(xi + coboundary_from(self.generating_function, self.law), self.law.relations)
        return xi

    @property
    def phase(self) -> str:
        return self.spec.extension.phase if self.spec.extension is not None else "phi"

    @cached_property
    def scale(self) -> sp.Expr:
        text = self.spec.extension.scale if self.spec.extension is not None else "1"
        return self._parse(text, self.parameter_table, "extension.scale")

    @cached_property
    def extended(self) -> GroupLaw:
        return extend_group(self.law, self.cocycle, self.phase, name=f"{self.spec.name}~")

    @cached_property
    def structure(self) -> LieStructure:
        return LieStructure(self.extended)

    @cached_property
    def algebra(self) -> ExtendedAlgebra:
        """Extended Lie algebra from the group law, the bracket table or the Virasoro window."""
        if self.kind == "virasoro":
            return virasoro_algebra(self.virasoro)
        if self.kind == "algebra":
            return self._algebra_from_table()
        return lie_two_cocycle(self.extended, self.structure)

    def _algebra_from_table(self) -> ExtendedAlgebra:
        spec = self.spec.algebra
        names = tuple(spec.generators)
        full = names + (CENTRAL_NAME,)
        brackets: dict[tuple[str, str], dict[str, sp.Expr]] = {}
        for b in spec.brackets:
            for side in (b.left, b.right):
                if side not in names:
                    raise SpecFileError(f"{self.source}: bracket [{b.left},{b.right}] names unknown generator {side!r}")
            vector = self._vector(b.value, full, self.parameter_table, f"bracket [{b.left},{b.right}]")
            brackets[(b.left, b.right)] = {n: c for n, c in zip(full, vector) if c != 0}
        theta = {name: self._parse(value, self.parameter_table, f"algebra.theta.{name}") for name, value in spec.theta.items()}
        return ExtendedAlgebra.from_brackets(names, brackets, parameters=self.parameter_table.parameter_symbols, theta=theta)

    @cached_property
    def virasoro(self) -> VirasoroSpec:
        if self.kind != "virasoro":
            raise SpecInputError(f"{self.spec.id} has no [virasoro] section")
        v = self.spec.virasoro
        c = self._parse(v.c, self.parameter_table, "virasoro.c")
        c_prime = self._parse(v.c_prime, self.parameter_table, "virasoro.c_prime")
        return VirasoroSpec(v.modes, c, c_prime, v.r, v.variant)

    # -- vectors, subgroups, polarizations, charts --

    def _vector(self, text: str, names: Sequence[str], table: SymbolTable, where: str) -> Vector:
        try:
            return linear_vector(text, names, table)
        except SpecInputError as exc:
            raise SpecFileError(f"{self.source}: {where}: {exc}") from None

    def vector(self, text: str, algebra: ExtendedAlgebra | None = None) -> Vector:
        algebra = algebra or self.algebra
        return self._vector(text, algebra.names, self.parameter_table, text)

    def subgroup(self, label: str) -> GroupLaw:
        if label not in self._subgroups:
            sub = next((s for s in self.spec.subgroups if s.label == label), None)
            if sub is None:
                raise SpecFileError(f"{self.source}: unknown subgroup {label!r}")
            fixed = {k: self._parse(v, self.table, f"subgroups.{label}.{k}") for k, v in sub.fixed.items()}
            self._subgroups[label] = restrict(self.extended, fixed, name=f"{self.spec.name}|{label}")
        return self._subgroups[label]

    def subgroup_structure(self, label: str) -> LieStructure:
        if label not in self._sub_structures:
            self._sub_structures[label] = LieStructure(self.subgroup(label))
        return self._sub_structures[label]

    def subgroup_algebra(self, label: str) -> ExtendedAlgebra:
        if label not in self._sub_algebras:
            self._sub_algebras[label] = lie_two_cocycle(self.subgroup(label), self.subgroup_structure(label))
        return self._sub_algebras[label]

    def law_for(self, subgroup: str | None) -> GroupLaw:
        return self.subgroup(subgroup) if subgroup else self.extended

    def structure_for(self, subgroup: str | None) -> LieStructure:
        return self.subgroup_structure(subgroup) if subgroup else self.structure

    def algebra_for(self, subgroup: str | None) -> ExtendedAlgebra:
        return self.subgroup_algebra(subgroup) if subgroup else self.algebra

    def polarization_spec(self, label: str) -> PolarizationSpec:
        for p in self.spec.polarizations:
            if p.label == label:
                return p
        raise SpecFileError(f"{self.source}: unknown polarization {label!r}")

    def polarization(self, label: str) -> list[Vector]:
        p = self.polarization_spec(label)
        algebra = self.algebra_for(p.subgroup)
        return [self.vector(text, algebra) for text in p.basis]

    def chart_spec(self, label: str) -> ChartSpec:
        for c in self.spec.charts:
            if c.label == label:
                return c
        known = [c.label for c in self.spec.charts]
        raise SpecFileError(f"{self.source}: unknown chart {label!r}; known charts {known}")

    def chart(self, label: str) -> PolarizedChart:
        c = self.chart_spec(label)
        table = self.law_for(c.subgroup).table
        where = f"charts.{label}"
        reduced = tuple((name, self._parse(text, table, f"{where}.reduced.{name}")) for name, text in c.reduced.items())
        section_table = table.extend(coordinates=tuple(c.reduced))
        section = tuple((name, self._parse(text, section_table, f"{where}.section.{name}")) for name, text in c.section.items())
        powers = tuple(
            PowerFactor(self._parse(p.base, table, f"{where}.powers"), self._parse(p.power, table, f"{where}.powers"))
            for p in c.powers
        )
        return PolarizedChart(reduced, self._parse(c.prefactor, table, f"{where}.prefactor"), powers, section, label)

    def parameter(self, name: str) -> sp.Symbol:
        try:
            return self.parameter_table.symbol(name)
        except SpecInputError:
            raise SpecFileError(f"{self.source}: {name!r} is not a declared parameter") from None

    def values(self, mapping: Mapping[str, str], table: SymbolTable) -> dict[str, sp.Expr]:
        return {k: self._parse(v, table, k) for k, v in mapping.items()}

    # -- enveloping algebra --

    def enveloping(self, order: Sequence[str] = ()) -> EnvelopingAlgebra:
        return EnvelopingAlgebra(self.algebra, tuple(order) or None)

    def elements(self, uea: EnvelopingAlgebra, texts: Sequence[str]) -> list[UEAElement]:
        out = []
        for text in texts:
            try:
                out.append(uea.parse(text))
            except SpecInputError as exc:
                raise SpecFileError(f"{self.source}: {text!r}: {exc}") from None
        return out
