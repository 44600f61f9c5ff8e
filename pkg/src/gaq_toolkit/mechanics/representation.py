"""Polarized wave-function spaces and the right action on them — pure math, no I/O.

A wave function is stored through its logarithm,
log Ψ = L(g) + Σ p_j log f_j(g) + log Φ(y(g)),
so every polarization equation and every right action reduces to rational
expressions. The right operators act on Φ as differential operators in the
reduced variables y.
"""
from __future__ import annotations

import itertools
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import sympy as sp

from gaq_toolkit.errors import (
    PolarizationDefect,
    RepresentationInputError,
    SpaceNotPreservedError,
    VerificationError,
)
from gaq_toolkit.mechanics.enveloping import EnvelopingAlgebra, UEAElement
from gaq_toolkit.mechanics.extension import ExtendedAlgebra, phase_index
from gaq_toolkit.mechanics.group_law import AxiomCheck, GroupLaw, GroupPoint, compose
from gaq_toolkit.mechanics.lie_structure import LieAlgebra, LieStructure, VectorField
from gaq_toolkit.mechanics.linear import Vector, coordinates_in, span_basis
from gaq_toolkit.mechanics.operators import (
    DiffOperator,
    LadderOperator,
    commutant,
    commutator_residual,
    ladder_from_diff,
    stable_window,
)
from gaq_toolkit.mechanics.symbolic import canonical, substitute, to_text

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PowerFactor:
    base: sp.Expr
    power: sp.Expr


@dataclass(frozen=True)
class PolarizedChart:
    """Solution ansatz of the polarization equations on one chart.

    ``reduced`` gives each reduced variable as a function on the group,
    ``section`` is a point g(y) of the group with y(g(y)) = y.
    """

    reduced: tuple[tuple[str, sp.Expr], ...]
    prefactor: sp.Expr
    powers: tuple[PowerFactor, ...] = ()
    section: tuple[tuple[str, sp.Expr], ...] = ()
    label: str = ""

    @property
    def variables(self) -> tuple[sp.Symbol, ...]:
        return tuple(sp.Symbol(name) for name, _ in self.reduced)

    @property
    def reduced_exprs(self) -> tuple[sp.Expr, ...]:
        return tuple(e for _, e in self.reduced)

    def subs(self, values: Mapping[sp.Symbol, sp.Expr]) -> PolarizedChart:
        return PolarizedChart(
            reduced=tuple((n, sp.sympify(e).xreplace(values)) for n, e in self.reduced),
            prefactor=sp.sympify(self.prefactor).xreplace(values),
            powers=tuple(PowerFactor(sp.sympify(p.base).xreplace(values), sp.sympify(p.power).xreplace(values)) for p in self.powers),
            section=tuple((n, sp.sympify(e).xreplace(values)) for n, e in self.section),
            label=self.label,
        )

    def describe(self) -> str:
        parts = [f"exp({to_text(self.prefactor)})"]
        parts += [f"({to_text(p.base)})^({to_text(p.power)})" for p in self.powers]
        args = ", ".join(name for name, _ in self.reduced)
        return " * ".join(parts) + f" * Phi({args})"


def _section_bindings(law: GroupLaw, chart: PolarizedChart) -> dict[sp.Symbol, sp.Expr]:
    return {law.table.symbol(name): sp.sympify(e) for name, e in chart.section}


def log_derivative(X: VectorField, chart: PolarizedChart) -> tuple[sp.Expr, tuple[sp.Expr, ...]]:
    """X(log Ψ) split into the multiplier and the derivatives X(y_k)."""
    rel = X.relations
    multiplier = X.apply(chart.prefactor)
    for factor in chart.powers:
        multiplier += factor.power * X.apply(factor.base) / factor.base
    return canonical(multiplier, rel), tuple(X.apply(y) for y in chart.reduced_exprs)


def _polarization_field(structure: LieStructure, v: Sequence[sp.Expr]) -> VectorField:
    fields = structure.left_fields
    if len(v) != len(fields):
        raise PolarizationDefect(f"polarization vector has {len(v)} entries, the group has {len(fields)} generators")
    total = None
    for c, X in zip(v, fields):
        if c == 0:
            continue
        term = X.scale(c)
        total = term if total is None else total + term
    if total is None:
        raise PolarizationDefect("zero vector in the polarization")
    return total


def _on_section(law: GroupLaw, chart: PolarizedChart, expr: sp.Expr, what: str) -> sp.Expr:
    """Restrict ``expr`` to the section and confirm it only depends on the reduced variables."""
    rel = law.table.relations
    reduced = substitute(expr, _section_bindings(law, chart), relations=rel)
    back = dict(zip(chart.variables, chart.reduced_exprs))
    residual = canonical(expr - reduced.xreplace(back), rel)
    if residual != 0:
        raise SpaceNotPreservedError(what, f"{to_text(expr)} is not a function of {[n for n, _ in chart.reduced]}")
    return reduced


@dataclass
class RepSpace:
    """Right operators on the reduced functions Φ, plus what was verified to build them."""

    law: GroupLaw
    chart: PolarizedChart
    polarization: tuple[Vector, ...]
    operators: dict[str, DiffOperator]
    central_name: str
    checks: list[AxiomCheck] = field(default_factory=list)
    size: int | None = None

    @property
    def variables(self) -> tuple[sp.Symbol, ...]:
        return self.chart.variables

    @property
    def generators(self) -> tuple[str, ...]:
        return tuple(n for n in self.operators if n != self.central_name)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def basis_labels(self) -> list[str]:
        (y,) = self.variables
        return ["1"] + [to_text(y**k) for k in range(1, self.size or 0)]

    def matrix(self, name: str) -> sp.ImmutableMatrix:
        if self.size is None:
            raise RepresentationInputError("space has no finite basis")
        return self.operators[name].matrix(self.size).matrix


def right_action(law: GroupLaw, chart: PolarizedChart, X: VectorField, name: str) -> DiffOperator:
    """Reduced operator M with X^R(e^L Φ) = e^L MΦ."""
    multiplier, shifts = log_derivative(X, chart)
    terms: dict[tuple[int, ...], sp.Expr] = {(0,) * len(shifts): _on_section(law, chart, multiplier, name)}
    for k, b in enumerate(shifts):
        index = tuple(1 if j == k else 0 for j in range(len(shifts)))
        terms[index] = _on_section(law, chart, b, name)
    return DiffOperator.from_dict(chart.variables, terms)


def algebra_residuals(
    operators: Mapping[str, DiffOperator], algebra: LieAlgebra, central_value: sp.Expr = sp.I
) -> list[str]:
    """[M_i, M_j] + Σ_k C^k_ij M_k over the extended algebra, with M_Ξ = central_value."""
    names = algebra.names
    variables = next(iter(operators.values())).variables
    ops = dict(operators)
    central = names[-1]
    ops.setdefault(central, DiffOperator.multiplication(variables, central_value))
    out = []
    for (j, a), (k, b) in itertools.combinations(enumerate(names[:-1]), 2):
        if a not in ops or b not in ops:
            continue
        expected = DiffOperator.from_dict(variables, {})
        for i, c in enumerate(algebra.constants[j][k]):
            if c != 0:
                if names[i] not in ops:
                    expected = None
                    break
                expected = expected + ops[names[i]].scale(c)
        if expected is None:
            continue
        residual = ops[a].commutator(ops[b]) + expected
        if not residual.is_zero:
            out.append(f"[{a},{b}]: {residual.to_text()}")
    return out


def polarized_space(
    law: GroupLaw,
    polarization: Sequence[Sequence[sp.Expr]],
    chart: PolarizedChart,
    structure: LieStructure | None = None,
    size: int | None = None,
) -> RepSpace:
    """Verify the chart solves the polarization equations and compute every right operator."""
    idx = phase_index(law)
    structure = structure or LieStructure(law)
    for v in polarization:
        Y = _polarization_field(structure, v)
        multiplier, shifts = log_derivative(Y, chart)
        bad = [to_text(multiplier)] if multiplier != 0 else []
        bad += [f"d {n}: {to_text(s)}" for (n, _), s in zip(chart.reduced, shifts) if s != 0]
        if bad:
            raise PolarizationDefect(f"chart {chart.label or '?'} does not solve {Y.to_text()} Psi = 0: {bad[0]}")
    checks = [AxiomCheck("polarization equations", True, [])]

    operators: dict[str, DiffOperator] = {}
    for X in structure.right_fields:
        operators[X.name] = right_action(law, chart, X, X.name)
    central = law.coordinates[idx]
    phase_op = operators.pop(central)
    xi_name = "Xi"
    identity_i = DiffOperator.multiplication(chart.variables, sp.I)
    equivariant = (phase_op - identity_i).is_zero
    checks.append(AxiomCheck("Xi acts as i", equivariant, [] if equivariant else [phase_op.to_text()]))
    operators[xi_name] = phase_op

    residuals = _right_residuals(operators, structure, law)
    checks.append(AxiomCheck("commutation relations", not residuals, residuals))
    logger.debug("polarized space on %s: %d operators, checks %s", law.name, len(operators), [c.passed for c in checks])
    return RepSpace(law, chart, tuple(tuple(v) for v in polarization), operators, xi_name, checks, size)


def _right_residuals(operators: Mapping[str, DiffOperator], structure: LieStructure, law: GroupLaw) -> list[str]:
    # right fields close with the constants of the left algebra, negated
    left = structure.algebra
    names = law.coordinates
    renamed = LieAlgebra(names[:-1] + ("Xi",), left.constants)
    return algebra_residuals(operators, renamed, sp.I)


def relation_residual(element: UEAElement, operators: Mapping[str, DiffOperator], central_value: sp.Expr = sp.I) -> DiffOperator:
    """Evaluate an enveloping-algebra element on reduced operators in its own word order."""
    variables = next(iter(operators.values())).variables
    total = DiffOperator.from_dict(variables, {})
    central = element.names[-1]
    for word, c in element.terms:
        term = DiffOperator.multiplication(variables, c)
        for i in word:
            name = element.names[i]
            op = DiffOperator.multiplication(variables, central_value) if name == central else operators[name]
            term = term @ op
        total = total + term
    return total


def higher_order_reduction(
    uea: EnvelopingAlgebra, elements: Sequence[UEAElement], basic: Mapping[str, DiffOperator]
) -> dict[str, DiffOperator]:
    """Operators of the non-basic generators from the higher-order polarization.

    Each element reads Σ_G c_G G + Q(basic), so Σ_G c_G M_G = −Q(M) with Q
    evaluated in its own word order.
    """
    names = uea.names
    central = names[-1]
    variables = next(iter(basic.values())).variables
    targets: list[str] = []
    rows: list[dict[str, sp.Expr]] = []
    rests: list[UEAElement] = []
    for e in elements:
        linear = {names[w[0]]: c for w, c in e.terms if len(w) == 1 and names[w[0]] not in basic and names[w[0]] != central}
        if not linear:
            continue
        rest = UEAElement.from_dict(names, {w: c for w, c in e.terms if not (len(w) == 1 and names[w[0]] in linear)})
        for t in linear:
            if t not in targets:
                targets.append(t)
        rows.append(linear)
        rests.append(rest)
    if len(rows) != len(targets):
        raise VerificationError(
            f"higher-order polarization fixes {len(rows)} combinations of {len(targets)} generators {targets}"
        )
    coeff = sp.Matrix(len(rows), len(targets), lambda r, t: rows[r].get(targets[t], 0))
    if coeff.det() == 0:
        raise VerificationError(f"higher-order polarization does not determine {targets} independently")
    inverse = coeff.inv()
    values = [relation_residual(rest, basic).scale(-1) for rest in rests]
    out = dict(basic)
    for t, target in enumerate(targets):
        op = DiffOperator.from_dict(variables, {})
        for r, value in enumerate(values):
            if inverse[t, r] != 0:
                op = op + value.scale(inverse[t, r])
        out[target] = op
    logger.debug("higher-order reduction fixed %s", targets)
    return out


def derived_elements(algebra: LieAlgebra) -> list[Vector]:
    """Basis of [g, g]."""
    brackets = [algebra.bracket(algebra.basis_vector(i), algebra.basis_vector(j)) for i, j in itertools.combinations(range(algebra.dimension), 2)]
    return span_basis([b for b in brackets if any(x != 0 for x in b)])


def casimir(
    algebra: LieAlgebra, elements: Sequence[Sequence[sp.Expr]], operators: Mapping[str, DiffOperator]
) -> DiffOperator:
    """Quadratic Casimir of the subalgebra spanned by ``elements`` for the form ½·Killing.

    With this normalization sl(2) gives ¼H² + ½(EF + FE).
    """
    elements = [tuple(e) for e in elements]
    k = len(elements)
    ad = []
    for a in elements:
        cols = []
        for b in elements:
            coords = coordinates_in(elements, algebra.bracket(a, b))
            if coords is None:
                raise VerificationError("Casimir elements do not span a subalgebra")
            cols.append(coords)
        ad.append(sp.Matrix(k, k, lambda i, j, cols=cols: cols[j][i]))
    killing = sp.Matrix(k, k, lambda i, j: (ad[i] * ad[j]).trace())
    if killing.det() == 0:
        raise VerificationError("Killing form is degenerate on the Casimir elements")
    metric = (killing / 2).inv()
    variables = next(iter(operators.values())).variables

    def op(v: Sequence[sp.Expr]) -> DiffOperator:
        total = DiffOperator.from_dict(variables, {})
        for name, c in zip(algebra.names, v):
            if c != 0:
                total = total + operators[name].scale(c)
        return total

    ops = [op(e) for e in elements]
    total = DiffOperator.from_dict(variables, {})
    for i, j in itertools.product(range(k), repeat=2):
        if metric[i, j] != 0:
            total = total + (ops[i] @ ops[j]).scale(metric[i, j])
    return total


def scalar_value(op: DiffOperator) -> sp.Expr | None:
    """The constant c when ``op`` is multiplication by c."""
    d = op.as_dict()
    zero = (0,) * len(op.variables)
    if set(d) - {zero}:
        return None
    c = sp.simplify(d.get(zero, sp.S.Zero))
    return None if any(c.has(v) for v in op.variables) else c


def matrix_scalar(m: sp.Matrix) -> sp.Expr | None:
    """c when m = c·I."""
    m = sp.Matrix(m).applyfunc(sp.simplify)
    if not m.is_diagonal():
        return None
    values = set(m.diagonal())
    return values.pop() if len(values) == 1 else None


@dataclass
class SpinReport:
    lam: int
    space: RepSpace
    casimir: sp.Expr | None
    expected_casimir: sp.Expr
    weights: dict[str, tuple[sp.Expr, sp.Expr]]
    extremal: dict[str, list[str]]
    commutant_dimension: int
    checks: list[AxiomCheck]

    @property
    def dimension(self) -> int:
        return self.lam + 1

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _require_lambda(lam: object) -> int:
    value = sp.sympify(lam)
    if not value.is_integer or value < 0:
        raise RepresentationInputError(
            f"lambda = {lam} is not a non-negative integer: the factor w1^lambda is single-valued only for integer lambda >= 0"
        )
    return int(value)


def su2_representation(
    law: GroupLaw,
    polarization: Sequence[Sequence[sp.Expr]],
    chart: PolarizedChart,
    parameter: sp.Symbol,
    lam: object,
    structure: LieStructure | None = None,
) -> SpinReport:
    """Spin-λ/2 representation on {Φ = 1, τ, …, τ^λ}."""
    n = _require_lambda(lam)
    values = {parameter: sp.Integer(n)}
    chart_n = chart.subs(values)
    pol_n = [tuple(sp.sympify(c).xreplace(values) for c in v) for v in polarization]
    structure = structure or LieStructure(law)
    space = polarized_space(law, pol_n, chart_n, structure, size=n + 1)

    checks = list(space.checks)
    leaking = [name for name in space.generators if space.operators[name].matrix(n + 1).overflow]
    checks.append(AxiomCheck("basis is invariant", not leaking, leaking))

    base = LieAlgebra(law.coordinates[:-1], tuple(tuple(tuple(c[:-1]) for c in row[:-1]) for row in structure.algebra.constants))
    cas_op = casimir(base, derived_elements(base), space.operators)
    cas = scalar_value(cas_op)
    expected = sp.Rational(n, 2) * (sp.Rational(n, 2) + 1)
    cas_ok = cas is not None and sp.simplify(cas - expected) == 0
    checks.append(AxiomCheck("Casimir j(j+1)", cas_ok, [] if cas_ok else [cas_op.to_text()]))

    matrices = {name: space.matrix(name) for name in space.generators}
    weights = {
        name: (m[0, 0], m[n, n]) for name, m in matrices.items() if m.is_diagonal() and any(x != 0 for x in m.diagonal())
    }
    extremal = {
        "highest": [name for name, m in matrices.items() if not m.is_diagonal() and all(x == 0 for x in m.col(0))],
        "lowest": [name for name, m in matrices.items() if not m.is_diagonal() and all(x == 0 for x in m.col(n))],
    }
    comm = commutant(list(matrices.values()))
    checks.append(AxiomCheck("irreducible", comm.scalar, [] if comm.scalar else [f"commutant dimension {comm.dimension}"]))
    logger.info("SU(2) lambda=%d: Casimir %s, commutant %d", n, cas, comm.dimension)
    return SpinReport(n, space, cas, expected, weights, extremal, comm.dimension, checks)


@dataclass
class TransitionReport:
    matrix: sp.ImmutableMatrix
    multiplier: sp.Expr
    image: tuple[sp.Expr, ...]
    j2_scalar: sp.Expr | None
    j4_scalar: sp.Expr | None
    j2_diagonal: tuple[sp.Expr, ...]


def chart_transition(space: RepSpace, element: Mapping[str, sp.Expr]) -> TransitionReport:
    """(TΦ)(y) = r(y) Φ(y(J g)), the action of Ψ ↦ Ψ(J * g) on the reduced basis."""
    law, chart = space.law, space.chart
    if space.size is None:
        raise RepresentationInputError("chart transition needs a finite basis")
    missing = set(law.coordinates) - set(element)
    if missing:
        raise RepresentationInputError(f"group element misses coordinates {sorted(missing)}")
    J = GroupPoint(
        tuple(sp.sympify(element[c]) for c in law.coordinates),
        tuple(sp.sympify(element.get(a, 1)) for a in law.auxiliary_names),
    )
    g = law.point()
    Jg = compose(law, J, g)
    rel = law.table.relations
    at_Jg = law.bindings(Jg)
    image = tuple(
        _on_section(law, chart, substitute(y, at_Jg, relations=rel), "J") for y in chart.reduced_exprs
    )
    delta = _on_section(law, chart, substitute(chart.prefactor, at_Jg, relations=rel) - chart.prefactor, "J")
    multiplier = sp.exp(delta)
    for factor in chart.powers:
        ratio = _on_section(law, chart, substitute(factor.base, at_Jg, relations=rel) / factor.base, "J")
        multiplier *= ratio**factor.power
    multiplier = sp.powsimp(sp.simplify(multiplier))

    (y,) = chart.variables
    size = space.size
    rows = sp.zeros(size, size)
    for j in range(size):
        value = sp.expand(sp.cancel(multiplier * image[0] ** j))
        try:
            poly = sp.Poly(value, y)
        except sp.PolynomialError:
            raise SpaceNotPreservedError("J", f"y^{j} maps to {to_text(value)}") from None
        for (deg,), c in poly.terms():
            if deg >= size:
                raise SpaceNotPreservedError("J", f"y^{j} maps to {to_text(value)}")
            rows[deg, j] = c
    T = sp.ImmutableMatrix(rows)
    T2 = T * T
    T4 = T2 * T2
    return TransitionReport(T, multiplier, image, matrix_scalar(T2), matrix_scalar(T4), tuple(sp.Matrix(T2).diagonal()))


@dataclass
class MetaplecticReport:
    operators: dict[str, DiffOperator]
    size: int
    casimir: sp.Expr | None
    casimir_window: int
    casimir_matrix_residuals: list[str]
    parity_invariant: bool
    bargmann_indices: dict[str, sp.Expr]
    compact_spectrum: tuple[sp.Expr, ...]
    j_powers: dict[int, tuple[sp.Expr, ...]]
    j4_scalar: sp.Expr | None
    commutant_sl2: int
    commutant_full: int
    checks: list[AxiomCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def fock_picture(operators: Mapping[str, DiffOperator], scale: sp.Expr) -> dict[str, LadderOperator]:
    """Rewrite through b₋ = scale·y + d/dy, b₊ = scale·y − d/dy."""
    return {name: ladder_from_diff(op, scale) for name, op in operators.items()}


def _parity_preserving(m: sp.Matrix) -> bool:
    return all(m[i, j] == 0 for i in range(m.rows) for j in range(m.cols) if (i - j) % 2)


def metaplectic_representation(
    ext: ExtendedAlgebra,
    operators: Mapping[str, DiffOperator],
    sl2: Mapping[str, Sequence[sp.Expr]],
    compact: Sequence[sp.Expr],
    scale: sp.Expr,
    size: int,
    extra: Sequence[str] = (),
    sample: Mapping[sp.Symbol, sp.Expr] | None = None,
) -> MetaplecticReport:
    """Diagnostics of the higher-order reduced representation of sl(2,R) ⋉ h.

    ``sl2`` names the elements H, E, F; ``compact`` is the compact generator
    whose Fock spectrum fixes the Bargmann indices; ``extra`` lists generators
    added to the commutant test.
    """
    if size < 5:
        raise RepresentationInputError(f"cutoff must be at least 4, got {size - 1}")
    checks = []
    full = ext.full_algebra()
    residuals = algebra_residuals(operators, full, sp.I)
    checks.append(AxiomCheck("commutation relations", not residuals, residuals))

    base = ext.algebra
    elements = [tuple(v[: ext.dimension]) for v in sl2.values()]
    cas_op = casimir(base, elements, operators)
    cas = scalar_value(cas_op)
    checks.append(AxiomCheck("Casimir is scalar", cas is not None, [] if cas is not None else [cas_op.to_text()]))

    variables = next(iter(operators.values())).variables

    def combo(v: Sequence[sp.Expr]) -> DiffOperator:
        total = DiffOperator.from_dict(variables, {})
        for name, c in zip(base.names, v):
            if c != 0:
                total = total + operators[name].scale(c)
        return total

    sl2_ops = {label: combo(v[: ext.dimension]) for label, v in sl2.items()}
    shifts = [op.degree_shift() for op in sl2_ops.values()]
    window = stable_window(size, max(shifts), max(shifts))
    cas_residuals = []
    if cas is not None:
        mats = {k: op.matrix(size).matrix for k, op in sl2_ops.items()}
        h, e, f = (mats[k] for k in sl2)
        product = (h * h / 4 + (e * f + f * e) / 2 - cas * sp.eye(size)).applyfunc(sp.expand)
        cas_residuals = [f"column {j}" for j in range(window) if any(product[i, j] != 0 for i in range(size))]
    checks.append(AxiomCheck("Casimir on the stable window", not cas_residuals, cas_residuals))

    parity = all(_parity_preserving(op.matrix(size).matrix) for op in sl2_ops.values())
    checks.append(AxiomCheck("even and odd monomials are invariant", parity, []))

    ladders = fock_picture({**sl2_ops, "K": combo(compact[: ext.dimension])}, scale)
    K = ladders["K"].matrix(size)
    spectrum = tuple(sp.simplify(K[i, i]) for i in range(size))
    diagonal = K.is_diagonal()
    checks.append(AxiomCheck("compact generator is diagonal on the number basis", diagonal, []))
    bargmann = {"even": sp.simplify(-sp.I * spectrum[0] / 2), "odd": sp.simplify(-sp.I * spectrum[1] / 2)}
    if cas is not None:
        bad = [label for label, k in bargmann.items() if sp.simplify(k * (k - 1) - cas) != 0]
        checks.append(AxiomCheck("Casimir equals k(k-1)", not bad, bad))

    # J = exp((pi/2) K) evaluated on the spectrum, not a chart transition of the group
    j_powers = {p: tuple(sp.simplify(sp.exp(p * sp.pi / 2 * s)) for s in spectrum) for p in (1, 2, 4)}
    j4 = j_powers[4][0] if len(set(j_powers[4])) == 1 else None
    checks.append(
        AxiomCheck(
            "J^4 = exp(2 pi K) is scalar on the compact spectrum",
            j4 is not None,
            [] if j4 is not None else [to_text(x) for x in j_powers[4]],
        )
    )

    values = dict(sample or {})
    values.update({s: 1 for s in _free_parameters(operators, variables) if s not in values})
    sl2_mats = [ladders[k].matrix(size).xreplace(values) for k in sl2]
    extra_mats = [ladder_from_diff(operators[name], scale).matrix(size).xreplace(values) for name in extra]
    c_sl2 = commutant(sl2_mats)
    c_full = commutant(sl2_mats + extra_mats) if extra_mats else c_sl2
    logger.info("metaplectic: Casimir %s, commutants %d/%d, J^4 %s", cas, c_sl2.dimension, c_full.dimension, j4)
    return MetaplecticReport(
        operators=dict(operators),
        size=size,
        casimir=cas,
        casimir_window=window,
        casimir_matrix_residuals=cas_residuals,
        parity_invariant=parity,
        bargmann_indices=bargmann,
        compact_spectrum=spectrum,
        j_powers=j_powers,
        j4_scalar=j4,
        commutant_sl2=c_sl2.dimension,
        commutant_full=c_full.dimension,
        checks=checks,
    )


def _free_parameters(operators: Mapping[str, DiffOperator], variables: Sequence[sp.Symbol]) -> set[sp.Symbol]:
    out: set[sp.Symbol] = set()
    for op in operators.values():
        for _, c in op.terms:
            out |= sp.sympify(c).free_symbols
    return out - set(variables)


@dataclass
class LimitOperators:
    momentum: DiffOperator
    position: DiffOperator
    energy: DiffOperator
    weyl: DiffOperator
    checks: list[AxiomCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def schrodinger_limit_operators(
    operators: Mapping[str, DiffOperator],
    mass: sp.Expr,
    hbar: sp.Expr,
    omega: sp.Expr,
    names: tuple[str, str, str] = ("x1", "x2", "B"),
    size: int = 8,
) -> LimitOperators:
    """p̂ = −iħM_{x1}, q̂ = −iħ d/dp and Ê = −iħω M_B in the momentum variable p = mω y."""
    x1, x2, gen_b = (operators[n] for n in names)
    (y,) = x1.variables
    p = sp.Symbol("p")
    factor = 1 / (mass * omega)
    momentum = x1.scale(-sp.I * hbar).in_variable(y, p, factor)
    position = x2.scale(-sp.I * hbar / (mass * omega)).in_variable(y, p, factor)
    energy = gen_b.scale(-sp.I * hbar * omega).in_variable(y, p, factor)
    weyl = momentum @ position - position @ momentum
    checks = []
    w = scalar_value(weyl)
    ok = w is not None and sp.simplify(w - sp.I * hbar) == 0
    checks.append(AxiomCheck("p q - q p = i hbar", ok, [] if ok else [weyl.to_text()]))
    kinetic = energy - (momentum @ momentum).scale(1 / (2 * mass))
    kinetic = DiffOperator.from_dict(kinetic.variables, {k: sp.simplify(c) for k, c in kinetic.terms})
    checks.append(AxiomCheck("E = p^2/2m", kinetic.is_zero, [] if kinetic.is_zero else [kinetic.to_text()]))
    leftover = [label for label, op in (("p", momentum), ("q", position), ("E", energy)) if any(sp.simplify(c).has(omega) for _, c in op.terms)]
    checks.append(AxiomCheck("omega cancels", not leftover, leftover))
    matrix_res = commutator_residual(momentum, position, DiffOperator.multiplication((p,), sp.I * hbar), size)
    checks.append(AxiomCheck("Weyl relation on the stable window", not matrix_res, matrix_res))
    return LimitOperators(momentum, position, energy, weyl, checks)


@dataclass
class BreakdownReport:
    """Which relations of the higher-order polarization fail on a non-full polarized space."""

    space: RepSpace
    residuals: dict[str, DiffOperator]

    @property
    def broken(self) -> list[str]:
        return [name for name, r in self.residuals.items() if not r.is_zero]


def relation_breakdown(space: RepSpace, relations: Mapping[str, UEAElement]) -> BreakdownReport:
    """Evaluate each relation on the right operators of ``space``."""
    residuals = {label: relation_residual(e, space.operators) for label, e in relations.items()}
    return BreakdownReport(space, residuals)

