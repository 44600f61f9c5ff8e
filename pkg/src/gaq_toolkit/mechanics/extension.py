"""Central extensions by U(1): cocycles, the quantization form and the central matrix — pure math, no I/O.

The U(1) phase ζ = e^{iφ} is stored additively as the coordinate φ, so the
extended law reads φ'' = φ' + φ + ξ(g', g) and Ξ = ∂/∂φ.
"""
from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import sympy as sp

from gaq_toolkit.errors import CocycleError, VerificationError
from gaq_toolkit.mechanics.group_law import (
    AxiomCheck,
    AxiomReport,
    GroupLaw,
    GroupPoint,
    compose,
    inverse_point,
    invert,
)
from gaq_toolkit.mechanics.lie_structure import (
    LieAlgebra,
    LieStructure,
    OneForm,
    TwoForm,
    Vector,
    VectorField,
    exterior_derivative,
    lie_derivative,
    wedge,
)
from gaq_toolkit.mechanics.symbolic import (
    SymbolTable,
    canonical,
    coordinate_symbol,
    derivative,
    substitute,
    to_text,
)

logger = logging.getLogger(__name__)

DEFAULT_PHASE = "phi"
CENTRAL_NAME = "Xi"


def evaluate_cocycle(law: GroupLaw, xi: sp.Expr, left: GroupPoint, right: GroupPoint) -> sp.Expr:
    """ξ(left, right): primed symbols take ``left``, plain symbols take ``right``."""
    mapping = law.bindings(left, primed=True)
    mapping.update(law.bindings(right))
    rel = {**left.relation_map, **right.relation_map}
    return substitute(xi, mapping, relations=rel)


def check_cocycle(xi: sp.Expr, law: GroupLaw) -> AxiomReport:
    """Cocycle identity plus normalization at the identity; residuals instead of exceptions."""
    e = law.identity_point()
    g1, g2, g3 = (law.generic_point(t) for t in ("1", "2", "3"))
    rel = {**g1.relation_map, **g2.relation_map, **g3.relation_map}

    def residual(value: sp.Expr) -> list[str]:
        r = canonical(value, rel)
        return [] if r == 0 else [to_text(r)]

    identity = (
        evaluate_cocycle(law, xi, g1, g2)
        + evaluate_cocycle(law, xi, compose(law, g1, g2), g3)
        - evaluate_cocycle(law, xi, g1, compose(law, g2, g3))
        - evaluate_cocycle(law, xi, g2, g3)
    )
    checks = [
        AxiomCheck("cocycle identity", *_flag(residual(identity))),
        AxiomCheck("xi(e, g) = 0", *_flag(residual(evaluate_cocycle(law, xi, e, g1)))),
        AxiomCheck("xi(g, e) = 0", *_flag(residual(evaluate_cocycle(law, xi, g1, e)))),
    ]
    return AxiomReport(law=law.name, checks=checks)


def _flag(residuals: list[str]) -> tuple[bool, list[str]]:
    return (not residuals, residuals)


@dataclass(frozen=True)
class GeneratingFunction:
    """λ on G in the plain coordinate symbols, with λ(e) = 0."""

    expr: sp.Expr

    def at_identity(self, law: GroupLaw) -> sp.Expr:
        return substitute(self.expr, law.bindings(law.identity_point()), relations=law.table.relations)


def pseudo_class(lam: GeneratingFunction, law: GroupLaw) -> Vector:
    """λ⁰_i = ∂λ/∂g^i at the identity."""
    e = law.bindings(law.identity_point())
    rel = law.table.relations
    return tuple(substitute(derivative(lam.expr, s, rel), e, relations=rel) for s in law.symbols)


def coboundary_from(lam: GeneratingFunction, law: GroupLaw) -> sp.Expr:
    """δλ(g', g) = λ(g' * g) − λ(g') − λ(g)."""
    if canonical(lam.at_identity(law)) != 0:
        raise CocycleError(f"Generating function must vanish at the identity, got {to_text(lam.at_identity(law))}")
    gp, g = law.primed_point(), law.point()
    rel = law.relations
    at_product = substitute(lam.expr, law.bindings(compose(law, gp, g)), relations=rel)
    at_left = substitute(lam.expr, law.bindings(gp), relations=rel)
    return canonical(at_product - at_left - lam.expr, rel)


def extend_group(law: GroupLaw, xi: sp.Expr, phase: str = DEFAULT_PHASE, name: str | None = None) -> GroupLaw:
    """(g', φ') * (g, φ) = (g' * g, φ' + φ + ξ(g', g))."""
    report = check_cocycle(xi, law)
    if not report.passed:
        failed = next(c for c in report.checks if not c.passed)
        raise CocycleError(f"{law.name}: {failed.name} fails: {failed.residuals[0]}")
    if phase in law.coordinates:
        raise VerificationError(f"{law.name} already has a coordinate named {phase}")
    phi, phi_p = coordinate_symbol(phase), coordinate_symbol(f"{phase}{law.prime_suffix}")
    table = SymbolTable(
        coordinates=law.coordinates + (phase,),
        parameters=law.table.parameters,
        auxiliaries=law.table.auxiliaries,
    )
    inverse = None
    try:
        inv = invert(law)
    except VerificationError:
        inv = None
    if inv is not None and inv.exact:
        g = law.point()
        h = inverse_point(law, g, inv)
        # (g, φ) * (g⁻¹, ψ) = e forces ψ = −φ − ξ(g, g⁻¹)
        phase_inv = canonical(-phi - evaluate_cocycle(law, xi, g, h), law.table.relations)
        inverse = tuple(inv.coords) + (phase_inv,)
        aux_inverse = tuple(inv.aux) or None
    else:
        aux_inverse = None
    return GroupLaw(
        name=name or f"{law.name}~",
        table=table,
        composition=law.composition + (canonical(phi_p + phi + xi, law.relations),),
        identity=law.identity + (sp.S.Zero,),
        aux_composition=law.aux_composition,
        aux_identity=law.aux_identity,
        inverse=inverse,
        aux_inverse=aux_inverse,
        prime_suffix=law.prime_suffix,
        phase=phase,
        description=law.description,
    )


def phase_index(law: GroupLaw) -> int:
    if law.phase is None:
        raise VerificationError(f"{law.name} is not a central extension (no phase coordinate)")
    idx = law.index(law.phase)
    if idx != law.dimension - 1:
        raise VerificationError(f"{law.name}: the phase coordinate must come last")
    return idx


@dataclass(frozen=True)
class QuantizationForm:
    """Θ, the phase row of the left Maurer-Cartan coframe; ``scale`` is a display factor such as ħ."""

    form: OneForm
    phase: str
    scale: sp.Expr = sp.S.One

    def scaled(self) -> OneForm:
        return self.form.scale(self.scale)

    def base_part(self) -> OneForm:
        """Θ − dφ."""
        comps = tuple(sp.S.Zero if c == self.phase else a for c, a in zip(self.form.coordinates, self.form.components))
        return OneForm(self.form.coordinates, comps, self.form.relations, "Theta - dphi")


def quantization_one_form(ext: GroupLaw, structure: LieStructure | None = None, scale: sp.Expr = 1) -> QuantizationForm:
    idx = phase_index(ext)
    structure = structure or LieStructure(ext)
    theta = structure.maurer_cartan.forms[idx]
    return QuantizationForm(OneForm(theta.coordinates, theta.components, theta.relations, "Theta"), ext.phase or DEFAULT_PHASE, sp.sympify(scale))


def central_field(ext: GroupLaw, structure: LieStructure | None = None) -> VectorField:
    structure = structure or LieStructure(ext)
    return structure.left_fields[phase_index(ext)]


def quantization_form_checks(ext: GroupLaw, qform: QuantizationForm, structure: LieStructure | None = None) -> list[AxiomCheck]:
    """Θ(Ξ) = 1, L_Ξ Θ = 0 and L_{X^R} Θ = 0 for every right-invariant field."""
    structure = structure or LieStructure(ext)
    xi_field = central_field(ext, structure)
    theta = qform.form
    value = canonical(theta.pair(xi_field) - 1, theta.relations)
    checks = [AxiomCheck("Theta(Xi) = 1", value == 0, [] if value == 0 else [to_text(value)])]
    lx = lie_derivative(xi_field, theta)
    checks.append(AxiomCheck("L_Xi Theta = 0", lx.is_zero, [] if lx.is_zero else [lx.to_text()]))
    bad = []
    for X in structure.right_fields:
        lr = lie_derivative(X, theta)
        if not lr.is_zero:
            bad.append(f"L_{X.name} Theta = {lr.to_text()}")
    checks.append(AxiomCheck("L_XR Theta = 0", not bad, bad))
    return checks


@dataclass(frozen=True)
class ExtendedAlgebra:
    """Base algebra plus the central matrix Σ and the Θ pairings at the identity.

    Vectors have ``dimension + 1`` entries; the last one is the Ξ component.
    """

    algebra: LieAlgebra
    sigma: sp.ImmutableMatrix
    theta: Vector
    central_name: str = CENTRAL_NAME
    parameters: tuple[sp.Symbol, ...] = field(default=(), compare=False)

    @property
    def dimension(self) -> int:
        return self.algebra.dimension

    @property
    def names(self) -> tuple[str, ...]:
        return self.algebra.names + (self.central_name,)

    def index(self, name: str) -> int:
        if name == self.central_name:
            return self.dimension
        return self.algebra.index(name)

    def vector(self, coefficients: Mapping[str, sp.Expr]) -> Vector:
        out = [sp.S.Zero] * (self.dimension + 1)
        for name, c in coefficients.items():
            out[self.index(name)] += sp.sympify(c)
        return tuple(out)

    def basis_vector(self, name: str) -> Vector:
        return self.vector({name: 1})

    def sigma_value(self, u: Sequence[sp.Expr], v: Sequence[sp.Expr]) -> sp.Expr:
        n = self.dimension
        a = sp.Matrix(list(u[:n]))
        b = sp.Matrix(list(v[:n]))
        return sp.expand((a.T * self.sigma * b)[0, 0])

    def bracket(self, u: Sequence[sp.Expr], v: Sequence[sp.Expr]) -> Vector:
        n = self.dimension
        base = self.algebra.bracket(u[:n], v[:n])
        return base + (self.sigma_value(u, v),)

    def theta_value(self, u: Sequence[sp.Expr]) -> sp.Expr:
        return sp.expand(sum((t * x for t, x in zip(self.theta, u)), sp.S.Zero))

    def full_algebra(self) -> LieAlgebra:
        n = self.dimension
        basis = [tuple(sp.S.One if i == k else sp.S.Zero for i in range(n + 1)) for k in range(n + 1)]
        rows = tuple(tuple(self.bracket(basis[j], basis[k]) for k in range(n + 1)) for j in range(n + 1))
        return LieAlgebra(self.names, rows)

    def jacobi_residuals(self) -> list[str]:
        return self.full_algebra().jacobi_residuals()

    def subs(self, values: Mapping[sp.Symbol, sp.Expr]) -> ExtendedAlgebra:
        return ExtendedAlgebra(
            self.algebra.subs(values),
            sp.ImmutableMatrix(self.sigma.xreplace(values).applyfunc(sp.expand)),
            tuple(sp.expand(sp.sympify(t).xreplace(values)) for t in self.theta),
            self.central_name,
            self.parameters,
        )

    def shifted(self, lambda0: Sequence[sp.Expr]) -> ExtendedAlgebra:
        """Pseudo-extension by a generating function with gradient λ⁰ at the identity.

        The basis moves to X'_j = X_j − λ⁰_j Ξ, so Θ keeps its values and Σ absorbs λ⁰·C.
        """
        return ExtendedAlgebra(self.algebra, shifted_sigma(self, lambda0), self.theta, self.central_name, self.parameters)

    @classmethod
    def from_brackets(
        cls,
        names: Sequence[str],
        brackets: Mapping[tuple[str, str], Mapping[str, sp.Expr]],
        central_name: str = CENTRAL_NAME,
        parameters: Sequence[sp.Symbol] = (),
        theta: Mapping[str, sp.Expr] | None = None,
    ) -> ExtendedAlgebra:
        """Brackets map a pair of generators to coefficients over ``names`` and ``central_name``."""
        names = tuple(names)
        n = len(names)
        base: dict[tuple[str, str], dict[str, sp.Expr]] = {}
        sigma = sp.zeros(n, n)
        for (a, b), value in brackets.items():
            unknown = set(value) - set(names) - {central_name}
            if unknown:
                raise VerificationError(f"Bracket [{a},{b}] names unknown generators {sorted(unknown)}")
            base[(a, b)] = {k: v for k, v in value.items() if k != central_name}
            c = sp.sympify(value.get(central_name, 0))
            j, k = names.index(a), names.index(b)
            sigma[j, k] = c
            sigma[k, j] = -c
        theta_vec = [sp.S.Zero] * n + [sp.S.One]
        for name, value in (theta or {}).items():
            theta_vec[names.index(name)] = sp.sympify(value)
        return cls(LieAlgebra.from_brackets(names, base), sp.ImmutableMatrix(sigma), tuple(theta_vec), central_name, tuple(parameters))


def lie_two_cocycle(ext: GroupLaw, structure: LieStructure | None = None) -> ExtendedAlgebra:
    """Σ_ij, the Ξ component of [X^L_i, X^L_j], from the extended left fields."""
    n = phase_index(ext)
    structure = structure or LieStructure(ext)
    full = structure.algebra
    base_names = full.names[:n]
    base = LieAlgebra(base_names, tuple(tuple(tuple(full.constants[j][k][:n]) for k in range(n)) for j in range(n)))
    sigma = sp.ImmutableMatrix(n, n, lambda j, k: full.constants[j][k][n])
    for j in range(n):
        if any(c != 0 for c in full.constants[j][n]):
            raise VerificationError(f"{ext.name}: the phase generator is not central")
    qform = quantization_one_form(ext, structure)
    e = ext.bindings(ext.identity_point())
    rel = ext.table.relations
    theta = tuple(substitute(qform.form.pair(X), e, relations=rel) for X in structure.left_fields)
    out = ExtendedAlgebra(base, sigma, theta, CENTRAL_NAME, ext.table.parameter_symbols)
    residuals = out.jacobi_residuals()
    if residuals:
        raise VerificationError(f"{ext.name}: central matrix fails the extended Jacobi identity: {residuals[0]}")
    logger.debug("central matrix of %s: %s", ext.name, sigma)
    return out


def shifted_sigma(ext: ExtendedAlgebra, lambda0: Sequence[sp.Expr]) -> sp.ImmutableMatrix:
    """Σ + λ⁰_i C^i_jk."""
    n = ext.dimension
    alg = ext.algebra

    def entry(j: int, k: int) -> sp.Expr:
        return sp.expand(ext.sigma[j, k] + sum((lambda0[i] * alg.structure_constant(i, j, k) for i in range(n)), sp.S.Zero))

    return sp.ImmutableMatrix(n, n, entry)


def coadjoint_action(ad: sp.Matrix, lambda0: Sequence[sp.Expr]) -> Vector:
    """(Ad(g)* λ⁰)_j = λ⁰_i Ad(g)^i_j."""
    v = ad.T * sp.Matrix(list(lambda0))
    return tuple(canonical(x) for x in v)


def theta_lambda_matrix(lambda0: Sequence[sp.Expr], algebra: LieAlgebra) -> sp.Matrix:
    """dΘ_λ on pairs of left-invariant generators: −λ⁰_i C^i_jk."""
    n = algebra.dimension
    return sp.Matrix(
        n, n, lambda j, k: sp.expand(-sum((lambda0[i] * algebra.structure_constant(i, j, k) for i in range(n)), sp.S.Zero))
    )


@dataclass(frozen=True)
class ThetaLambda:
    form: OneForm
    differential: TwoForm
    residual: TwoForm

    @property
    def consistent(self) -> bool:
        return self.residual.is_zero


def theta_lambda(lambda0: Sequence[sp.Expr], structure: LieStructure, lam: GeneratingFunction | None = None) -> ThetaLambda:
    """Θ_λ = λ⁰_i θ^i − dλ, with dΘ_λ = −½ λ⁰_i C^i_jk θ^j ∧ θ^k checked against d(Θ_λ).

    Without an explicit λ the linear function with gradient λ⁰ is used.
    """
    law = structure.law
    forms = structure.maurer_cartan.forms
    algebra = structure.algebra
    rel = law.table.relations
    if lam is None:
        e = law.bindings(law.identity_point())
        lam = GeneratingFunction(sp.expand(sum((c * (s - e[s]) for c, s in zip(lambda0, law.symbols)), sp.S.Zero)))
    dlam = tuple(derivative(lam.expr, s, rel) for s in law.symbols)
    comps = tuple(
        canonical(sum((lambda0[i] * forms[i].components[a] for i in range(len(forms))), sp.S.Zero) - dlam[a], rel)
        for a in range(law.dimension)
    )
    form = OneForm(law.coordinates, comps, rel, "Theta_lambda")
    n = algebra.dimension
    matrix = sp.zeros(law.dimension, law.dimension)
    for j in range(n):
        for k in range(j + 1, n):
            c = sum((lambda0[i] * algebra.structure_constant(i, j, k) for i in range(n)), sp.S.Zero)
            if c != 0:
                matrix -= c * wedge(forms[j], forms[k]).matrix
    differential = TwoForm(law.coordinates, sp.ImmutableMatrix(matrix.applyfunc(lambda w: canonical(w, rel))), rel)
    return ThetaLambda(form, differential, exterior_derivative(form) - differential)


def noether_invariants(ext: GroupLaw, qform: QuantizationForm, structure: LieStructure | None = None) -> dict[str, sp.Expr]:
    """F_i = Θ(X^R_i), one per generator."""
    structure = structure or LieStructure(ext)
    return {X.name: qform.form.pair(X) for X in structure.right_fields}
