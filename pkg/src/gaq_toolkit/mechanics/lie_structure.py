"""Invariant vector fields, Maurer-Cartan forms and structure constants — pure math, no I/O.

Fields and forms live in the coordinate frame of a ``GroupLaw``. Auxiliary
square roots are functions of the coordinates, so they never get a component
of their own; derivatives go through them by the chain rule.
"""
from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import sympy as sp

from gaq_toolkit.errors import NonClosureError, SingularFrameError, VerificationError
from gaq_toolkit.mechanics.group_law import (
    GroupLaw,
    GroupPoint,
    compose,
    invert,
    inverse_point,
)
from gaq_toolkit.mechanics.symbolic import (
    canonical,
    derivative,
    is_zero,
    substitute,
    to_text,
)

logger = logging.getLogger(__name__)

Vector = tuple[sp.Expr, ...]


@dataclass(frozen=True)
class VectorField:
    """X = Σ X^a ∂/∂x^a."""

    coordinates: tuple[str, ...]
    components: tuple[sp.Expr, ...]
    relations: Mapping[sp.Symbol, sp.Expr] = field(default_factory=dict, compare=False)
    name: str = field(default="", compare=False)

    @property
    def symbols(self) -> tuple[sp.Symbol, ...]:
        return tuple(sp.Symbol(c) for c in self.coordinates)

    def apply(self, f: sp.Expr) -> sp.Expr:
        """X(f)."""
        total = sp.S.Zero
        for comp, sym in zip(self.components, self.symbols):
            if comp != 0:
                total += comp * derivative(f, sym, self.relations)
        return canonical(total, self.relations)

    def _combine(self, other: VectorField, sign: int) -> VectorField:
        comps = tuple(canonical(a + sign * b, self.relations) for a, b in zip(self.components, other.components))
        return VectorField(self.coordinates, comps, self.relations)

    def __add__(self, other: VectorField) -> VectorField:
        return self._combine(other, 1)

    def __sub__(self, other: VectorField) -> VectorField:
        return self._combine(other, -1)

    def scale(self, c: sp.Expr) -> VectorField:
        return VectorField(self.coordinates, tuple(canonical(c * a, self.relations) for a in self.components), self.relations)

    def at(self, point: Mapping[sp.Symbol, sp.Expr]) -> Vector:
        return tuple(substitute(a, point, relations=self.relations) for a in self.components)

    @property
    def is_zero(self) -> bool:
        return all(is_zero(a, self.relations) for a in self.components)

    def component(self, name: str) -> sp.Expr:
        return self.components[self.coordinates.index(name)]

    def to_text(self) -> str:
        terms = [f"({to_text(a)})*d_{c}" for c, a in zip(self.coordinates, self.components) if a != 0]
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class OneForm:
    """θ = Σ θ_a dx^a."""

    coordinates: tuple[str, ...]
    components: tuple[sp.Expr, ...]
    relations: Mapping[sp.Symbol, sp.Expr] = field(default_factory=dict, compare=False)
    name: str = field(default="", compare=False)

    def pair(self, X: VectorField) -> sp.Expr:
        return canonical(sum((a * b for a, b in zip(self.components, X.components)), sp.S.Zero), self.relations)

    def __add__(self, other: OneForm) -> OneForm:
        comps = tuple(canonical(a + b, self.relations) for a, b in zip(self.components, other.components))
        return OneForm(self.coordinates, comps, self.relations)

    def __sub__(self, other: OneForm) -> OneForm:
        return self + other.scale(-1)

    def scale(self, c: sp.Expr) -> OneForm:
        return OneForm(self.coordinates, tuple(canonical(c * a, self.relations) for a in self.components), self.relations)

    @property
    def is_zero(self) -> bool:
        return all(is_zero(a, self.relations) for a in self.components)

    def to_text(self) -> str:
        terms = [f"({to_text(a)})*d{c}" for c, a in zip(self.coordinates, self.components) if a != 0]
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class TwoForm:
    """Antisymmetric coefficient matrix W with ω(∂_a, ∂_b) = W[a, b]."""

    coordinates: tuple[str, ...]
    matrix: sp.ImmutableMatrix
    relations: Mapping[sp.Symbol, sp.Expr] = field(default_factory=dict, compare=False)

    def evaluate(self, X: VectorField, Y: VectorField) -> sp.Expr:
        x = sp.Matrix(X.components)
        y = sp.Matrix(Y.components)
        return canonical((x.T * self.matrix * y)[0, 0], self.relations)

    def __sub__(self, other: TwoForm) -> TwoForm:
        return TwoForm(self.coordinates, sp.ImmutableMatrix(self.matrix - other.matrix), self.relations)

    @property
    def is_zero(self) -> bool:
        return all(is_zero(w, self.relations) for w in self.matrix)


def wedge(a: OneForm, b: OneForm) -> TwoForm:
    n = len(a.components)
    m = sp.Matrix(n, n, lambda i, j: a.components[i] * b.components[j] - a.components[j] * b.components[i])
    return TwoForm(a.coordinates, sp.ImmutableMatrix(m), a.relations)


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants ``constants[j][k][i] = C^i_jk`` with [X_j, X_k] = C^i_jk X_i."""

    names: tuple[str, ...]
    constants: tuple[tuple[Vector, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise VerificationError(f"Unknown generator '{name}'") from None

    def basis_vector(self, name_or_index: str | int) -> Vector:
        k = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        return tuple(sp.S.One if i == k else sp.S.Zero for i in range(self.dimension))

    def structure_constant(self, i: int, j: int, k: int) -> sp.Expr:
        return self.constants[j][k][i]

    def bracket(self, u: Sequence[sp.Expr], v: Sequence[sp.Expr]) -> Vector:
        out = [sp.S.Zero] * self.dimension
        for j, uj in enumerate(u):
            if uj == 0:
                continue
            for k, vk in enumerate(v):
                if vk == 0:
                    continue
                for i, c in enumerate(self.constants[j][k]):
                    if c != 0:
                        out[i] += uj * vk * c
        return tuple(sp.expand(x) for x in out)

    def adjoint_matrix(self, u: Sequence[sp.Expr]) -> sp.Matrix:
        """ad(u): column k is [u, e_k]."""
        cols = [self.bracket(u, self.basis_vector(k)) for k in range(self.dimension)]
        return sp.Matrix(self.dimension, self.dimension, lambda i, k: cols[k][i])

    def antisymmetry_residuals(self) -> list[str]:
        out = []
        n = self.dimension
        for j in range(n):
            for k in range(j, n):
                for i in range(n):
                    r = sp.expand(self.constants[j][k][i] + self.constants[k][j][i])
                    if r != 0:
                        out.append(f"C^{self.names[i]}_({self.names[j]},{self.names[k]}): {to_text(r)}")
        return out

    def jacobi_residuals(self) -> list[str]:
        out = []
        n = self.dimension
        basis = [self.basis_vector(i) for i in range(n)]
        for a in range(n):
            for b in range(a + 1, n):
                for c in range(b + 1, n):
                    x, y, z = basis[a], basis[b], basis[c]
                    total = [
                        sp.expand(p + q + r)
                        for p, q, r in zip(
                            self.bracket(x, self.bracket(y, z)),
                            self.bracket(y, self.bracket(z, x)),
                            self.bracket(z, self.bracket(x, y)),
                        )
                    ]
                    for i, t in enumerate(total):
                        if t != 0:
                            triple = ",".join(self.names[m] for m in (a, b, c))
                            out.append(f"Jacobi({triple}) along {self.names[i]}: {to_text(t)}")
        return out

    def subs(self, values: Mapping[sp.Symbol, sp.Expr]) -> LieAlgebra:
        return LieAlgebra(
            self.names,
            tuple(tuple(tuple(sp.expand(sp.sympify(c).xreplace(values)) for c in vec) for vec in row) for row in self.constants),
        )

    @classmethod
    def from_brackets(
        cls, names: Sequence[str], brackets: Mapping[tuple[str, str], Sequence[sp.Expr] | Mapping[str, sp.Expr]]
    ) -> LieAlgebra:
        """Build from the nonzero brackets; the antisymmetric partner is implied."""
        n = len(names)
        zero = tuple(sp.S.Zero for _ in range(n))
        table = [[zero for _ in range(n)] for _ in range(n)]
        for (a, b), value in brackets.items():
            if a not in names or b not in names:
                raise VerificationError(f"Bracket [{a},{b}] names an unknown generator")
            if isinstance(value, Mapping):
                vec = tuple(sp.sympify(value.get(name, 0)) for name in names)
            else:
                vec = tuple(sp.sympify(v) for v in value)
            j, k = names.index(a), names.index(b)
            table[j][k] = vec
            table[k][j] = tuple(-v for v in vec)
        return cls(tuple(names), tuple(tuple(row) for row in table))


def _rename_primed(law: GroupLaw) -> dict[sp.Symbol, sp.Expr]:
    mapping = dict(zip(law.primed_symbols, law.symbols))
    mapping.update(zip(law.primed_aux_symbols, law.aux_symbols))
    return mapping


def _fields_from_slot(law: GroupLaw, side: str) -> list[VectorField]:
    rel = law.relations
    e = law.identity_point()
    if side == "left":
        wrt = law.symbols
        at_identity = law.bindings(e)
        rename = _rename_primed(law)
    else:
        wrt = law.primed_symbols
        at_identity = law.bindings(e, primed=True)
        rename = {}
    out = []
    for name, sym in zip(law.coordinates, wrt):
        comps = []
        for expr in law.composition:
            d = derivative(expr, sym, rel)
            d = substitute(d, at_identity, relations=rel)
            comps.append(canonical(d.xreplace(rename), law.table.relations))
        out.append(VectorField(law.coordinates, tuple(comps), law.table.relations, name))
    logger.debug("%s-invariant fields of %s computed", side, law.name)
    return out


def left_invariant_fields(law: GroupLaw) -> list[VectorField]:
    """X^L_i(g) = ∂(g * h)/∂h^i at h = e."""
    return _fields_from_slot(law, "left")


def right_invariant_fields(law: GroupLaw) -> list[VectorField]:
    """X^R_i(g) = ∂(h * g)/∂h^i at h = e."""
    return _fields_from_slot(law, "right")


def commutator(X: VectorField, Y: VectorField) -> VectorField:
    comps = tuple(canonical(X.apply(y) - Y.apply(x), X.relations) for x, y in zip(X.components, Y.components))
    return VectorField(X.coordinates, comps, X.relations, f"[{X.name},{Y.name}]")


def frame_matrix(fields: Sequence[VectorField]) -> sp.Matrix:
    """Row j holds the components of field j."""
    return sp.Matrix([list(f.components) for f in fields])


def structure_constants(fields: Sequence[VectorField], law: GroupLaw) -> LieAlgebra:
    """Constants of [X_j, X_k] = C^i_jk X_i, read at the identity and checked everywhere."""
    e = law.bindings(law.identity_point())
    rel = law.table.relations
    frame_e = frame_matrix(fields).xreplace(e).applyfunc(lambda x: canonical(x, rel))
    if frame_e.det() == 0:
        raise SingularFrameError(f"{law.name}: invariant fields are not a frame at the identity")
    solve_e = frame_e.T.inv()
    n = len(fields)
    zero = tuple(sp.S.Zero for _ in range(n))
    table: list[list[Vector]] = [[zero] * n for _ in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            br = commutator(fields[j], fields[k])
            at_e = sp.Matrix([canonical(substitute(c, e, relations=rel), rel) for c in br.components])
            coeffs = tuple(canonical(c) for c in solve_e * at_e)
            rebuilt = [sum((coeffs[i] * fields[i].components[a] for i in range(n)), sp.S.Zero) for a in range(n)]
            for a in range(n):
                residual = canonical(br.components[a] - rebuilt[a], rel)
                if residual != 0:
                    raise NonClosureError(
                        f"[{fields[j].name},{fields[k].name}] is not a constant combination of the fields",
                        f"d_{law.coordinates[a]}: {to_text(residual)}",
                    )
            table[j][k] = coeffs
            table[k][j] = tuple(-c for c in coeffs)
    algebra = LieAlgebra(tuple(f.name or law.coordinates[i] for i, f in enumerate(fields)), tuple(tuple(r) for r in table))
    residuals = algebra.jacobi_residuals()
    if residuals:
        raise NonClosureError(f"{law.name}: structure constants violate Jacobi", residuals[0])
    return algebra


@dataclass(frozen=True)
class MaurerCartan:
    forms: tuple[OneForm, ...]
    method: str


def _forms_by_translation(law: GroupLaw) -> list[OneForm] | None:
    """θ^i_a(g) = ∂(g⁻¹ * h)^i/∂h^a at h = g."""
    try:
        inv = invert(law)
    except VerificationError:
        return None
    if not inv.exact:
        return None
    g = law.point()
    h = inverse_point(law, g, inv)
    rel = law.relations
    mapping = law.bindings(h, primed=True)
    rows = []
    for i, expr in enumerate(law.composition):
        comps = []
        for sym in law.symbols:
            d = derivative(expr, sym, rel)
            comps.append(substitute(d, mapping, relations=law.table.relations))
        rows.append(OneForm(law.coordinates, tuple(comps), law.table.relations, law.coordinates[i]))
    return rows


def _forms_by_frame(fields: Sequence[VectorField], law: GroupLaw) -> list[OneForm]:
    rel = law.table.relations
    m = frame_matrix(fields)
    det = canonical(m.det(method="berkowitz"), rel)
    if det == 0:
        raise SingularFrameError(f"{law.name}: invariant frame is singular")
    inv = m.T.inv(method="LU").applyfunc(lambda x: canonical(x, rel))
    return [
        OneForm(law.coordinates, tuple(inv[i, a] for a in range(law.dimension)), rel, law.coordinates[i])
        for i in range(law.dimension)
    ]


def duality_residuals(forms: Sequence[OneForm], fields: Sequence[VectorField]) -> list[str]:
    out = []
    for i, theta in enumerate(forms):
        for j, X in enumerate(fields):
            r = canonical(theta.pair(X) - (1 if i == j else 0), theta.relations)
            if r != 0:
                out.append(f"<theta^{theta.name}, X_{X.name}> - delta: {to_text(r)}")
    return out


def maurer_cartan_forms(law: GroupLaw, side: str = "left") -> MaurerCartan:
    """Dual coframe of the invariant fields, checked for duality."""
    fields = left_invariant_fields(law) if side == "left" else right_invariant_fields(law)
    method = "frame"
    forms = _forms_by_translation(law) if side == "left" else None
    if forms is not None and not duality_residuals(forms, fields):
        method = "translation"
    else:
        forms = _forms_by_frame(fields, law)
    residuals = duality_residuals(forms, fields)
    if residuals:
        raise SingularFrameError(f"{law.name}: Maurer-Cartan forms are not dual to the fields: {residuals[0]}")
    logger.debug("Maurer-Cartan forms of %s by %s", law.name, method)
    return MaurerCartan(tuple(forms), method)


def exterior_derivative(theta: OneForm) -> TwoForm:
    syms = [sp.Symbol(c) for c in theta.coordinates]
    n = len(syms)
    rel = theta.relations
    d = [[derivative(theta.components[b], syms[a], rel) for b in range(n)] for a in range(n)]
    m = sp.Matrix(n, n, lambda a, b: canonical(d[a][b] - d[b][a], rel))
    return TwoForm(theta.coordinates, sp.ImmutableMatrix(m), rel)


def lie_derivative(X: VectorField, theta: OneForm) -> OneForm:
    """(L_X θ)_a = X(θ_a) + Σ_b θ_b ∂_a X^b."""
    syms = [sp.Symbol(c) for c in theta.coordinates]
    rel = theta.relations
    comps = []
    for a, sa in enumerate(syms):
        total = X.apply(theta.components[a])
        for b, xb in enumerate(X.components):
            if theta.components[b] != 0 and xb != 0:
                total += theta.components[b] * derivative(xb, sa, rel)
        comps.append(canonical(total, rel))
    return OneForm(theta.coordinates, tuple(comps), rel, f"L_{X.name} {theta.name}")


def maurer_cartan_residuals(forms: Sequence[OneForm], algebra: LieAlgebra) -> list[str]:
    """dθ^i + ½ C^i_jk θ^j ∧ θ^k, which must vanish identically."""
    n = algebra.dimension
    out = []
    for i, theta in enumerate(forms):
        total = exterior_derivative(theta).matrix
        for j in range(n):
            for k in range(j + 1, n):
                c = algebra.structure_constant(i, j, k)
                if c != 0:
                    total = total + c * wedge(forms[j], forms[k]).matrix
        bad = [canonical(w, theta.relations) for w in total]
        bad = [w for w in bad if w != 0]
        if bad:
            out.append(f"d theta^{theta.name}: {to_text(bad[0])}")
    return out


def commuting_residuals(left: Iterable[VectorField], right: Sequence[VectorField]) -> list[str]:
    out = []
    for X in left:
        for Y in right:
            if not commutator(X, Y).is_zero:
                out.append(f"[X^L_{X.name}, X^R_{Y.name}] != 0")
    return out


def adjoint_matrix(law: GroupLaw, g: GroupPoint) -> sp.Matrix:
    """Ad(g)^i_j = ∂(g * h * g⁻¹)^i/∂h^j at h = e."""
    inv = invert(law)
    if not inv.exact:
        raise VerificationError(f"{law.name}: Ad(g) needs an exact inverse")
    h = law.point()
    conj = compose(law, compose(law, g, h), inverse_point(law, g, inv))
    rel = {**law.table.relations, **g.relation_map}
    e = law.bindings(law.identity_point())
    n = law.dimension
    return sp.Matrix(
        n,
        n,
        lambda i, j: canonical(substitute(derivative(conj.coords[i], law.symbols[j], rel), e, relations=rel), rel),
    )


@dataclass
class LieStructure:
    """Everything derived once per group law; computed lazily."""

    law: GroupLaw

    @cached_property
    def left_fields(self) -> list[VectorField]:
        return left_invariant_fields(self.law)

    @cached_property
    def right_fields(self) -> list[VectorField]:
        return right_invariant_fields(self.law)

    @cached_property
    def algebra(self) -> LieAlgebra:
        return structure_constants(self.left_fields, self.law)

    @cached_property
    def right_algebra(self) -> LieAlgebra:
        return structure_constants(self.right_fields, self.law)

    @cached_property
    def maurer_cartan(self) -> MaurerCartan:
        return maurer_cartan_forms(self.law)

    def field(self, name: str, side: str = "left") -> VectorField:
        fields = self.left_fields if side == "left" else self.right_fields
        return fields[self.law.index(name)]
