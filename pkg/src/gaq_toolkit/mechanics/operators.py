"""Polynomial-coefficient differential operators, ladder operators and commutants — pure math, no I/O."""
from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import sympy as sp

from gaq_toolkit.errors import RepresentationInputError

logger = logging.getLogger(__name__)

MultiIndex = tuple[int, ...]


def _clean(terms: Mapping[MultiIndex, sp.Expr]) -> dict[MultiIndex, sp.Expr]:
    out = {}
    for k, c in terms.items():
        c = sp.expand(c)
        if c != 0 and sp.cancel(c) != 0:
            out[k] = c
    return out


@dataclass(frozen=True)
class DiffOperator:
    """Σ c_α(y) ∂^α over the reduced variables."""

    variables: tuple[sp.Symbol, ...]
    terms: tuple[tuple[MultiIndex, sp.Expr], ...] = ()

    @classmethod
    def from_dict(cls, variables: Sequence[sp.Symbol], terms: Mapping[MultiIndex, sp.Expr]) -> DiffOperator:
        return cls(tuple(variables), tuple(sorted(_clean(terms).items())))

    @classmethod
    def multiplication(cls, variables: Sequence[sp.Symbol], f: sp.Expr) -> DiffOperator:
        return cls.from_dict(variables, {(0,) * len(variables): f})

    @classmethod
    def identity(cls, variables: Sequence[sp.Symbol]) -> DiffOperator:
        return cls.multiplication(variables, sp.S.One)

    @classmethod
    def partial(cls, variables: Sequence[sp.Symbol], var: sp.Symbol, order: int = 1) -> DiffOperator:
        index = tuple(order if v == var else 0 for v in variables)
        return cls.from_dict(variables, {index: sp.S.One})

    def as_dict(self) -> dict[MultiIndex, sp.Expr]:
        return dict(self.terms)

    @property
    def order(self) -> int:
        return max((sum(k) for k, _ in self.terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, index: MultiIndex) -> sp.Expr:
        return self.as_dict().get(index, sp.S.Zero)

    def apply(self, f: sp.Expr) -> sp.Expr:
        total = sp.S.Zero
        for index, c in self.terms:
            g = f
            for var, k in zip(self.variables, index):
                if k:
                    g = sp.diff(g, var, k)
            total += c * g
        return sp.expand(total)

    def __add__(self, other: DiffOperator) -> DiffOperator:
        total = self.as_dict()
        for k, c in other.terms:
            total[k] = total.get(k, 0) + c
        return DiffOperator.from_dict(self.variables, total)

    def __neg__(self) -> DiffOperator:
        return self.scale(-1)

    def __sub__(self, other: DiffOperator) -> DiffOperator:
        return self + (-other)

    def scale(self, c: sp.Expr) -> DiffOperator:
        return DiffOperator.from_dict(self.variables, {k: c * x for k, x in self.terms})

    def compose(self, other: DiffOperator) -> DiffOperator:
        """self ∘ other, by the Leibniz rule."""
        total: dict[MultiIndex, sp.Expr] = {}
        for (alpha, a), (beta, b) in itertools.product(self.terms, other.terms):
            for gamma in itertools.product(*(range(k + 1) for k in alpha)):
                weight = math.prod(math.comb(k, g) for k, g in zip(alpha, gamma))
                db = b
                for var, g in zip(self.variables, gamma):
                    if g:
                        db = sp.diff(db, var, g)
                if db == 0:
                    continue
                index = tuple(k - g + m for k, g, m in zip(alpha, gamma, beta))
                total[index] = total.get(index, 0) + weight * a * db
        return DiffOperator.from_dict(self.variables, total)

    def __matmul__(self, other: DiffOperator) -> DiffOperator:
        return self.compose(other)

    def power(self, k: int) -> DiffOperator:
        out = DiffOperator.identity(self.variables)
        for _ in range(k):
            out = out @ self
        return out

    def commutator(self, other: DiffOperator) -> DiffOperator:
        return self @ other - other @ self

    def subs(self, values: Mapping[sp.Symbol, sp.Expr]) -> DiffOperator:
        return DiffOperator.from_dict(self.variables, {k: sp.sympify(c).xreplace(values) for k, c in self.terms})

    def in_variable(self, old: sp.Symbol, new: sp.Symbol, factor: sp.Expr) -> DiffOperator:
        """Rewrite in ``new`` where ``old = factor * new``."""
        pos = self.variables.index(old)
        variables = self.variables[:pos] + (new,) + self.variables[pos + 1 :]
        terms = {k: sp.sympify(c).xreplace({old: factor * new}) * factor ** (-k[pos]) for k, c in self.terms}
        return DiffOperator.from_dict(variables, terms)

    def degree_shift(self) -> int:
        """Largest degree raise on monomials of one variable."""
        self._require_single()
        (y,) = self.variables
        shifts = [sp.Poly(c, y).degree() - k[0] for k, c in self.terms]
        return max(shifts, default=0)

    def _require_single(self) -> None:
        if len(self.variables) != 1:
            raise RepresentationInputError("monomial matrices need exactly one reduced variable")

    def matrix(self, size: int) -> TruncatedMatrix:
        """Action on y^0 .. y^(size-1); images leaving the basis are dropped and their columns flagged."""
        self._require_single()
        (y,) = self.variables
        rows = sp.zeros(size, size)
        overflow: set[int] = set()
        for j in range(size):
            image = self.apply(y**j)
            if image == 0:
                continue
            try:
                poly = sp.Poly(image, y)
            except sp.PolynomialError:
                raise RepresentationInputError(f"operator maps y^{j} outside polynomials: {image}") from None
            for (deg,), c in poly.terms():
                if deg < size:
                    rows[deg, j] = c
                else:
                    overflow.add(j)
        return TruncatedMatrix(sp.ImmutableMatrix(rows), frozenset(overflow))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for index, c in self.terms:
            d = "".join(
                f"d{v}" if k == 1 else f"d{v}^{k}" for v, k in zip(self.variables, index) if k
            )
            parts.append(f"({c})*{d}" if d else f"({c})")
        return " + ".join(parts)


@dataclass(frozen=True)
class TruncatedMatrix:
    matrix: sp.ImmutableMatrix
    overflow: frozenset[int]

    @property
    def size(self) -> int:
        return self.matrix.rows


def stable_window(size: int, *shifts: int) -> int:
    """Number of leading basis monomials on which a product of the given operators is not truncated."""
    return max(0, size - sum(max(0, s) for s in shifts))


def commutator_residual(a: DiffOperator, b: DiffOperator, expected: DiffOperator, size: int) -> list[str]:
    """Matrix-level [a,b] − expected on the stable columns."""
    ma, mb, me = a.matrix(size).matrix, b.matrix(size).matrix, expected.matrix(size).matrix
    window = stable_window(size, a.degree_shift(), b.degree_shift())
    diff = (ma * mb - mb * ma - me).applyfunc(sp.expand)
    return [f"entry ({i},{j}) = {diff[i, j]}" for j in range(window) for i in range(size) if diff[i, j] != 0]


Word = tuple[int, int]


@dataclass(frozen=True)
class LadderOperator:
    """Normal-ordered Σ c_pq b₊^p b₋^q with [b₋, b₊] = unit."""

    unit: sp.Expr
    terms: tuple[tuple[Word, sp.Expr], ...] = ()

    @classmethod
    def from_dict(cls, unit: sp.Expr, terms: Mapping[Word, sp.Expr]) -> LadderOperator:
        return cls(unit, tuple(sorted(_clean(terms).items())))

    @classmethod
    def scalar(cls, unit: sp.Expr, c: sp.Expr) -> LadderOperator:
        return cls.from_dict(unit, {(0, 0): c})

    @classmethod
    def raising(cls, unit: sp.Expr) -> LadderOperator:
        return cls.from_dict(unit, {(1, 0): 1})

    @classmethod
    def lowering(cls, unit: sp.Expr) -> LadderOperator:
        return cls.from_dict(unit, {(0, 1): 1})

    def as_dict(self) -> dict[Word, sp.Expr]:
        return dict(self.terms)

    def __add__(self, other: LadderOperator) -> LadderOperator:
        total = self.as_dict()
        for k, c in other.terms:
            total[k] = total.get(k, 0) + c
        return LadderOperator.from_dict(self.unit, total)

    def __sub__(self, other: LadderOperator) -> LadderOperator:
        return self + other.scale(-1)

    def scale(self, c: sp.Expr) -> LadderOperator:
        return LadderOperator.from_dict(self.unit, {k: c * x for k, x in self.terms})

    def __mul__(self, other: LadderOperator) -> LadderOperator:
        # b₋^q b₊^p = Σ_k C(q,k) C(p,k) k! unit^k b₊^(p-k) b₋^(q-k)
        total: dict[Word, sp.Expr] = {}
        for ((p1, q1), c1), ((p2, q2), c2) in itertools.product(self.terms, other.terms):
            for k in range(min(q1, p2) + 1):
                weight = math.comb(q1, k) * math.comb(p2, k) * math.factorial(k)
                key = (p1 + p2 - k, q1 + q2 - k)
                total[key] = total.get(key, 0) + c1 * c2 * weight * self.unit**k
        return LadderOperator.from_dict(self.unit, total)

    def power(self, k: int) -> LadderOperator:
        out = LadderOperator.scalar(self.unit, 1)
        for _ in range(k):
            out = out * self
        return out

    def commutator(self, other: LadderOperator) -> LadderOperator:
        return self * other - other * self

    def matrix(self, size: int) -> sp.ImmutableMatrix:
        """On the unnormalized number basis |n⟩ = b₊^n|0⟩, n < size."""
        rows = sp.zeros(size, size)
        for n in range(size):
            for (p, q), c in self.terms:
                if q > n:
                    continue
                target = n - q + p
                if target < size:
                    rows[target, n] += c * self.unit**q * sp.ff(n, q)
        return sp.ImmutableMatrix(rows.applyfunc(sp.expand))


def ladder_from_diff(op: DiffOperator, scale: sp.Expr) -> LadderOperator:
    """Rewrite a one-variable operator with b₋ = scale·y + d/dy and b₊ = scale·y − d/dy."""
    op._require_single()
    (y,) = op.variables
    unit = 2 * scale
    b_plus, b_minus = LadderOperator.raising(unit), LadderOperator.lowering(unit)
    y_op = (b_plus + b_minus).scale(1 / (2 * scale))
    d_op = (b_minus - b_plus).scale(sp.Rational(1, 2))
    total = LadderOperator.scalar(unit, 0)
    for (k,), c in op.terms:
        for (deg,), coeff in sp.Poly(c, y).terms():
            total = total + (y_op.power(deg) * d_op.power(k)).scale(coeff)
    return total


@dataclass(frozen=True)
class Commutant:
    dimension: int
    basis: tuple[sp.ImmutableMatrix, ...]

    @property
    def scalar(self) -> bool:
        return self.dimension == 1


def commutant(matrices: Sequence[sp.Matrix]) -> Commutant:
    """Matrices X with XM = MX for every M, by an exact sparse linear solve."""
    if not matrices:
        raise RepresentationInputError("commutant needs at least one matrix")
    n = matrices[0].rows
    unknowns = sp.symbols(f"x0:{n * n}", cls=sp.Dummy)
    X = sp.Matrix(n, n, unknowns)
    equations = []
    for m in matrices:
        equations += [e for e in (X * m - m * X).applyfunc(sp.expand) if e != 0]
    if not equations:
        solution = unknowns
    else:
        (solution,) = sp.linsolve(equations, unknowns)
    free = sorted(set().union(*(sp.sympify(s).free_symbols for s in solution)) & set(unknowns), key=unknowns.index)
    basis = []
    for f in free:
        values = {g: (1 if g == f else 0) for g in free}
        basis.append(sp.ImmutableMatrix(n, n, [sp.sympify(s).xreplace(values) for s in solution]))
    logger.debug("commutant of %d matrices of size %d has dimension %d", len(matrices), n, len(basis))
    return Commutant(len(basis), tuple(basis))
