"""Level-truncated oscillator Fock space and Sugawara Virasoro generators — pure math, no I/O.

States are unnormalized monomials Π (α^μ_{-n})^k |0⟩ with
[α^μ_m, α^ν_n] = a·m·δ_{m+n,0}·η^{μν} and η = diag(−1, +1, …, +1).
The zero modes α^μ_0 are central and act by fixed values.
"""
from __future__ import annotations

import itertools
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

import sympy as sp

from gaq_toolkit.errors import SpecInputError
from gaq_toolkit.mechanics.group_law import AxiomCheck

logger = logging.getLogger(__name__)

Mode = tuple[int, int]
FockVector = dict["FockState", sp.Expr]


@dataclass(frozen=True, order=True)
class FockState:
    """Occupation numbers of the creation modes (μ, n), n > 0."""

    occupations: tuple[tuple[Mode, int], ...] = ()

    @classmethod
    def from_dict(cls, counts: Mapping[Mode, int]) -> FockState:
        return cls(tuple(sorted((m, k) for m, k in counts.items() if k > 0)))

    def as_dict(self) -> dict[Mode, int]:
        return dict(self.occupations)

    @property
    def level(self) -> int:
        return sum(n * k for (_, n), k in self.occupations)

    def count(self, mode: Mode) -> int:
        return self.as_dict().get(mode, 0)

    def label(self) -> str:
        if not self.occupations:
            return "|0>"
        parts = []
        for (mu, n), k in self.occupations:
            op = f"a{mu}_-{n}"
            parts.append(op if k == 1 else f"{op}^{k}")
        return " ".join(parts) + "|0>"


def _partitions(level: int, largest: int) -> list[list[int]]:
    if level == 0:
        return [[]]
    out = []
    for part in range(min(level, largest), 0, -1):
        for rest in _partitions(level - part, part):
            out.append([part] + rest)
    return out


def fock_basis(d: int, level_cutoff: int) -> list[FockState]:
    """All states of level ≤ ``level_cutoff``, ordered by level."""
    if d < 1:
        raise SpecInputError(f"spacetime dimension must be positive, got {d}")
    states = []
    for level in range(level_cutoff + 1):
        found = set()
        for parts in _partitions(level, level):
            for colours in itertools.product(range(d), repeat=len(parts)):
                counts: dict[Mode, int] = {}
                for mu, n in zip(colours, parts):
                    counts[(mu, n)] = counts.get((mu, n), 0) + 1
                found.add(FockState.from_dict(counts))
        states += sorted(found)
    return states


def level_dimension(d: int, level: int) -> int:
    """Number of d-coloured partitions of ``level``: coefficient of q^level in Π (1 − q^n)^{−d}."""
    q = sp.Symbol("q")
    series = sp.prod([(1 - q**n) ** (-d) for n in range(1, level + 1)])
    return int(sp.series(series, q, 0, level + 1).removeO().coeff(q, level))


@dataclass
class FockSpace:
    d: int
    level_cutoff: int
    scale: sp.Expr = sp.S.One
    zero_mode: tuple[sp.Expr, ...] = ()

    def __post_init__(self) -> None:
        if not self.zero_mode:
            self.zero_mode = (sp.S.Zero,) * self.d
        if len(self.zero_mode) != self.d:
            raise SpecInputError(f"zero mode needs {self.d} components, got {len(self.zero_mode)}")

    def metric(self, mu: int) -> int:
        return -1 if mu == 0 else 1

    @cached_property
    def basis(self) -> list[FockState]:
        return fock_basis(self.d, self.level_cutoff)

    @cached_property
    def index(self) -> dict[FockState, int]:
        return {s: i for i, s in enumerate(self.basis)}

    @property
    def vacuum(self) -> FockState:
        return FockState()

    def alpha(self, mu: int, n: int, vector: Mapping[FockState, sp.Expr]) -> FockVector:
        """α^μ_n applied to a vector; creations past the level cutoff are dropped."""
        out: FockVector = {}
        for state, c in vector.items():
            if n == 0:
                image, weight = state, self.zero_mode[mu]
            elif n < 0:
                counts = state.as_dict()
                counts[(mu, -n)] = counts.get((mu, -n), 0) + 1
                image, weight = FockState.from_dict(counts), sp.S.One
                if image.level > self.level_cutoff:
                    continue
            else:
                k = state.count((mu, n))
                if k == 0:
                    continue
                counts = state.as_dict()
                counts[(mu, n)] = k - 1
                image, weight = FockState.from_dict(counts), k * self.scale * n * self.metric(mu)
            value = sp.expand(c * weight)
            if value != 0:
                out[image] = sp.expand(out.get(image, 0) + value)
        return {s: v for s, v in out.items() if v != 0}

    def sugawara(self, k: int, vector: Mapping[FockState, sp.Expr]) -> FockVector:
        """L_k = (1/2a) Σ_n η_μμ :α^μ_{k−n} α^μ_n:, positive modes acting first."""
        reach = self.level_cutoff + abs(k)
        out: FockVector = {}
        for mu in range(self.d):
            for n in range(k - reach, reach + 1):
                first, second = (k - n, n) if (k - n) > 0 and n < 0 else (n, k - n)
                image = self.alpha(mu, second, self.alpha(mu, first, vector))
                weight = sp.Rational(self.metric(mu)) / (2 * self.scale)
                for state, c in image.items():
                    out[state] = sp.expand(out.get(state, 0) + weight * c)
        return {s: v for s, v in out.items() if v != 0}

    def matrix(self, op, states: Sequence[FockState] | None = None) -> sp.ImmutableMatrix:
        """Columns are the images of ``states`` (default: the whole basis)."""
        states = list(states or self.basis)
        m = sp.zeros(len(self.basis), len(states))
        for j, s in enumerate(states):
            for image, c in op({s: sp.S.One}).items():
                m[self.index[image], j] = c
        return sp.ImmutableMatrix(m)

    def sugawara_matrix(self, k: int) -> sp.ImmutableMatrix:
        return self.matrix(lambda v: self.sugawara(k, v))

    def window(self, *lowerings: int) -> list[FockState]:
        """States on which the given sequence of L_k never leaves the truncation."""
        out = []
        for s in self.basis:
            level, ok = s.level, True
            for k in reversed(lowerings):
                level -= k
                if level > self.level_cutoff:
                    ok = False
                    break
            if ok:
                out.append(s)
        return out


def _apply(space: FockSpace, ks: Sequence[int], vector: Mapping[FockState, sp.Expr]) -> FockVector:
    for k in reversed(ks):
        vector = space.sugawara(k, vector)
    return dict(vector)


def _combine(*parts: tuple[sp.Expr, Mapping[FockState, sp.Expr]]) -> FockVector:
    out: FockVector = {}
    for weight, vector in parts:
        for s, c in vector.items():
            out[s] = sp.expand(out.get(s, 0) + weight * c)
    return {s: v for s, v in out.items() if v != 0}


def virasoro_residuals(space: FockSpace, m: int, n: int) -> list[str]:
    """[L_m, L_n] − (m − n) L_{m+n} − (d/12)(m³ − m) δ_{m+n,0} on the exact window."""
    central = sp.Rational(space.d, 12) * (m**3 - m) if m + n == 0 else sp.S.Zero
    out = []
    for state in space.window(m, n):
        if state not in space.window(n, m) or state not in space.window(m + n):
            continue
        v = {state: sp.S.One}
        residual = _combine(
            (1, _apply(space, [m, n], v)),
            (-1, _apply(space, [n, m], v)),
            (-(m - n), _apply(space, [m + n], v)),
            (-central, v),
        )
        if residual:
            out.append(f"{state.label()}: {residual}")
    return out


def central_term(space: FockSpace, m: int) -> sp.Expr:
    """⟨0| [L_m, L_{−m}] − 2m L_0 |0⟩, the measured central charge term."""
    v = {space.vacuum: sp.S.One}
    value = _combine(
        (1, _apply(space, [m, -m], v)),
        (-1, _apply(space, [-m, m], v)),
        (-2 * m, _apply(space, [0], v)),
    )
    return sp.expand(value.get(space.vacuum, sp.S.Zero))


def oscillator_residuals(space: FockSpace, m: int, n: int, mu: int = 0) -> list[str]:
    """[L_m, α^μ_n] + n α^μ_{m+n} on the exact window."""
    out = []
    for state in space.window(m, n):
        if state.level - m > space.level_cutoff:
            continue
        v = {state: sp.S.One}
        residual = _combine(
            (1, space.sugawara(m, space.alpha(mu, n, v))),
            (-1, space.alpha(mu, n, space.sugawara(m, v))),
            (n, space.alpha(mu, m + n, v)),
        )
        if residual:
            out.append(f"{state.label()}: {residual}")
    return out


@dataclass
class StringReport:
    d: int
    level_cutoff: int
    level_dimensions: tuple[int, ...]
    l0_spectrum: dict[int, tuple[sp.Expr, ...]]
    central_terms: dict[int, sp.Expr]
    checks: list[AxiomCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def string_polarization_check(space: FockSpace, modes: int = 2) -> StringReport:
    """Vacuum annihilation, creation-only basis, grading and the Virasoro pattern of the Sugawara operators."""
    checks = []
    vacuum = {space.vacuum: sp.S.One}
    killers = [
        f"a{mu}_{n}" for mu in range(space.d) for n in range(1, space.level_cutoff + 1) if space.alpha(mu, n, vacuum)
    ]
    checks.append(AxiomCheck("vacuum annihilated by lowering modes", not killers, killers))

    dims = tuple(sum(1 for s in space.basis if s.level == level) for level in range(space.level_cutoff + 1))
    expected = tuple(level_dimension(space.d, level) for level in range(space.level_cutoff + 1))
    checks.append(AxiomCheck("level dimensions", dims == expected, [] if dims == expected else [f"{dims} != {expected}"]))

    grading = []
    for k in range(1, modes + 1):
        for s in space.basis:
            for image in space.sugawara(k, {s: sp.S.One}):
                if image.level != s.level - k:
                    grading.append(f"L_{k} {s.label()} -> {image.label()}")
    checks.append(AxiomCheck("L_k lowers the level by k", not grading, grading))

    pattern = []
    for m, n in itertools.product(range(-modes, modes + 1), repeat=2):
        if m < n:
            pattern += virasoro_residuals(space, m, n)
    checks.append(AxiomCheck("Virasoro relations of the Sugawara operators", not pattern, pattern))

    spectrum = {
        level: tuple(sorted({sp.expand(space.sugawara(0, {s: 1}).get(s, 0)) for s in space.basis if s.level == level}, key=str))
        for level in range(space.level_cutoff + 1)
    }
    centrals = {m: central_term(space, m) for m in range(1, modes + 1) if m <= space.level_cutoff}
    logger.debug("string check d=%d L=%d: central terms %s", space.d, space.level_cutoff, centrals)
    return StringReport(space.d, space.level_cutoff, dims, spectrum, centrals, checks)


def central_slope(dimensions: Sequence[int], level_cutoff: int, m: int = 2) -> dict[int, sp.Expr]:
    """Measured central term of [L_m, L_{−m}] for each spacetime dimension."""
    if m < 1 or m > level_cutoff:
        raise SpecInputError(f"mode {m} needs a level cutoff of at least {m}, got {level_cutoff}")
    return {d: central_term(FockSpace(d, level_cutoff), m) for d in dimensions}


@dataclass(frozen=True)
class SugawaraOperator:
    k: int
    matrix: sp.ImmutableMatrix
    labels: tuple[str, ...]
    exact_columns: tuple[int, ...]


def sugawara_operators(
    d: int, level_cutoff: int, k: int, scale: sp.Expr = sp.S.One, zero_mode: Sequence[sp.Expr] = ()
) -> SugawaraOperator:
    """Matrix of L_k on every state of level ≤ ``level_cutoff`` and the columns where it is exact."""
    space = FockSpace(d, level_cutoff, sp.sympify(scale), tuple(sp.sympify(z) for z in zero_mode))
    exact = tuple(space.index[s] for s in space.window(k))
    return SugawaraOperator(k, space.sugawara_matrix(k), tuple(s.label() for s in space.basis), exact)
