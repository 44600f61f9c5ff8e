"""Truncated Virasoro algebra, its polarizations and the Kac-type anomaly values — pure math, no I/O."""
from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass

import sympy as sp

from gaq_toolkit.errors import SpecInputError
from gaq_toolkit.mechanics.extension import CENTRAL_NAME, ExtendedAlgebra
from gaq_toolkit.mechanics.polarization import (
    Polarization,
    characteristic_subalgebra,
    classify_polarization,
    darboux_normal_form,
)

logger = logging.getLogger(__name__)

VARIANTS = ("virasoro", "string")


def mode_name(n: int) -> str:
    return f"l_{n}" if n >= 0 else f"l_m{-n}"


@dataclass(frozen=True)
class VirasoroSpec:
    """Modes −N..N; brackets with |n + m| > N are dropped.

    ``variant`` picks the central term: ``virasoro`` uses cn³ − c'n,
    ``string`` uses cn³ + c'n.
    """

    modes: int = 4
    c: sp.Expr = sp.Symbol("c")
    c_prime: sp.Expr = sp.Symbol("cp")
    r: int | None = None
    variant: str = "virasoro"

    def __post_init__(self) -> None:
        if self.modes < 2:
            raise SpecInputError(f"mode cutoff must be at least 2, got {self.modes}")
        if self.variant not in VARIANTS:
            raise SpecInputError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if self.r is not None and self.r < 1:
            raise SpecInputError(f"resonance r must be a positive integer, got {self.r}")

    @classmethod
    def resonant(cls, c: sp.Expr, r: int, modes: int = 4, variant: str = "virasoro") -> VirasoroSpec:
        """c' = c r²."""
        sign = 1 if variant == "virasoro" else -1
        return cls(modes, sp.sympify(c), sign * sp.sympify(c) * r**2, r, variant)

    @property
    def range(self) -> range:
        return range(-self.modes, self.modes + 1)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(mode_name(n) for n in self.range)

    @property
    def parameters(self) -> tuple[sp.Symbol, ...]:
        return tuple(sorted(sp.sympify(self.c).free_symbols | sp.sympify(self.c_prime).free_symbols, key=str))

    def central_polynomial(self, n: int) -> sp.Expr:
        sign = -1 if self.variant == "virasoro" else 1
        return sp.expand(self.c * n**3 + sign * self.c_prime * n)

    def in_window(self, *modes: int) -> bool:
        return all(abs(n) <= self.modes for n in modes)


def virasoro_bracket(spec: VirasoroSpec, n: int, m: int) -> tuple[sp.Expr, sp.Expr]:
    """[l_n, l_m] = a·l_{n+m} + b·Ξ, returned as (a, b)."""
    if not spec.in_window(n, m, n + m):
        raise SpecInputError(f"modes {n}, {m} and {n + m} must lie within ±{spec.modes}")
    coefficient = -sp.I * (n - m)
    central = -sp.I / 12 * spec.central_polynomial(n) if n + m == 0 else sp.S.Zero
    return sp.expand(coefficient), sp.expand(central)


def virasoro_algebra(spec: VirasoroSpec) -> ExtendedAlgebra:
    brackets = {}
    for n, m in itertools.combinations(spec.range, 2):
        if not spec.in_window(n + m):
            continue
        a, b = virasoro_bracket(spec, n, m)
        value = {}
        if a != 0:
            value[mode_name(n + m)] = a
        if b != 0:
            value[CENTRAL_NAME] = b
        brackets[(mode_name(n), mode_name(m))] = value
    return ExtendedAlgebra.from_brackets(spec.names, brackets, parameters=spec.parameters)


@dataclass(frozen=True)
class CharacteristicModes:
    modes: tuple[int, ...]
    closed: bool


def virasoro_characteristic(spec: VirasoroSpec) -> CharacteristicModes:
    """Modes whose central term vanishes; every mode when c and c' both vanish."""
    modes = tuple(n for n in spec.range if sp.simplify(spec.central_polynomial(n)) == 0)
    closed = all(
        n + m in modes or not spec.in_window(n + m) or virasoro_bracket(spec, n, m)[0] == 0
        for n, m in itertools.combinations(modes, 2)
    )
    logger.debug("characteristic modes for c=%s, c'=%s: %s", spec.c, spec.c_prime, modes)
    return CharacteristicModes(modes, closed)


def _mode_vector(spec: VirasoroSpec, n: int) -> tuple[sp.Expr, ...]:
    return tuple(sp.S.One if k == n else sp.S.Zero for k in spec.range) + (sp.S.Zero,)


def virasoro_polarizations(spec: VirasoroSpec) -> list[Polarization]:
    """P^(r) = ⟨l_n, n ≤ 0⟩ and, for a resonance r, P_C = ⟨l_kr, k ≥ −1⟩, inside the window."""
    ext = virasoro_algebra(spec)
    char = characteristic_subalgebra(ext)
    darboux = darboux_normal_form(ext)
    out = [
        classify_polarization(
            ext, [_mode_vector(spec, n) for n in spec.range if n <= 0], "P(r)", char=char, darboux=darboux
        )
    ]
    if spec.r is not None:
        modes = [k * spec.r for k in range(-1, spec.modes + 1) if spec.in_window(k * spec.r)]
        out.append(classify_polarization(ext, [_mode_vector(spec, n) for n in modes], "P_C", char=char, darboux=darboux))
    return out


def kac_h(c: sp.Expr, k: int, s: int, branch: int = 1) -> sp.Expr:
    """The quantum anomaly value in its printed form, without a square root.

    h = (13 − c)(k² + s²)/48 ± (c² − 26c + 25)(k² − s²) − 24ks − 2 + 2c
    """
    _check_labels(k, s, branch)
    c = sp.sympify(c)
    return sp.expand(
        sp.Rational(1, 48) * (13 - c) * (k**2 + s**2)
        + branch * (c**2 - 26 * c + 25) * (k**2 - s**2)
        - 24 * k * s
        - 2
        + 2 * c
    )


def kac_h_standard(c: sp.Expr, k: int, s: int, branch: int = 1) -> sp.Expr:
    """Textbook Kac table entry, kept as a cross-check of ``kac_h``.

    h = [(13 − c)(k² + s²) ± √((c − 1)(c − 25))(k² − s²) − 24ks − 2 + 2c]/48
    """
    _check_labels(k, s, branch)
    c = sp.sympify(c)
    root = sp.sqrt((c - 1) * (c - 25))
    return sp.simplify(((13 - c) * (k**2 + s**2) + branch * root * (k**2 - s**2) - 24 * k * s - 2 + 2 * c) / 48)


def _check_labels(k: int, s: int, branch: int) -> None:
    if k < 1 or s < 1:
        raise SpecInputError(f"k and s must be positive integers, got k={k}, s={s}")
    if branch not in (1, -1):
        raise SpecInputError(f"branch must be +1 or -1, got {branch}")


@dataclass(frozen=True)
class ClassicalLine:
    c: sp.Expr
    r: int
    h: sp.Expr
    matches: tuple[tuple[int, int, int], ...]
    scanned: int

    @property
    def has_match(self) -> bool:
        return bool(self.matches)


def classical_anomaly_line(c: sp.Expr, r: int, scan: int = 5, standard: bool = False) -> ClassicalLine:
    """h = −c(r² − 1)/24, and the (k, s, ±) for which the Kac value coincides with it."""
    c = sp.sympify(c)
    h = sp.simplify(-c * (r**2 - 1) / 24)
    evaluate = kac_h_standard if standard else kac_h
    matches = []
    for k, s in itertools.product(range(1, scan + 1), repeat=2):
        for branch in (1, -1):
            if sp.simplify(evaluate(c, k, s, branch) - h) == 0:
                matches.append((k, s, branch))
    return ClassicalLine(c, r, h, tuple(matches), 2 * scan * scan)


def jacobi_window_residuals(spec: VirasoroSpec) -> list[str]:
    """Jacobi identity on triples whose pairwise and total sums stay inside the window."""
    out = []
    for n, m, p in itertools.combinations(spec.range, 3):
        if not spec.in_window(n + m, m + p, n + p, n + m + p):
            continue
        mode_part = central_part = sp.S.Zero
        for a, b, c in ((n, m, p), (m, p, n), (p, n, m)):
            inner, _ = virasoro_bracket(spec, b, c)
            coefficient, central = virasoro_bracket(spec, a, b + c)
            mode_part += inner * coefficient
            central_part += inner * central
        if sp.expand(mode_part) != 0 or sp.simplify(central_part) != 0:
            out.append(f"({n},{m},{p}): {sp.expand(mode_part)} l_{n + m + p} + {sp.simplify(central_part)} Xi")
    return out


def describe_modes(modes: Sequence[int]) -> str:
    return "{" + ", ".join(str(n) for n in sorted(modes, key=lambda n: (abs(n), n))) + "}"


def oscillator_name(mu: int, n: int) -> str:
    return f"a{mu}_{n}" if n >= 0 else f"a{mu}_m{-n}"


def string_algebra(spec: VirasoroSpec, d: int = 1, scale: sp.Expr = sp.S.One) -> ExtendedAlgebra:
    """Virasoro modes plus d oscillator towers α^μ_n on the same window.

    [l_n, α^μ_m] = +i m α^μ_{n+m} and [α^μ_n, α^ν_m] = −i a n δ_{n+m,0} δ^{μν} Ξ.
    """
    if d < 1:
        raise SpecInputError(f"spacetime dimension must be positive, got {d}")
    oscillators = [(mu, n) for mu in range(d) for n in spec.range]
    names = spec.names + tuple(oscillator_name(mu, n) for mu, n in oscillators)
    brackets: dict[tuple[str, str], dict[str, sp.Expr]] = {}
    for n, m in itertools.combinations(spec.range, 2):
        if not spec.in_window(n + m):
            continue
        a, b = virasoro_bracket(spec, n, m)
        brackets[(mode_name(n), mode_name(m))] = {k: v for k, v in ((mode_name(n + m), a), (CENTRAL_NAME, b)) if v != 0}
    for n in spec.range:
        for mu, m in oscillators:
            if m != 0 and spec.in_window(n + m):
                brackets[(mode_name(n), oscillator_name(mu, m))] = {oscillator_name(mu, n + m): sp.I * m}
    for (mu, n), (nu, m) in itertools.combinations(oscillators, 2):
        if mu == nu and n + m == 0 and n != 0:
            brackets[(oscillator_name(mu, n), oscillator_name(nu, m))] = {CENTRAL_NAME: -sp.I * scale * n}
    parameters = tuple(sorted(set(spec.parameters) | sp.sympify(scale).free_symbols, key=str))
    return ExtendedAlgebra.from_brackets(names, brackets, parameters=parameters)


def _grade(name: str) -> int:
    tail = name.rsplit("_", 1)[1]
    return -int(tail[1:]) if tail.startswith("m") else int(tail)


def string_jacobi_residuals(spec: VirasoroSpec, ext: ExtendedAlgebra) -> list[str]:
    """Jacobi identity of the string algebra on triples that stay inside the mode window."""
    names = ext.algebra.names
    grades = [_grade(name) for name in names]
    basis = [ext.basis_vector(name) for name in names]
    out = []
    for a, b, c in itertools.combinations(range(len(names)), 3):
        n, m, p = grades[a], grades[b], grades[c]
        if not spec.in_window(n + m, m + p, n + p, n + m + p):
            continue
        x, y, z = basis[a], basis[b], basis[c]
        total = [
            sp.expand(u + v + w)
            for u, v, w in zip(ext.bracket(x, ext.bracket(y, z)), ext.bracket(y, ext.bracket(z, x)), ext.bracket(z, ext.bracket(x, y)))
        ]
        if any(t != 0 for t in total):
            out.append(f"({names[a]},{names[b]},{names[c]})")
    logger.debug("string algebra Jacobi: %d failing triples", len(out))
    return out
