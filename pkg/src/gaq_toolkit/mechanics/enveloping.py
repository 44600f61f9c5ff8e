"""Universal enveloping algebra of an extended Lie algebra and higher-order polarizations — pure math, no I/O.

An element is a finite sum of words in the generators with commutative
coefficients. Words are tuples of generator indices; the central generator Ξ
has the last index.
"""
from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import sympy as sp

from gaq_toolkit.errors import SpecInputError
from gaq_toolkit.mechanics.extension import ExtendedAlgebra
from gaq_toolkit.mechanics.group_law import AxiomCheck
from gaq_toolkit.mechanics.parser import parse_expr
from gaq_toolkit.mechanics.symbolic import Parameter, SymbolTable, to_text

logger = logging.getLogger(__name__)

Word = tuple[int, ...]


def _clean(terms: Mapping[Word, sp.Expr]) -> dict[Word, sp.Expr]:
    out = {}
    for w, c in terms.items():
        c = sp.expand(c)
        if c != 0:
            out[w] = c
    return out


@dataclass(frozen=True)
class UEAElement:
    """Σ c_w X_{w_1} X_{w_2} ... over words w."""

    names: tuple[str, ...]
    terms: tuple[tuple[Word, sp.Expr], ...] = ()

    @classmethod
    def from_dict(cls, names: Sequence[str], terms: Mapping[Word, sp.Expr]) -> UEAElement:
        cleaned = _clean(terms)
        return cls(tuple(names), tuple(sorted(cleaned.items(), key=lambda kv: (len(kv[0]), kv[0]))))

    def as_dict(self) -> dict[Word, sp.Expr]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return max((len(w) for w, _ in self.terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: UEAElement) -> UEAElement:
        total = self.as_dict()
        for w, c in other.terms:
            total[w] = total.get(w, 0) + c
        return UEAElement.from_dict(self.names, total)

    def __neg__(self) -> UEAElement:
        return self.scale(-1)

    def __sub__(self, other: UEAElement) -> UEAElement:
        return self + (-other)

    def scale(self, c: sp.Expr) -> UEAElement:
        return UEAElement.from_dict(self.names, {w: c * x for w, x in self.terms})

    def __mul__(self, other: UEAElement) -> UEAElement:
        total: dict[Word, sp.Expr] = {}
        for (w1, c1), (w2, c2) in itertools.product(self.terms, other.terms):
            total[w1 + w2] = total.get(w1 + w2, 0) + c1 * c2
        return UEAElement.from_dict(self.names, total)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms:
            word = "*".join(self.names[i] for i in w)
            if not w:
                parts.append(f"({to_text(c)})")
            elif c == 1:
                parts.append(word)
            else:
                parts.append(f"({to_text(c)})*{word}")
        return " + ".join(parts)


@dataclass
class EnvelopingAlgebra:
    """PBW rewriting over an ``ExtendedAlgebra`` with a fixed generator order."""

    ext: ExtendedAlgebra
    order: tuple[str, ...] | None = None
    _cache: dict[Word, dict[Word, sp.Expr]] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        names = self.ext.names
        order = self.order or names
        if sorted(order) != sorted(names):
            raise SpecInputError(f"PBW order must list every generator exactly once: {list(names)}")
        self._rank = {names.index(name): pos for pos, name in enumerate(order)}
        self._central = self.ext.dimension

    @property
    def names(self) -> tuple[str, ...]:
        return self.ext.names

    @property
    def table(self) -> SymbolTable:
        params = tuple(
            Parameter(s.name, positive=bool(s.is_positive), nonzero=bool(s.is_nonzero) and not s.is_positive)
            for s in self.ext.parameters
        )
        return SymbolTable(coordinates=self.names, parameters=params, noncommutative=True)

    def parse(self, text: str) -> UEAElement:
        """Parse a noncommutative polynomial in the generator names, e.g. ``B + (i/(2*a))*x1^2``."""
        expr = parse_expr(text, self.table)
        index = {name: i for i, name in enumerate(self.names)}
        terms: dict[Word, sp.Expr] = {}
        for term in sp.Add.make_args(sp.expand(expr)):
            commutative, noncommutative = term.args_cnc()
            word: list[int] = []
            for factor in noncommutative:
                base, exp = factor.as_base_exp()
                word += [index[base.name]] * int(exp)
            key = tuple(word)
            terms[key] = terms.get(key, 0) + sp.Mul(*commutative)
        return UEAElement.from_dict(self.names, terms)

    def generator(self, name: str) -> UEAElement:
        return UEAElement.from_dict(self.names, {(self.names.index(name),): 1})

    def from_vector(self, v: Sequence[sp.Expr]) -> UEAElement:
        return UEAElement.from_dict(self.names, {(i,): c for i, c in enumerate(v)})

    def scalar(self, c: sp.Expr) -> UEAElement:
        return UEAElement.from_dict(self.names, {(): c})

    def _bracket_terms(self, a: int, b: int) -> dict[Word, sp.Expr]:
        if a == self._central or b == self._central:
            return {}
        n = self.ext.dimension
        u = self.ext.algebra.basis_vector(a) + (sp.S.Zero,)
        v = self.ext.algebra.basis_vector(b) + (sp.S.Zero,)
        br = self.ext.bracket(u, v)
        return {(k,): c for k, c in enumerate(br[: n + 1]) if c != 0}

    def _word_normal_form(self, word: Word) -> dict[Word, sp.Expr]:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if self._rank[a] > self._rank[b]:
                left, right = word[:i], word[i + 2 :]
                out: dict[Word, sp.Expr] = dict(self._word_normal_form(left + (b, a) + right))
                for (k,), c in self._bracket_terms(a, b).items():
                    for w, x in self._word_normal_form(left + (k,) + right).items():
                        out[w] = out.get(w, 0) + c * x
                result = _clean(out)
                break
        else:
            result = {word: sp.S.One}
        self._cache[word] = result
        return result

    def normal_form(self, u: UEAElement) -> UEAElement:
        """PBW normal form: every word ordered by the generator order."""
        total: dict[Word, sp.Expr] = {}
        for w, c in u.terms:
            for w2, x in self._word_normal_form(w).items():
                total[w2] = total.get(w2, 0) + c * x
        return UEAElement.from_dict(self.names, total)

    def commutator(self, u: UEAElement, v: UEAElement) -> UEAElement:
        return self.normal_form(u * v - v * u)

    def central_value(self, u: UEAElement, value: sp.Expr = sp.I) -> UEAElement:
        """Normal form with Ξ replaced by a scalar (equivariance sets Ξ = i)."""
        total: dict[Word, sp.Expr] = {}
        for w, c in self.normal_form(u).terms:
            k = w.count(self._central)
            rest = tuple(x for x in w if x != self._central)
            total[rest] = total.get(rest, 0) + c * value**k
        return UEAElement.from_dict(self.names, total)

    def is_central_polynomial(self, u: UEAElement) -> bool:
        return all(all(x == self._central for x in w) for w, _ in self.normal_form(u).terms)


def _membership(target: UEAElement, candidates: Sequence[UEAElement]) -> bool:
    if target.is_zero:
        return True
    words = sorted({w for e in list(candidates) + [target] for w, _ in e.terms}, key=lambda w: (len(w), w))
    unknowns = sp.symbols(f"k0:{len(candidates)}", cls=sp.Dummy)
    equations = []
    for w in words:
        lhs = sum((k * e.as_dict().get(w, 0) for k, e in zip(unknowns, candidates)), sp.S.Zero)
        equations.append(sp.expand(lhs - target.as_dict().get(w, 0)))
    return bool(sp.linsolve(equations, unknowns))


@dataclass
class HigherOrderReport:
    checks: list[AxiomCheck]
    content: list[str]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def ho_polarization_check(
    uea: EnvelopingAlgebra, elements: Sequence[UEAElement], first_order: Sequence[UEAElement] | None = None
) -> HigherOrderReport:
    """Ξ-exclusion, commutator closure modulo the annihilated left ideal, and vector-field content."""
    names = uea.names
    checks = []

    bad = [e.to_text() for e in elements if e.is_zero or uea.is_central_polynomial(e)]
    checks.append(AxiomCheck("no element is a polynomial in Xi", not bad, bad))

    reduced = [uea.central_value(e) for e in elements]
    generators = [uea.generator(n) for n in names[:-1]]
    candidates = list(reduced) + [uea.central_value(g * e) for g in generators for e in elements]
    residuals = []
    for (i, p), (j, q) in itertools.combinations(enumerate(elements), 2):
        r = uea.central_value(uea.commutator(p, q))
        if not _membership(r, candidates):
            residuals.append(f"[{p.to_text()}, {q.to_text()}] = {r.to_text()}")
    checks.append(AxiomCheck("commutator closure", not residuals, residuals))

    content_elements = [e for e in (uea.normal_form(x) for x in elements) if e.degree <= 1]
    content = [e.to_text() for e in content_elements]
    if first_order is not None:
        declared = [uea.normal_form(x) for x in first_order]
        missing = [d.to_text() for d in declared if not _membership(d, content_elements)]
        extra = [c.to_text() for c in content_elements if not _membership(c, declared)]
        detail = [f"missing {m}" for m in missing] + [f"unexpected {x}" for x in extra]
        checks.append(AxiomCheck("vector-field content", not detail, detail))
    logger.debug("higher-order check: %s", [(c.name, c.passed) for c in checks])
    return HigherOrderReport(checks, content)


def enveloping_closure(uea: EnvelopingAlgebra, first_order: Iterable[Sequence[sp.Expr]]) -> list[UEAElement]:
    """The first-order polarization as enveloping-algebra elements."""
    return [uea.from_vector(v) for v in first_order]
