"""Characteristic subalgebra, Darboux form of Σ, polarization search and anomaly detection — pure math, no I/O.

All vectors are ``ExtendedAlgebra`` vectors: coefficients over the base
generators followed by the Ξ coefficient.
"""
from __future__ import annotations

import itertools
import logging
from collections import deque
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import sympy as sp

from gaq_toolkit.errors import PolarizationDefect
from gaq_toolkit.mechanics.extension import ExtendedAlgebra, shifted_sigma
from gaq_toolkit.mechanics.linear import (
    Vector,
    coordinates_in,
    has_imaginary,
    in_span,
    is_zero_vector,
    nullspace,
    rank,
    span_basis,
    span_key,
)
from gaq_toolkit.mechanics.symbolic import canonical, to_text

logger = logging.getLogger(__name__)

DEFAULT_MAX_QUOTIENT_DIM = 4


def format_vector(names: Sequence[str], v: Sequence[sp.Expr]) -> str:
    terms = []
    for name, c in zip(names, v):
        c = sp.sympify(c)
        if c == 0:
            continue
        if c == 1:
            terms.append(name)
        elif c == -1:
            terms.append(f"-{name}")
        else:
            text = to_text(c)
            terms.append(f"({text})*{name}" if c.is_Add else f"{text}*{name}")
    return " + ".join(terms).replace("+ -", "- ") or "0"


def _base(ext: ExtendedAlgebra, v: Sequence[sp.Expr]) -> Vector:
    return tuple(v[: ext.dimension])


def _lift(ext: ExtendedAlgebra, base: Sequence[sp.Expr]) -> Vector:
    return tuple(base) + (sp.S.Zero,)


@dataclass(frozen=True)
class CharSubalgebra:
    basis: tuple[Vector, ...]
    closed: bool

    @property
    def dimension(self) -> int:
        return len(self.basis)


def characteristic_subalgebra(ext: ExtendedAlgebra) -> CharSubalgebra:
    """Ker Θ ∩ Ker Σ at the identity."""
    n = ext.dimension
    rows = [list(ext.theta)]
    for k in range(n):
        rows.append([ext.sigma[j, k] for j in range(n)] + [sp.S.Zero])
    basis = tuple(nullspace(rows, n + 1))
    closed = all(in_span(basis, ext.bracket(u, v)) for u, v in itertools.combinations(basis, 2))
    if not closed:
        logger.warning("characteristic subalgebra is not closed; check the bracket table")
    return CharSubalgebra(basis, closed)


def gauge_generators(ext: ExtendedAlgebra, char: CharSubalgebra | None = None) -> tuple[Vector, ...]:
    """Characteristic elements commuting with every generator; they act trivially on wave functions."""
    char = char or characteristic_subalgebra(ext)
    if not char.basis:
        return ()
    k = len(char.basis)
    rows = []
    for name in ext.algebra.names:
        images = [ext.bracket(c, ext.basis_vector(name)) for c in char.basis]
        rows += [[images[j][i] for j in range(k)] for i in range(ext.dimension + 1)]
    out = []
    for coefficients in nullspace(rows, k):
        out.append(tuple(canonical(sum((t * c[i] for t, c in zip(coefficients, char.basis)), sp.S.Zero)) for i in range(ext.dimension + 1)))
    return tuple(span_basis(out)) if out else ()


@dataclass(frozen=True)
class DarbouxForm:
    """Σ(u_i, v_i) = c_i on each pair, zero across pairs and on the kernel."""

    pairs: tuple[tuple[Vector, Vector, sp.Expr], ...]
    kernel: tuple[Vector, ...]
    J: sp.ImmutableMatrix

    @property
    def rank(self) -> int:
        return 2 * len(self.pairs)

    @property
    def pivots(self) -> tuple[sp.Expr, ...]:
        return tuple(c for _, _, c in self.pairs)


def _sigma(ext: ExtendedAlgebra, u: Sequence[sp.Expr], v: Sequence[sp.Expr]) -> sp.Expr:
    m = sp.Matrix(list(u)).T * ext.sigma * sp.Matrix(list(v))
    return canonical(m[0, 0])


def darboux_normal_form(ext: ExtendedAlgebra) -> DarbouxForm:
    """Symplectic Gram-Schmidt on the base; pairs keep their pivot instead of a square-root normalization."""
    n = ext.dimension
    remaining: list[Vector] = [tuple(sp.S.One if i == k else sp.S.Zero for i in range(n)) for k in range(n)]
    pairs = []
    while True:
        found = None
        for a, b in itertools.combinations(range(len(remaining)), 2):
            c = _sigma(ext, remaining[a], remaining[b])
            if c != 0:
                found = (a, b, c)
                break
        if found is None:
            break
        a, b, c = found
        u, v = remaining[a], remaining[b]
        pairs.append((u, v, c))
        projected = []
        for k, w in enumerate(remaining):
            if k in (a, b):
                continue
            swv = _sigma(ext, w, v)
            swu = _sigma(ext, w, u)
            w2 = tuple(canonical(wi - swv / c * ui + swu / c * vi) for wi, ui, vi in zip(w, u, v))
            if not is_zero_vector(w2):
                projected.append(w2)
        remaining = projected
    kernel = tuple(span_basis(remaining)) if remaining else ()
    # J in the adapted basis, then back to the standard one
    columns: list[Vector] = []
    images: list[Vector] = []
    for u, v, c in pairs:
        columns += [u, v]
        images += [tuple(-x / c for x in v), tuple(c * x for x in u)]
    for k in kernel:
        columns.append(k)
        images.append(tuple(sp.S.Zero for _ in range(n)))
    B = sp.Matrix.hstack(*[sp.Matrix(list(col)) for col in columns]) if columns else sp.zeros(n, 0)
    if B.shape[1] != n:
        raise PolarizationDefect("Darboux basis does not span the algebra")
    image = sp.Matrix.hstack(*[sp.Matrix(list(col)) for col in images])
    J = (image * B.inv()).applyfunc(canonical)
    logger.debug("Darboux form: %d pairs, kernel dimension %d", len(pairs), len(kernel))
    return DarbouxForm(tuple(pairs), kernel, sp.ImmutableMatrix(J))


@dataclass
class Polarization:
    basis: tuple[Vector, ...]
    names: tuple[str, ...]
    label: str = ""
    closed: bool = False
    isotropic: bool = False
    xi_free: bool = False
    horizontal: bool = False
    full: bool = False
    symplectic: bool = False
    complex: bool = False
    theta_pairings: tuple[sp.Expr, ...] = ()
    defects: list[str] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def passed(self) -> bool:
        return self.closed and self.isotropic and self.xi_free

    def describe(self) -> list[str]:
        return [format_vector(self.names, v) for v in self.basis]

    def flags(self) -> list[str]:
        out = []
        for name in ("horizontal", "full", "symplectic", "complex"):
            if getattr(self, name):
                out.append(name)
        return out


def closure(ext: ExtendedAlgebra, vectors: Sequence[Sequence[sp.Expr]], limit: int | None = None) -> list[Vector] | None:
    """Smallest bracket-closed span containing ``vectors``; None once Ξ enters or ``limit`` is passed."""
    xi = ext.basis_vector(ext.central_name)
    basis = span_basis(vectors)
    while True:
        if in_span(basis, xi):
            return None
        if limit is not None and len(basis) > limit:
            return None
        new = [ext.bracket(u, v) for u, v in itertools.combinations(basis, 2)]
        new = [w for w in new if not in_span(basis, w)]
        if not new:
            return basis
        basis = span_basis(basis + new[:1])


def classify_polarization(
    ext: ExtendedAlgebra,
    basis: Sequence[Sequence[sp.Expr]],
    label: str = "",
    char: CharSubalgebra | None = None,
    darboux: DarbouxForm | None = None,
) -> Polarization:
    """Closure, isotropy, Ξ-exclusion, horizontality, fullness and maximal rank of a given basis."""
    basis = tuple(tuple(sp.sympify(x) for x in v) for v in basis)
    char = char or characteristic_subalgebra(ext)
    darboux = darboux or darboux_normal_form(ext)
    defects: list[str] = []
    names = ext.names

    closed = True
    for u, v in itertools.combinations(basis, 2):
        w = ext.bracket(u, v)
        if not in_span(basis, w):
            closed = False
            defects.append(f"[{format_vector(names, u)}, {format_vector(names, v)}] = {format_vector(names, w)} leaves the span")
    isotropic = True
    for u, v in itertools.combinations(basis, 2):
        s = _sigma(ext, _base(ext, u), _base(ext, v))
        if s != 0:
            isotropic = False
            defects.append(f"Sigma({format_vector(names, u)}, {format_vector(names, v)}) = {to_text(s)}")
    xi_free = not in_span(basis, ext.basis_vector(ext.central_name))
    if not xi_free:
        defects.append("span contains Xi")
    pairings = tuple(canonical(ext.theta_value(v)) for v in basis)
    horizontal = all(p == 0 for p in pairings)
    full = all(in_span(basis, g) for g in char.basis)
    bases = [_base(ext, v) for v in basis]
    j_images = [tuple(darboux.J * sp.Matrix(list(b))) for b in bases]
    extended = [b for b in bases + j_images if not is_zero_vector(b)]
    sigma_rank = rank([list(ext.sigma.row(i)) for i in range(ext.dimension)]) if ext.dimension else 0
    restricted = _restricted_rank(ext, extended)
    symplectic = restricted == sigma_rank
    return Polarization(
        basis=basis,
        names=names,
        label=label,
        closed=closed,
        isotropic=isotropic,
        xi_free=xi_free,
        horizontal=horizontal,
        full=full,
        symplectic=symplectic,
        complex=has_imaginary(basis),
        theta_pairings=pairings,
        defects=defects,
    )


def _restricted_rank(ext: ExtendedAlgebra, vectors: Sequence[Vector]) -> int:
    if not vectors:
        return 0
    span = span_basis(vectors)
    gram = sp.Matrix(len(span), len(span), lambda a, b: _sigma(ext, span[a], span[b]))
    return rank([list(gram.row(i)) for i in range(gram.rows)])


def _eigenvectors(ext: ExtendedAlgebra, h: Sequence[sp.Expr]) -> list[Vector]:
    ad = ext.algebra.adjoint_matrix(_base(ext, h))
    out = []
    for _value, _mult, vecs in ad.eigenvects():
        for v in vecs:
            out.append(_lift(ext, [canonical(x) for x in v]))
    return out


def search_family(
    ext: ExtendedAlgebra, seeds: Sequence[Sequence[sp.Expr]] = (), diagonal: Sequence[Sequence[sp.Expr]] = ()
) -> list[Vector]:
    family: list[Vector] = [ext.basis_vector(name) for name in ext.algebra.names]
    for h in diagonal:
        family += _eigenvectors(ext, h)
    family += [tuple(sp.sympify(x) for x in s) for s in seeds]
    unique: list[Vector] = []
    keys = set()
    for v in family:
        key = span_key([v])
        if key and key not in keys:
            keys.add(key)
            unique.append(v)
    return unique


def _isotropic(ext: ExtendedAlgebra, basis: Sequence[Vector]) -> bool:
    return all(_sigma(ext, _base(ext, u), _base(ext, v)) == 0 for u, v in itertools.combinations(basis, 2))


def find_polarizations(
    ext: ExtendedAlgebra,
    seeds: Sequence[Sequence[sp.Expr]] = (),
    diagonal: Sequence[Sequence[sp.Expr]] = (),
    max_dim: int | None = None,
) -> list[Polarization]:
    """Maximal isotropic Ξ-free subalgebras spanned by closures over the search family.

    The family holds the generator basis, eigenvectors of ad(h) for each
    ``diagonal`` element and the user ``seeds``.
    """
    family = search_family(ext, seeds, diagonal)
    char = characteristic_subalgebra(ext)
    darboux = darboux_normal_form(ext)
    limit = max_dim if max_dim is not None else ext.dimension

    seen: dict[tuple, list[Vector]] = {}
    extendable: set[tuple] = set()
    queue: deque[list[Vector]] = deque()
    for f in family:
        start = closure(ext, [f], limit)
        if start is not None and _isotropic(ext, start):
            key = span_key(start)
            if key not in seen:
                seen[key] = start
                queue.append(start)
    while queue:
        current = queue.popleft()
        key = span_key(current)
        for f in family:
            if in_span(current, f):
                continue
            grown = closure(ext, current + [f], limit)
            if grown is None or not _isotropic(ext, grown):
                continue
            extendable.add(key)
            gkey = span_key(grown)
            if gkey not in seen:
                seen[gkey] = grown
                queue.append(grown)
    logger.debug("polarization search visited %d subalgebras over a family of %d", len(seen), len(family))

    maximal = [b for k, b in seen.items() if k not in extendable]
    maximal = [b for b in maximal if not any(o is not b and len(o) > len(b) and all(in_span(o, v) for v in b) for o in maximal)]
    out = [classify_polarization(ext, b, char=char, darboux=darboux) for b in maximal]
    out.sort(key=lambda p: (-p.dimension, p.describe()))
    for i, p in enumerate(out):
        p.label = p.label or f"P{i + 1}"
    return out


@dataclass(frozen=True)
class Horizontalization:
    alpha: Vector
    free_dimension: int
    shifted: ExtendedAlgebra
    horizontal_basis: tuple[Vector, ...]


def horizontalize(ext: ExtendedAlgebra, pol: Polarization) -> Horizontalization:
    """Solve Σ_i α_i a^i_(k) = −a⁰_(k), so that Θ + α_i θ^i annihilates the polarization."""
    n = ext.dimension
    if not pol.xi_free:
        raise PolarizationDefect("cannot horizontalize a span that contains Xi")
    alpha = sp.symbols(f"alpha0:{n}", cls=sp.Dummy)
    equations = [
        sp.expand(sum((alpha[i] * v[i] for i in range(n)), sp.S.Zero) + ext.theta_value(v)) for v in pol.basis
    ]
    solutions = sp.linsolve(equations, alpha)
    if not solutions:
        raise PolarizationDefect(f"no left-invariant correction makes {pol.label or 'the polarization'} horizontal")
    solution = next(iter(solutions))
    free = set().union(*(sp.sympify(x).free_symbols for x in solution)) & set(alpha)
    particular = tuple(canonical(sp.sympify(x).xreplace({a: 0 for a in alpha})) for x in solution)
    shifted = ext.shifted(particular)
    # in the pseudo-extended basis the Ξ component of an element is Θ'(element), now zero
    basis = tuple(tuple(v[:n]) + (sp.S.Zero,) for v in pol.basis)
    logger.debug("horizontalization of %s: %d free directions", pol.label, len(free))
    return Horizontalization(particular, len(free), shifted, basis)


@dataclass
class AnomalyReport:
    status: str
    reason: str
    characteristic: tuple[Vector, ...]
    quotient_dimension: int
    polarizations: list[Polarization] = field(default_factory=list)
    classical_values: list[dict] = field(default_factory=list)

    @property
    def anomalous(self) -> bool:
        return self.status == "anomalous"


def _quotient_omega(darboux: DarbouxForm) -> sp.Matrix:
    dim = darboux.rank
    omega = sp.zeros(dim, dim)
    for i, (_, _, c) in enumerate(darboux.pairs):
        omega[2 * i, 2 * i + 1] = c
        omega[2 * i + 1, 2 * i] = -c
    return omega


def _numerator(e: sp.Expr) -> sp.Expr:
    return sp.expand(sp.numer(sp.together(e)))


def _closed_lagrangians(
    ext: ExtendedAlgebra, char: CharSubalgebra, darboux: DarbouxForm
) -> list[tuple[list[Vector], set[sp.Symbol]]]:
    """Lagrangian subspaces L of the quotient whose preimage G_C + L + Ξ is a subalgebra.

    Each chart writes L as the graph x ↦ (x, Sx) over one coordinate of every
    Darboux pair. Isotropy is linear in S and is solved first; closure of the
    preimage is then solved for the remaining entries, so every member of a
    returned family satisfies both. Families come back as lifted base vectors
    together with the chart unknowns still free in them.
    """
    n = ext.dimension
    p = len(darboux.pairs)
    dim = darboux.rank
    uv = [x for u, v, _ in darboux.pairs for x in (u, v)]
    frame = sp.Matrix.hstack(*[sp.Matrix(list(c)) for c in uv + list(darboux.kernel)])
    inverse = frame.inv().applyfunc(canonical)
    omega = _quotient_omega(darboux)
    families: list[tuple[list[Vector], set[sp.Symbol]]] = []
    for choice in itertools.product((0, 1), repeat=p):
        x_idx = [2 * i + choice[i] for i in range(p)]
        y_idx = [2 * i + 1 - choice[i] for i in range(p)]
        S = sp.Matrix(p, p, lambda k, l: sp.Dummy(f"S_{k}_{l}"))
        unknowns = list(S)
        graph = []
        for k in range(p):
            vec = [sp.S.Zero] * dim
            vec[x_idx[k]] = sp.S.One
            for l in range(p):
                vec[y_idx[l]] += S[k, l]
            graph.append(sp.Matrix(vec))
        isotropy = [_numerator((graph[a].T * omega * graph[b])[0, 0]) for a, b in itertools.combinations(range(p), 2)]
        isotropy = [e for e in isotropy if e != 0]
        partials = sp.solve(isotropy, unknowns, dict=True) if isotropy else [{}]
        for partial in partials:
            S_p = S.xreplace(partial)
            lifted = [
                _lift(ext, [canonical(sum((vec[i] * uv[i][a] for i in range(dim)), sp.S.Zero).xreplace(partial)) for a in range(n)])
                for vec in graph
            ]
            equations = []
            for u, v in [(g, q) for g in char.basis for q in lifted] + list(itertools.combinations(lifted, 2)):
                coords = inverse * sp.Matrix(list(ext.bracket(u, v)[:n]))
                mu = [coords[x_idx[k]] for k in range(p)]
                for l in range(p):
                    equations.append(_numerator(coords[y_idx[l]] - sum((mu[k] * S_p[k, l] for k in range(p)), sp.S.Zero)))
            equations = [e for e in equations if e != 0]
            remaining = [s for s in unknowns if s not in partial]
            if not equations:
                solutions = [{}]
            elif not remaining:
                solutions = []
            else:
                solutions = sp.solve(equations, remaining, dict=True)
            for sol in solutions:
                member = [tuple(canonical(sp.sympify(x).xreplace(sol)) for x in v) for v in lifted]
                free = {s for v in member for x in v for s in x.free_symbols} & set(unknowns)
                families.append((member, free))
    logger.debug("closed Lagrangian families: %d", len(families))
    return families


def _members(vectors: list[Vector], free: set[sp.Symbol]) -> Iterator[list[Vector]]:
    """Finite members of a solution family, the free chart unknowns set to small integers."""
    if not free:
        yield vectors
        return
    for value in (0, 1, -1, 2, 3):
        member = [tuple(canonical(x.xreplace({s: value for s in free})) for x in v) for v in vectors]
        if not any(x.has(sp.zoo, sp.nan, sp.oo) for v in member for x in v):
            yield member


def _xi_free_lift(ext: ExtendedAlgebra, char: CharSubalgebra, lifted: Sequence[Vector]) -> list[Vector] | None:
    """Kernel of a functional f on G_C + lifted + Ξ with f(Ξ) = 1 that vanishes on G_C and on all brackets.

    None when Ξ lies in that span, i.e. no Ξ-free subalgebra has this preimage.
    """
    xi = ext.basis_vector(ext.central_name)
    preimage = list(char.basis) + list(lifted)
    derived = [ext.bracket(u, v) for u, v in itertools.combinations(preimage, 2)]
    basis = span_basis(list(char.basis) + [w for w in derived if not is_zero_vector(w)])
    if in_span(basis, xi):
        return None
    for v in lifted:
        if coordinates_in(basis + [xi], v) is None:
            basis = basis + [v]
    return basis


def _decide(ext: ExtendedAlgebra, max_quotient_dim: int) -> AnomalyReport:
    char = characteristic_subalgebra(ext)
    darboux = darboux_normal_form(ext)
    dim = darboux.rank
    if dim == 0:
        pol = classify_polarization(ext, [ext.basis_vector(n) for n in ext.algebra.names], "whole algebra", char, darboux)
        return AnomalyReport("not_anomalous", "Sigma vanishes; the whole algebra polarizes", char.basis, 0, [pol])
    if dim > max_quotient_dim:
        return AnomalyReport(
            "incomplete",
            f"symplectic quotient of dimension {dim} exceeds the enumeration limit {max_quotient_dim}",
            char.basis,
            dim,
        )
    try:
        families = _closed_lagrangians(ext, char, darboux)
    except NotImplementedError as exc:
        logger.warning("closure equations not solved: %s", exc)
        return AnomalyReport("incomplete", f"closure equations could not be solved exactly: {exc}", char.basis, dim)
    polarizations: list[Polarization] = []
    keys: set = set()
    for vectors, free in families:
        for member in _members(vectors, free):
            basis = _xi_free_lift(ext, char, member)
            if basis is None:
                continue
            key = span_key(basis)
            if key in keys:
                break
            pol = classify_polarization(ext, basis, char=char, darboux=darboux)
            if pol.passed and pol.full and pol.symplectic:
                keys.add(key)
                pol.label = f"P{len(polarizations) + 1}"
                polarizations.append(pol)
                break
    if polarizations:
        return AnomalyReport("not_anomalous", "full and symplectic polarization found", char.basis, dim, polarizations)
    return AnomalyReport(
        "anomalous",
        "no Lagrangian subspace of the quotient has a Xi-free subalgebra over it",
        char.basis,
        dim,
    )


def detect_anomaly(ext: ExtendedAlgebra, max_quotient_dim: int = DEFAULT_MAX_QUOTIENT_DIM) -> AnomalyReport:
    """Decide whether a full and symplectic polarization exists, then re-decide at classical parameter values."""
    report = _decide(ext, max_quotient_dim)
    darboux = darboux_normal_form(ext)
    for pivot in darboux.pivots:
        for sym in sorted(sp.sympify(pivot).free_symbols & set(ext.parameters), key=str):
            for root in sp.solve(pivot, sym):
                special = ext.subs({sym: root})
                sub = _decide(special, max_quotient_dim)
                report.classical_values.append({"parameter": str(sym), "value": to_text(root), "status": sub.status})
    logger.info("anomaly decision: %s (%s)", report.status, report.reason)
    return report


def shifted_rank(ext: ExtendedAlgebra, alpha: Sequence[sp.Expr]) -> int:
    m = shifted_sigma(ext, alpha)
    return rank([list(m.row(i)) for i in range(m.rows)])
