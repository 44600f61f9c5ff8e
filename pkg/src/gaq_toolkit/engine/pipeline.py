"""Runs one command end to end: definition file in, ``Report`` out.

Each ``run_*`` function only orchestrates. The mathematics lives in
``gaq_toolkit.mechanics``; every expression leaves here as canonical text.
"""
from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Mapping, Sequence

import sympy as sp

from gaq_toolkit.engine.spec_builder import BuiltGroup
from gaq_toolkit.errors import NonClosureError, PolarizationDefect, RepresentationInputError, SpecFileError, SpecInputError, VerificationError
from gaq_toolkit.mechanics.enveloping import ho_polarization_check
from gaq_toolkit.mechanics.extension import (
    check_cocycle,
    coadjoint_action,
    noether_invariants,
    pseudo_class,
    quantization_form_checks,
    quantization_one_form,
    theta_lambda,
)
from gaq_toolkit.mechanics.fock import FockSpace, central_slope, string_polarization_check, sugawara_operators
from gaq_toolkit.mechanics.group_law import AxiomCheck, GroupPoint, invert, verify_group_axioms
from gaq_toolkit.mechanics.lie_structure import LieStructure, adjoint_matrix, commuting_residuals, maurer_cartan_residuals
from gaq_toolkit.mechanics.parser import parse_expr
from gaq_toolkit.mechanics.polarization import (
    Polarization,
    characteristic_subalgebra,
    classify_polarization,
    darboux_normal_form,
    detect_anomaly,
    find_polarizations,
    format_vector,
    gauge_generators,
    horizontalize,
)
from gaq_toolkit.mechanics.representation import (
    chart_transition,
    higher_order_reduction,
    metaplectic_representation,
    polarized_space,
    relation_breakdown,
    schrodinger_limit_operators,
    su2_representation,
)
from gaq_toolkit.mechanics.symbolic import Parameter, SymbolTable, canonical, to_text
from gaq_toolkit.mechanics.virasoro import (
    VirasoroSpec,
    classical_anomaly_line,
    describe_modes,
    jacobi_window_residuals,
    kac_h,
    kac_h_standard,
    mode_name,
    string_algebra,
    string_jacobi_residuals,
    virasoro_bracket,
    virasoro_characteristic,
    virasoro_polarizations,
)
from gaq_toolkit.models.config import ToolkitConfig
from gaq_toolkit.models.report import CheckEntry, Report, Section, Table
from gaq_toolkit.models.spec_file import HigherOrderSpec

logger = logging.getLogger(__name__)

KAC_LABELS = 3
LIMIT_PARAMETERS = ("m", "hbar", "omega")


def _entries(checks: Iterable[AxiomCheck]) -> list[CheckEntry]:
    return [CheckEntry(name=c.name, passed=c.passed, residuals=list(c.residuals)) for c in checks]


def _entry(name: str, residuals: Sequence[str]) -> CheckEntry:
    return CheckEntry(name=name, passed=not residuals, residuals=list(residuals))


def _report(command: str, group: BuiltGroup | None, config: ToolkitConfig, source: str | None = None) -> Report:
    return Report(
        schema_version=config.report.schema_version,
        command=command,
        source=source or (group.source if group is not None else "<options>"),
    )


def _polarization_row(pol: Polarization) -> list[str]:
    return [pol.label, "<" + ", ".join(pol.describe()) + ">", ", ".join(pol.flags()) or "-", "yes" if pol.passed else "no"]


def _operator_table(title: str, operators: Mapping[str, object]) -> Table:
    return Table(title=title, columns=["generator", "operator"], rows=[[name, op.to_text()] for name, op in operators.items()])


def _matrix_table(title: str, m: sp.Matrix) -> Table:
    return Table(
        title=title,
        columns=[str(j) for j in range(m.cols)],
        rows=[[to_text(m[i, j]) for j in range(m.cols)] for i in range(m.rows)],
    )


# -- check --


def run_check(group: BuiltGroup, config: ToolkitConfig) -> Report:
    """Group axioms, cocycle identity, subgroup closure and the Jacobi identity."""
    report = _report("check", group, config)
    cocycle_ok = True
    if group.is_group:
        law = group.law
        axioms = verify_group_axioms(law, config.analysis.jet_order)
        try:
            method = invert(law, config.analysis.jet_order).method
        except VerificationError:
            method = "unavailable"
        report.sections.append(
            Section(
                title="group axioms",
                checks=_entries(axioms.checks),
                values={"group": law.name, "dimension": str(law.dimension), "inverse": method},
            )
        )
        if group.spec.extension is not None:
            cocycle = check_cocycle(group.cocycle, law)
            cocycle_ok = cocycle.passed
            report.sections.append(
                Section(title="cocycle", checks=_entries(cocycle.checks), values={"xi": to_text(group.cocycle)})
            )
        if group.spec.subgroups and cocycle_ok:
            checks = []
            for sub in group.spec.subgroups:
                try:
                    group.subgroup(sub.label)
                except NonClosureError as exc:
                    checks.append(CheckEntry(name=f"{sub.label} closes", passed=False, residuals=[exc.residual or str(exc)]))
                else:
                    checks.append(CheckEntry(name=f"{sub.label} closes", passed=True))
            report.sections.append(Section(title="subgroups", checks=checks))
    if group.kind == "virasoro":
        residuals = jacobi_window_residuals(group.virasoro)
    elif cocycle_ok and (group.spec.extension is not None or not group.is_group):
        residuals = group.algebra.jacobi_residuals()
    else:
        residuals = None
    if residuals is not None:
        report.sections.append(Section(title="Lie algebra", checks=[_entry("Jacobi identity", residuals)]))
    report.seal()
    logger.info("check %s: %s", group.spec.id, "pass" if report.passed else "FAIL")
    return report


# -- analyze --


def _bracket_table(group: BuiltGroup) -> Table:
    ext = group.algebra
    rows = []
    for a, b in itertools.combinations(ext.algebra.names, 2):
        value = ext.bracket(ext.basis_vector(a), ext.basis_vector(b))
        if any(x != 0 for x in value):
            rows.append([f"[{a}, {b}]", format_vector(ext.names, value)])
    return Table(title="commutators", columns=["bracket", "value"], rows=rows)


def _characteristic_section(group: BuiltGroup) -> Section:
    ext = group.algebra
    char = characteristic_subalgebra(ext)
    gauge = gauge_generators(ext, char)
    section = Section(
        title="characteristic subalgebra",
        checks=[CheckEntry(name="characteristic subalgebra is closed", passed=char.closed)],
        values={"dimension": str(char.dimension)},
        tables=[
            Table(title="basis", columns=["element"], rows=[[format_vector(ext.names, v)] for v in char.basis]),
            Table(title="gauge generators", columns=["element"], rows=[[format_vector(ext.names, v)] for v in gauge]),
        ],
    )
    section.notes += [f"{format_vector(ext.names, v)} is a gauge generator" for v in gauge]
    return section


def _noether_section(group: BuiltGroup) -> Section:
    law, structure = group.extended, group.structure
    qform = quantization_one_form(law, structure, group.scale)
    invariants = {name: value for name, value in noether_invariants(law, qform, structure).items() if name != law.phase}
    section = Section(
        title="Noether invariants",
        tables=[Table(title="F = Theta(X^R)", columns=["invariant", "value"], rows=[[f"F_{n}", to_text(v)] for n, v in invariants.items()])],
    )
    names = tuple(f"F_{n}" for n in invariants)
    table = SymbolTable(coordinates=names, parameters=group.parameters)
    values = {table.symbol(f"F_{n}"): v for n, v in invariants.items()}
    rel = law.table.relations
    for text in group.spec.analysis.noether_relations:
        try:
            relation = parse_expr(text, table)
        except SpecInputError as exc:
            raise SpecFileError(f"{group.source}: noether relation {text!r}: {exc}") from None
        residual = canonical(relation.xreplace(values), rel)
        section.checks.append(CheckEntry(name=f"{text} = 0", passed=residual == 0, residuals=[] if residual == 0 else [to_text(residual)]))
    return section


def _adjoint_section(group: BuiltGroup) -> Section:
    law = group.law
    values = group.values(group.spec.analysis.adjoint_point, law.table)
    missing = [n for n in law.coordinates + law.auxiliary_names if n not in values]
    if missing:
        raise SpecFileError(f"{group.source}: adjoint_point misses {missing}")
    point = GroupPoint(tuple(values[c] for c in law.coordinates), tuple(values[a] for a in law.auxiliary_names))
    Ad = adjoint_matrix(law, point)
    algebra = LieStructure(law).algebra
    bad = []
    for i, j in itertools.combinations(range(algebra.dimension), 2):
        ei, ej = algebra.basis_vector(i), algebra.basis_vector(j)
        lhs = Ad * sp.Matrix(list(algebra.bracket(ei, ej)))
        rhs = algebra.bracket(tuple(Ad * sp.Matrix(list(ei))), tuple(Ad * sp.Matrix(list(ej))))
        if any(canonical(a - b) != 0 for a, b in zip(lhs, rhs)):
            bad.append(f"[{algebra.names[i]}, {algebra.names[j]}]")
    section = Section(
        title="adjoint action",
        checks=[_entry("Ad(g) preserves the brackets", bad)],
        values={"point": ", ".join(f"{k} = {to_text(v)}" for k, v in values.items())},
        tables=[_matrix_table("Ad(g)", Ad)],
    )
    if group.generating_function is not None:
        lam0 = pseudo_class(group.generating_function, law)
        section.values["coadjoint image of the pseudo-class"] = ", ".join(to_text(x) for x in coadjoint_action(Ad, lam0))
    return section


def run_analyze(group: BuiltGroup, config: ToolkitConfig) -> Report:
    """Invariant fields, structure constants, Θ, Σ, characteristic subalgebra and Noether invariants."""
    report = _report("analyze", group, config)
    ext = group.algebra
    commutators = Section(title="Lie algebra", tables=[_bracket_table(group)])
    commutators.checks.append(_entry("Jacobi identity", ext.jacobi_residuals() if group.kind != "virasoro" else jacobi_window_residuals(group.virasoro)))
    if group.is_group:
        structure, law = group.structure, group.extended
        report.sections.append(
            Section(
                title="invariant vector fields",
                tables=[
                    Table(title="left", columns=["generator", "field"], rows=[[X.name, X.to_text()] for X in structure.left_fields]),
                    Table(title="right", columns=["generator", "field"], rows=[[X.name, X.to_text()] for X in structure.right_fields]),
                ],
                checks=[_entry("left and right fields commute", commuting_residuals(structure.left_fields, structure.right_fields))],
            )
        )
        commutators.checks.append(
            _entry("Maurer-Cartan equations", maurer_cartan_residuals(structure.maurer_cartan.forms, structure.algebra))
        )
    report.sections.append(commutators)

    sigma_rows = [
        [ext.algebra.names[j], ext.algebra.names[k], to_text(ext.sigma[j, k])]
        for j, k in itertools.combinations(range(ext.dimension), 2)
        if ext.sigma[j, k] != 0
    ]
    quantization = Section(
        title="quantization form",
        values={f"Theta({n})": to_text(t) for n, t in zip(ext.names, ext.theta)},
        tables=[Table(title="Sigma", columns=["X", "Y", "Sigma(X, Y)"], rows=sigma_rows)],
    )
    if group.is_group:
        qform = quantization_one_form(group.extended, group.structure, group.scale)
        quantization.values["Theta"] = qform.scaled().to_text()
        quantization.checks += _entries(quantization_form_checks(group.extended, qform, group.structure))
    report.sections.append(quantization)
    report.sections.append(_characteristic_section(group))

    if group.is_group:
        report.sections.append(_noether_section(group))
        if group.generating_function is not None:
            lam0 = pseudo_class(group.generating_function, group.law)
            tl = theta_lambda(lam0, LieStructure(group.law), group.generating_function)
            report.sections.append(
                Section(
                    title="pseudo-cohomology",
                    values={"lambda0": ", ".join(to_text(x) for x in lam0), "Theta_lambda": tl.form.to_text()},
                    checks=[CheckEntry(name="d Theta_lambda matches the structure constants", passed=tl.consistent)],
                )
            )
        if group.spec.analysis.adjoint_point:
            report.sections.append(_adjoint_section(group))
    return report.seal()


# -- polarize --


def _higher_order_section(group: BuiltGroup, ho: HigherOrderSpec) -> Section:
    uea = group.enveloping(ho.order)
    elements = group.elements(uea, ho.elements)
    first = group.elements(uea, ho.first_order) if ho.first_order else None
    result = ho_polarization_check(uea, elements, first)
    return Section(
        title=f"higher-order polarization {ho.label}",
        checks=_entries(result.checks),
        tables=[Table(title="vector-field content", columns=["element"], rows=[[c] for c in result.content])],
    )


def run_polarize(group: BuiltGroup, config: ToolkitConfig) -> Report:
    """Classify declared polarizations, search for more, decide the anomaly and check higher-order ones."""
    report = _report("polarize", group, config)
    ext = group.algebra
    darboux = darboux_normal_form(ext)
    report.sections.append(
        Section(
            title="symplectic structure",
            values={
                "rank of Sigma": str(darboux.rank),
                "pivots": ", ".join(to_text(p) for p in darboux.pivots) or "-",
                "kernel": ", ".join(format_vector(ext.names, k) for k in darboux.kernel) or "-",
            },
        )
    )

    columns = ["label", "basis", "flags", "polarization"]
    declared = Section(title="declared polarizations")
    rows = []
    for spec in group.spec.polarizations:
        algebra = group.algebra_for(spec.subgroup)
        pol = classify_polarization(algebra, group.polarization(spec.label), spec.label)
        rows.append(_polarization_row(pol))
        declared.checks.append(CheckEntry(name=f"{spec.label} is a polarization", passed=pol.passed, residuals=pol.defects))
        if pol.passed and not pol.horizontal:
            try:
                h = horizontalize(algebra, pol)
            except PolarizationDefect as exc:
                declared.notes.append(f"{spec.label}: {exc}")
            else:
                alpha = ", ".join(to_text(a) for a in h.alpha)
                declared.notes.append(f"{spec.label} becomes horizontal with alpha = ({alpha}), {h.free_dimension} free directions")
    if group.kind == "virasoro":
        for pol in virasoro_polarizations(group.virasoro):
            rows.append(_polarization_row(pol))
    declared.tables.append(Table(title="polarizations", columns=columns, rows=rows))
    report.sections.append(declared)

    if group.kind != "virasoro":
        seeds = [group.vector(s) for s in group.spec.analysis.seeds]
        diagonal = [group.vector(group.spec.analysis.diagonal)] if group.spec.analysis.diagonal else []
        max_dim = group.spec.analysis.max_dim or config.analysis.max_polarization_dim
        found = find_polarizations(ext, seeds, diagonal, max_dim)
        report.sections.append(
            Section(
                title="polarization search",
                values={"found": str(len(found))},
                tables=[Table(title="maximal polarizations", columns=columns, rows=[_polarization_row(p) for p in found])],
            )
        )

    if group.spec.analysis.anomaly:
        anomaly = detect_anomaly(ext, config.analysis.anomaly_max_quotient_dim)
        section = Section(
            title="anomaly",
            values={
                "status": anomaly.status,
                "quotient dimension": str(anomaly.quotient_dimension),
                "characteristic": ", ".join(format_vector(ext.names, v) for v in anomaly.characteristic) or "-",
            },
            notes=[anomaly.reason],
            tables=[
                Table(title="full and symplectic polarizations", columns=columns, rows=[_polarization_row(p) for p in anomaly.polarizations]),
                Table(
                    title="classical parameter values",
                    columns=["parameter", "value", "status"],
                    rows=[[v["parameter"], v["value"], v["status"]] for v in anomaly.classical_values],
                ),
            ],
        )
        report.sections.append(section)

    for ho in group.spec.higher_order:
        report.sections.append(_higher_order_section(group, ho))
    return report.seal()


# -- represent --


def _find_higher_order(group: BuiltGroup, label: str) -> HigherOrderSpec:
    for ho in group.spec.higher_order:
        if ho.label in (label, f"P_HO_{label}"):
            return ho
    known = [ho.label for ho in group.spec.higher_order]
    raise RepresentationInputError(f"unknown higher-order polarization {label!r}; known {known}")


def _polarized_sections(group: BuiltGroup, size: int) -> list[Section]:
    out = []
    for spec in group.spec.charts:
        chart = group.chart(spec.label)
        space = polarized_space(
            group.law_for(spec.subgroup),
            group.polarization(spec.polarization),
            chart,
            group.structure_for(spec.subgroup),
            size,
        )
        out.append(
            Section(
                title=f"chart {spec.label}",
                checks=_entries(space.checks),
                values={"polarization": spec.polarization, "wave function": chart.describe()},
                tables=[_operator_table("right operators", space.operators)],
            )
        )
    return out


def _su2_sections(group: BuiltGroup, lam: int) -> list[Section]:
    rep = group.spec.representation
    if rep.chart is None or rep.parameter is None:
        raise SpecFileError(f"{group.source}: an su2 representation needs chart and parameter")
    chart_spec = group.chart_spec(rep.chart)
    spin = su2_representation(
        group.extended,
        group.polarization(chart_spec.polarization),
        group.chart(rep.chart),
        group.parameter(rep.parameter),
        lam,
        group.structure,
    )
    weights = Table(
        title="weights on the highest and lowest monomials",
        columns=["generator", "on 1", f"on tau^{spin.lam}"],
        rows=[[name, to_text(a), to_text(b)] for name, (a, b) in spin.weights.items()],
    )
    section = Section(
        title="spin representation",
        checks=_entries(spin.checks),
        values={
            "lambda": str(spin.lam),
            "dimension": str(spin.dimension),
            "Casimir": to_text(spin.casimir) if spin.casimir is not None else "not scalar",
            "expected Casimir": to_text(spin.expected_casimir),
            "commutant dimension": str(spin.commutant_dimension),
            "highest-weight annihilators": ", ".join(spin.extremal["highest"]) or "-",
            "lowest-weight annihilators": ", ".join(spin.extremal["lowest"]) or "-",
        },
        tables=[_operator_table("right operators", spin.space.operators), weights],
    )
    out = [section]
    if rep.transition:
        element = group.values(rep.transition, group.extended.table)
        t = chart_transition(spin.space, element)
        out.append(
            Section(
                title="chart transition",
                checks=[CheckEntry(name="J^4 is scalar", passed=t.j4_scalar is not None)],
                values={
                    "multiplier": to_text(t.multiplier),
                    "J^2": to_text(t.j2_scalar) if t.j2_scalar is not None else "not scalar",
                    "J^4": to_text(t.j4_scalar) if t.j4_scalar is not None else "not scalar",
                },
                tables=[_matrix_table("J on the monomial basis", t.matrix)],
            )
        )
    return out


def _metaplectic_sections(group: BuiltGroup, size: int, ho_label: str | None) -> list[Section]:
    rep = group.spec.representation
    ho = _find_higher_order(group, ho_label or rep.higher_order or "")
    if ho.basic_chart is None:
        raise SpecFileError(f"{group.source}: {ho.label} names no basic chart")
    if rep.sl2 is None or rep.compact is None or rep.fock_scale is None:
        raise SpecFileError(f"{group.source}: a metaplectic representation needs sl2, compact and fock_scale")
    chart_spec = group.chart_spec(ho.basic_chart)
    basic = polarized_space(
        group.law_for(chart_spec.subgroup),
        group.polarization(chart_spec.polarization),
        group.chart(ho.basic_chart),
        group.structure_for(chart_spec.subgroup),
    )
    uea = group.enveloping(ho.order)
    elements = group.elements(uea, ho.elements)
    operators = higher_order_reduction(uea, elements, basic.operators)
    sl2 = {"H": group.vector(rep.sl2.H), "E": group.vector(rep.sl2.E), "F": group.vector(rep.sl2.F)}
    scale = parse_expr(rep.fock_scale, group.parameter_table)
    meta = metaplectic_representation(group.algebra, operators, sl2, group.vector(rep.compact), scale, size, rep.extra)
    out = [
        Section(
            title=f"basic operators on chart {ho.basic_chart}",
            checks=_entries(basic.checks),
            values={"wave function": group.chart(ho.basic_chart).describe()},
            tables=[_operator_table("basic right operators", basic.operators)],
        ),
        Section(
            title=f"metaplectic representation from {ho.label}",
            checks=_entries(meta.checks),
            values={
                "cutoff": str(size - 1),
                "Casimir": to_text(meta.casimir) if meta.casimir is not None else "not scalar",
                "stable window": str(meta.casimir_window),
                "Bargmann index (even)": to_text(meta.bargmann_indices["even"]),
                "Bargmann index (odd)": to_text(meta.bargmann_indices["odd"]),
                "J^4 from exp(2 pi K)": to_text(meta.j4_scalar) if meta.j4_scalar is not None else "not scalar",
                "commutant of sl(2)": str(meta.commutant_sl2),
                "commutant with extra generators": str(meta.commutant_full),
            },
            tables=[
                _operator_table("reduced right operators", operators),
                Table(title="compact generator spectrum", columns=["n", "eigenvalue"], rows=[[str(n), to_text(v)] for n, v in enumerate(meta.compact_spectrum)]),
            ],
        ),
    ]
    if rep.limit:
        keys = ("momentum", "position", "energy")
        missing = [k for k in keys if k not in rep.limit]
        if missing:
            raise SpecFileError(f"{group.source}: representation.limit misses {missing}")
        mass, hbar, omega = (group.parameter(n) for n in LIMIT_PARAMETERS)
        limit = schrodinger_limit_operators(operators, mass, hbar, omega, tuple(rep.limit[k] for k in keys), size)
        out.append(
            Section(
                title="Galilean limit operators",
                checks=_entries(limit.checks),
                values={
                    "p": limit.momentum.to_text(),
                    "q": limit.position.to_text(),
                    "E": limit.energy.to_text(),
                    "[p, q]": limit.weyl.to_text(),
                },
            )
        )
    if rep.breakdown_chart:
        chart_spec = group.chart_spec(rep.breakdown_chart)
        space = polarized_space(
            group.law_for(chart_spec.subgroup),
            group.polarization(chart_spec.polarization),
            group.chart(rep.breakdown_chart),
            group.structure_for(chart_spec.subgroup),
        )
        relations = {text: e for text, e in zip(ho.elements, elements) if text not in ho.first_order}
        breakdown = relation_breakdown(space, relations)
        out.append(
            Section(
                title=f"first-order chart {rep.breakdown_chart}",
                checks=_entries(space.checks)
                + [CheckEntry(name="a higher-order relation fails on the non-full polarization", passed=bool(breakdown.broken))],
                values={"wave function": group.chart(rep.breakdown_chart).describe()},
                tables=[
                    _operator_table("right operators", space.operators),
                    Table(
                        title="higher-order relations",
                        columns=["relation", "residual"],
                        rows=[[label, r.to_text()] for label, r in breakdown.residuals.items()],
                    ),
                ],
            )
        )
    return out


def run_represent(
    group: BuiltGroup,
    config: ToolkitConfig,
    lam: int | None = None,
    cutoff: int | None = None,
    ho: str | None = None,
) -> Report:
    """Right operators on the polarized space the definition file requests."""
    rep = group.spec.representation
    if rep is None or not group.is_group:
        raise SpecInputError(f"{group.spec.id} has no [representation] section")
    cutoff = cutoff if cutoff is not None else config.representation.cutoff
    if cutoff < 4:
        raise RepresentationInputError(f"cutoff must be at least 4, got {cutoff}")
    report = _report("represent", group, config)
    if rep.kind == "su2":
        report.sections += _su2_sections(group, lam if lam is not None else config.representation.su2_lambda)
    elif rep.kind == "metaplectic":
        report.sections += _metaplectic_sections(group, cutoff + 1, ho)
    else:
        report.sections += _polarized_sections(group, cutoff + 1)
    return report.seal()


# -- virasoro --

VIRASORO_TABLE = SymbolTable(parameters=(Parameter("c"), Parameter("cp")))


def _virasoro_value(text: str | None) -> sp.Expr | None:
    return None if text is None else parse_expr(text, VIRASORO_TABLE)


def virasoro_spec(
    config: ToolkitConfig,
    group: BuiltGroup | None = None,
    c: str | None = None,
    cp: str | None = None,
    r: int | None = None,
    modes: int | None = None,
    variant: str | None = None,
) -> VirasoroSpec:
    """Options override the definition file, which overrides the configuration."""
    base = group.virasoro if group is not None else None
    modes = modes or (base.modes if base else config.virasoro.modes)
    variant = variant or (base.variant if base else config.virasoro.variant)
    c_value = _virasoro_value(c) if c is not None else (base.c if base else sp.Symbol("c"))
    overridden = c is not None or r is not None
    r = r if r is not None else (base.r if base else None)
    if cp is not None:
        return VirasoroSpec(modes, c_value, _virasoro_value(cp), r, variant)
    if base is not None and not overridden:
        return VirasoroSpec(modes, base.c, base.c_prime, base.r, variant)
    if r is not None:
        return VirasoroSpec.resonant(c_value, r, modes, variant)
    return VirasoroSpec(modes, c_value, sp.Symbol("cp"), None, variant)


def run_virasoro(
    spec: VirasoroSpec,
    config: ToolkitConfig,
    level: int | None = None,
    dimension: int | None = None,
    standard: bool = False,
    source: str = "<options>",
) -> Report:
    """Truncated Virasoro algebra, its polarizations, the anomaly values and the Sugawara check."""
    report = _report("virasoro", None, config, source)
    level = level or config.virasoro.level
    dimension = dimension or config.virasoro.dimension
    rows = []
    for n in range(1, spec.modes + 1):
        a, b = virasoro_bracket(spec, n, -n)
        rows.append([f"[{mode_name(n)}, {mode_name(-n)}]", f"{to_text(a)}*l_0 + ({to_text(b)})*Xi"])
    report.sections.append(
        Section(
            title="algebra",
            values={"modes": f"-{spec.modes}..{spec.modes}", "c": to_text(spec.c), "c'": to_text(spec.c_prime), "variant": spec.variant},
            checks=[_entry("Jacobi identity inside the window", jacobi_window_residuals(spec))],
            tables=[Table(title="central terms", columns=["bracket", "value"], rows=rows)],
        )
    )

    char = virasoro_characteristic(spec)
    report.sections.append(
        Section(
            title="characteristic modes",
            values={"modes": describe_modes(char.modes)},
            checks=[CheckEntry(name="characteristic modes close", passed=char.closed)],
        )
    )
    pols = virasoro_polarizations(spec)
    report.sections.append(
        Section(
            title="polarizations",
            tables=[Table(title="polarizations", columns=["label", "basis", "flags", "polarization"], rows=[_polarization_row(p) for p in pols])],
        )
    )

    evaluate = kac_h_standard if standard else kac_h
    kac_rows = [
        [str(k), str(s), "+" if branch == 1 else "-", to_text(evaluate(spec.c, k, s, branch))]
        for k, s in itertools.product(range(1, KAC_LABELS + 1), repeat=2)
        for branch in (1, -1)
    ]
    kac = Section(
        title="anomaly values",
        values={"formula": "standard" if standard else "printed"},
        tables=[Table(title="h(c, k, s)", columns=["k", "s", "branch", "h"], rows=kac_rows)],
    )
    if spec.r is not None:
        line = classical_anomaly_line(spec.c, spec.r, standard=standard)
        kac.values["classical h"] = to_text(line.h)
        kac.values["matching labels"] = ", ".join(f"({k},{s},{'+' if b == 1 else '-'})" for k, s, b in line.matches) or "none"
    report.sections.append(kac)

    if spec.variant == "string":
        scale = parse_expr(config.virasoro.oscillator_scale, VIRASORO_TABLE)
        algebra = string_algebra(spec, dimension, scale)
        report.sections.append(
            Section(title="string algebra", checks=[_entry("Jacobi identity inside the window", string_jacobi_residuals(spec, algebra))])
        )

    report.sections.append(_fock_section(config, level, dimension))
    return report.seal()


def _fock_section(config: ToolkitConfig, level: int, dimension: int) -> Section:
    scale = parse_expr(config.virasoro.oscillator_scale, VIRASORO_TABLE)
    zero = parse_expr(config.virasoro.zero_mode, VIRASORO_TABLE)
    space = FockSpace(dimension, level, scale, (zero,) * dimension)
    result = string_polarization_check(space, modes=min(2, level))
    dims = sorted({1, 2, dimension})
    slope = central_slope(dims, level, m=min(2, level))
    ratios = {sp.simplify(v / d) for d, v in slope.items()}
    sugawara = sugawara_operators(dimension, level, 1, scale, (zero,) * dimension)
    return Section(
        title="Fock space",
        checks=_entries(result.checks) + [CheckEntry(name="central term is linear in d", passed=len(ratios) == 1)],
        values={
            "d": str(dimension),
            "level cutoff": str(level),
            "states": str(len(space.basis)),
            "level dimensions": ", ".join(str(n) for n in result.level_dimensions),
            "exact columns of L_1": str(len(sugawara.exact_columns)),
        },
        tables=[
            Table(title="central terms", columns=["m", "value"], rows=[[str(m), to_text(v)] for m, v in result.central_terms.items()]),
            Table(title="central term by dimension", columns=["d", "value"], rows=[[str(d), to_text(v)] for d, v in slope.items()]),
            Table(
                title="L_0 spectrum",
                columns=["level", "eigenvalues"],
                rows=[[str(k), ", ".join(to_text(x) for x in v)] for k, v in result.l0_spectrum.items()],
            ),
        ],
    )
