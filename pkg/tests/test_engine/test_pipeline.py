"""Tests for src/gaq_toolkit/engine/pipeline.py."""
from __future__ import annotations

import pytest
import sympy as sp

from gaq_toolkit.engine.pipeline import (
    run_analyze,
    run_check,
    run_polarize,
    run_represent,
    run_virasoro,
    virasoro_spec,
)
from gaq_toolkit.errors import RepresentationInputError, SpecInputError


def _titles(report):
    return [s.title for s in report.sections]


class TestCheck:
    def test_galilei(self, galilei, config):
        report = run_check(galilei, config)
        assert report.passed
        assert report.command == "check"
        assert _titles(report) == ["group axioms", "cocycle", "subgroups", "Lie algebra"]
        assert report.section("group axioms").values["dimension"] == "3"

    def test_subgroups(self, schrodinger, config):
        report = run_check(schrodinger, config)
        assert report.passed
        assert [c.name for c in report.section("subgroups").checks] == ["hw closes"]

    def test_virasoro(self, load, config):
        report = run_check(load("virasoro"), config)
        assert report.passed
        assert _titles(report) == ["Lie algebra"]


class TestAnalyze:
    def test_heisenberg_weyl(self, hw, config):
        report = run_analyze(hw, config)
        assert report.passed
        assert report.section("quantization form").values["Theta(Xi)"] == "1"
        invariants = dict(report.section("Noether invariants").tables[0].rows)
        assert set(invariants) == {"F_q", "F_v"}

    def test_galilei_characteristic(self, galilei, config):
        section = run_analyze(galilei, config).section("characteristic subalgebra")
        assert section.passed
        assert section.values["dimension"] == "1"
        assert section.tables[0].rows == [["B"]]
        assert section.tables[1].rows == []

    def test_gauge_generator(self, schrodinger, config):
        section = run_analyze(schrodinger, config).section("characteristic subalgebra")
        assert ["A + D"] in section.tables[1].rows

    def test_schrodinger_noether_relations(self, schrodinger, config):
        section = run_analyze(schrodinger, config).section("Noether invariants")
        assert [c.name for c in section.checks] == [
            "F_B - hbar/(2*m*omega)*F_x1^2 = 0",
            "F_C + hbar/(2*m*omega)*F_x2^2 = 0",
            "F_A + F_D = 0",
            "F_A - F_D + hbar/(m*omega)*F_x1*F_x2 = 0",
        ]
        assert all(c.passed and c.residuals == [] for c in section.checks)
        invariants = dict(section.tables[0].rows)
        assert {"F_x1", "F_x2", "F_A", "F_B", "F_C", "F_D"} <= set(invariants)


class TestPolarize:
    def test_heisenberg_weyl(self, hw, config):
        report = run_polarize(hw, config)
        assert report.passed
        assert report.section("symplectic structure").values["rank of Sigma"] == "2"
        assert report.section("symplectic structure").values["kernel"] == "-"
        assert report.section("polarization search").values["found"] == "2"

    def test_template_is_not_anomalous(self, template, config):
        section = run_polarize(template, config).section("anomaly")
        assert section.values["status"] == "not_anomalous"
        assert ["k", "0", "anomalous"] in section.tables[1].rows

    def test_schrodinger(self, schrodinger, config):
        report = run_polarize(schrodinger, config)
        anomaly = report.section("anomaly")
        assert anomaly.values["status"] == "anomalous"
        assert anomaly.values["quotient dimension"] == "2"
        assert report.section("higher-order polarization P_HO_v").passed


class TestRepresent:
    def test_charts(self, hw, config):
        report = run_represent(hw, config, cutoff=4)
        assert report.passed
        assert _titles(report) == ["chart configuration", "chart momentum", "chart bargmann", "chart repulsive"]

    def test_spin(self, su2, config):
        report = run_represent(su2, config, lam=3)
        spin = report.section("spin representation")
        assert spin.passed
        assert spin.values["dimension"] == "4"
        assert spin.values["Casimir"] == "15/4"
        assert spin.values["commutant dimension"] == "1"
        transition = report.section("chart transition")
        assert transition.passed
        assert transition.values["J^4"] == "1"

    def test_metaplectic(self, schrodinger, config):
        report = run_represent(schrodinger, config, cutoff=6)
        meta = report.section("metaplectic representation from P_HO_v")
        assert meta.passed, [c for c in meta.checks if not c.passed]
        assert meta.values["Casimir"] == "-3/16"
        assert meta.values["Bargmann index (even)"] == "1/4"
        assert meta.values["Bargmann index (odd)"] == "3/4"
        assert meta.values["J^4 from exp(2 pi K)"] == "-1"
        assert "J^4 = exp(2 pi K) is scalar on the compact spectrum" in [c.name for c in meta.checks]
        assert report.section("Galilean limit operators").passed
        assert report.section("first-order chart nonfull").passed

    def test_metaplectic_at_larger_cutoff(self, schrodinger, config):
        report = run_represent(schrodinger, config, cutoff=12)
        meta = report.section("metaplectic representation from P_HO_v")
        assert meta.passed, [c for c in meta.checks if not c.passed]
        assert meta.values["cutoff"] == "12"
        assert meta.values["commutant of sl(2)"] == "2"
        assert meta.values["J^4 from exp(2 pi K)"] == "-1"

    def test_unknown_higher_order(self, schrodinger, config):
        with pytest.raises(RepresentationInputError, match="unknown higher-order"):
            run_represent(schrodinger, config, ho="P_HO_w")

    def test_small_cutoff(self, hw, config):
        with pytest.raises(RepresentationInputError, match="cutoff"):
            run_represent(hw, config, cutoff=3)

    def test_no_representation(self, galilei, config):
        with pytest.raises(SpecInputError, match="no \\[representation\\]"):
            run_represent(galilei, config)


class TestVirasoro:
    def test_options_override_the_fixture(self, load, config):
        spec = virasoro_spec(config, load("virasoro"), c="24")
        assert spec.c == 24
        assert spec.c_prime == 96
        assert spec.r == 2

    def test_fixture_values(self, load, config):
        spec = virasoro_spec(config, load("virasoro"))
        assert spec.c_prime == 4 * sp.Symbol("c")

    def test_free_parameters(self, config):
        spec = virasoro_spec(config)
        assert spec.r is None
        assert spec.c_prime == sp.Symbol("cp")

    def test_report(self, config):
        report = run_virasoro(virasoro_spec(config, c="1", r=2), config, level=2)
        assert report.passed, [(s.title, c) for s in report.sections for c in s.checks if not c.passed]
        kac = report.section("anomaly values")
        assert kac.values["classical h"] == "-1/8"
        assert ["1", "1", "+", "-47/2"] in kac.tables[0].rows
        assert report.section("characteristic modes").values["modes"] == "{0, -2, 2}"
        fock = report.section("Fock space")
        assert fock.values["level dimensions"] == "1, 1, 2"
        assert fock.tables[0].rows == [["1", "0"], ["2", "1/2"]]

    def test_string_variant(self, config):
        report = run_virasoro(virasoro_spec(config, c="1", r=2, variant="string"), config, level=2)
        assert report.section("string algebra").passed
