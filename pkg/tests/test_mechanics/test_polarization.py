"""Tests for src/gaq_toolkit/mechanics/polarization.py."""
from __future__ import annotations

import itertools

import pytest
import sympy as sp

from gaq_toolkit.errors import PolarizationDefect
from gaq_toolkit.mechanics.extension import ExtendedAlgebra
from gaq_toolkit.mechanics.polarization import (
    characteristic_subalgebra,
    classify_polarization,
    closure,
    darboux_normal_form,
    detect_anomaly,
    find_polarizations,
    format_vector,
    gauge_generators,
    horizontalize,
    shifted_rank,
)


class TestCharacteristicSubalgebra:
    def test_hw_has_none(self, hw):
        char = characteristic_subalgebra(hw.algebra)
        assert char.dimension == 0
        assert gauge_generators(hw.algebra, char) == ()

    def test_galilei_time(self, galilei):
        char = characteristic_subalgebra(galilei.algebra)
        assert char.basis == ((1, 0, 0, 0),)
        assert char.closed

    def test_galilei_time_is_not_gauge(self, galilei):
        # [B, V] = -A, so time evolution acts nontrivially
        assert gauge_generators(galilei.algebra) == ()

    def test_schrodinger_gauge_generator(self, schrodinger):
        gauge = gauge_generators(schrodinger.algebra)
        assert gauge == (schrodinger.vector("A + D"),)

    def test_su2_gauge_generator(self, su2):
        assert gauge_generators(su2.algebra) == (su2.vector("z1 + z1s"),)


class TestDarboux:
    def test_hw_single_pair(self, hw):
        darboux = darboux_normal_form(hw.algebra)
        m, hbar = hw.parameter("m"), hw.parameter("hbar")
        assert darboux.rank == 2
        assert darboux.kernel == ()
        assert sp.simplify(darboux.pivots[0] - m / hbar) == 0

    def test_galilei_kernel_is_time(self, galilei):
        darboux = darboux_normal_form(galilei.algebra)
        assert darboux.rank == 2
        assert darboux.kernel == ((1, 0, 0),)

    def test_j_squares_to_minus_one_on_quotient(self, hw):
        J = darboux_normal_form(hw.algebra).J
        assert J * J == -sp.eye(2)


class TestClassifyPolarization:
    def test_configuration_polarization(self, hw):
        pol = classify_polarization(hw.algebra, hw.polarization("P_q"), "P_q")
        assert pol.passed
        assert pol.flags() == ["horizontal", "full", "symplectic"]
        assert pol.describe() == ["v"]

    def test_complex_polarization(self, hw):
        pol = classify_polarization(hw.algebra, hw.polarization("P_c"), "P_c")
        assert pol.passed
        assert pol.complex

    def test_non_isotropic_span(self, hw):
        pol = classify_polarization(hw.algebra, [hw.vector("q"), hw.vector("v")])
        assert not pol.isotropic
        assert not pol.closed
        assert any(d.startswith("Sigma(q, v)") for d in pol.defects)

    def test_xi_is_excluded(self, hw):
        pol = classify_polarization(hw.algebra, [hw.vector("Xi")])
        assert not pol.xi_free
        assert "span contains Xi" in pol.defects

    def test_galilei_time_polarization_is_full(self, galilei):
        pol = classify_polarization(galilei.algebra, galilei.polarization("P_t"), "P_t")
        assert pol.passed
        assert pol.full and pol.symplectic and pol.horizontal

    def test_without_time_not_full(self, galilei):
        pol = classify_polarization(galilei.algebra, [galilei.vector("A")])
        assert pol.passed
        assert not pol.full

    def test_su2_polarization_not_horizontal(self, su2):
        pol = classify_polarization(su2.algebra, su2.polarization("P_nh"), "P_nh")
        assert pol.passed
        assert not pol.horizontal


class TestFindPolarizations:
    def test_hw_finds_both_real_polarizations(self, hw):
        found = find_polarizations(hw.algebra)
        assert sorted(p.describe()[0] for p in found) == ["q", "v"]
        assert [p.label for p in found] == ["P1", "P2"]

    def test_seeds_add_candidates(self, hw):
        found = find_polarizations(hw.algebra, seeds=[hw.vector("q + v")])
        assert len(found) == 3

    def test_closure_stops_at_xi(self, hw):
        assert closure(hw.algebra, [hw.vector("q"), hw.vector("v")]) is None


class TestHorizontalize:
    def test_su2_correction(self, su2):
        pol = classify_polarization(su2.algebra, su2.polarization("P_nh"), "P_nh")
        h = horizontalize(su2.algebra, pol)
        n = su2.algebra.dimension
        for v in pol.basis:
            total = sum((a * x for a, x in zip(h.alpha, v[:n])), sp.S.Zero) + su2.algebra.theta_value(v)
            assert sp.simplify(total) == 0
        assert all(v[-1] == 0 for v in h.horizontal_basis)

    def test_xi_span_rejected(self, hw):
        pol = classify_polarization(hw.algebra, [hw.vector("Xi")])
        with pytest.raises(PolarizationDefect):
            horizontalize(hw.algebra, pol)

    def test_shifted_rank(self, galilei):
        assert shifted_rank(galilei.algebra, (0, 0, 0)) == 2
        assert shifted_rank(galilei.algebra, (0, 1, 0)) == 2


_SHEAR = sp.Matrix([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [0, 0, 0, 1]])
_LOWER = sp.Matrix([[1, 0, 0, 0], [2, 1, 0, 0], [1, -1, 1, 0], [0, 3, 1, 1]])
FILIFORM_CHANGES = [sp.eye(4), _SHEAR, _LOWER, _SHEAR * _LOWER, _LOWER * _SHEAR]


def _filiform(change: sp.Matrix) -> ExtendedAlgebra:
    """[e1,e2] = e3, [e1,e3] = e4 with Sigma = e1^e4 + e2^e3, written in f_a = sum_i change[a,i] e_i.

    <e3, e4> is a Lagrangian ideal whatever the basis.
    """
    plain = ExtendedAlgebra.from_brackets(("e1", "e2", "e3", "e4"), {
        ("e1", "e2"): {"e3": 1},
        ("e1", "e3"): {"e4": 1},
        ("e1", "e4"): {"Xi": 1},
        ("e2", "e3"): {"Xi": 1},
    })
    names = ("f1", "f2", "f3", "f4")
    back = change.T.inv()
    brackets = {}
    for a, b in itertools.combinations(range(4), 2):
        w = plain.bracket(tuple(change.row(a)) + (0,), tuple(change.row(b)) + (0,))
        coefficients = back * sp.Matrix(list(w[:4]))
        brackets[(names[a], names[b])] = {**dict(zip(names, coefficients)), "Xi": w[4]}
    return ExtendedAlgebra.from_brackets(names, brackets)


class TestDetectAnomaly:
    def test_hw_not_anomalous(self, hw):
        report = detect_anomaly(hw.algebra)
        assert report.status == "not_anomalous"
        assert len(report.polarizations) == 2

    def test_schrodinger_anomalous(self, schrodinger):
        report = detect_anomaly(schrodinger.algebra)
        assert report.anomalous
        assert report.quotient_dimension == 2

    def test_template_with_central_term(self, template):
        report = detect_anomaly(template.algebra)
        assert report.status == "not_anomalous"
        assert all(p.full and p.symplectic for p in report.polarizations)

    def test_template_anomalous_at_classical_value(self, template):
        report = detect_anomaly(template.algebra)
        assert {"parameter": "k", "value": "0", "status": "anomalous"} in report.classical_values

    def test_template_without_central_term(self, template):
        k = template.parameter("k")
        assert detect_anomaly(template.algebra.subs({k: 0})).anomalous

    def test_quotient_limit(self, template):
        assert detect_anomaly(template.algebra, max_quotient_dim=2).status == "incomplete"

    @pytest.mark.parametrize("change", FILIFORM_CHANGES)
    def test_lagrangian_ideal_found_in_any_basis(self, change):
        ext = _filiform(change)
        back = change.T.inv()
        ideal = [tuple(back * sp.Matrix([0, 0, 1, 0])) + (0,), tuple(back * sp.Matrix([0, 0, 0, 1])) + (0,)]
        pol = classify_polarization(ext, ideal)
        assert pol.passed and pol.full and pol.symplectic

        report = detect_anomaly(ext)
        assert report.status == "not_anomalous"
        assert report.quotient_dimension == 4
        assert all(p.passed and p.full and p.symplectic for p in report.polarizations)


@pytest.mark.parametrize("vector, expected", [
    ((1, 0, 0), "q"),
    ((1, -1, 0), "q - v"),
    ((0, 2, sp.Symbol("a") + 1), "2*v + (a + 1)*Xi"),
    ((0, 0, 0), "0"),
])
def test_format_vector(vector, expected):
    assert format_vector(("q", "v", "Xi"), vector) == expected
