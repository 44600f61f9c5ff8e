"""Tests for src/gaq_toolkit/mechanics/extension.py."""
from __future__ import annotations

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from gaq_toolkit.errors import CocycleError, VerificationError
from gaq_toolkit.mechanics.extension import (
    GeneratingFunction,
    check_cocycle,
    coadjoint_action,
    coboundary_from,
    extend_group,
    noether_invariants,
    pseudo_class,
    quantization_form_checks,
    quantization_one_form,
    theta_lambda,
)
from gaq_toolkit.mechanics.lie_structure import LieStructure, adjoint_matrix
from gaq_toolkit.mechanics.parser import parse_expr

small = st.integers(min_value=-3, max_value=3)


class TestCheckCocycle:
    @pytest.mark.parametrize("name", ["galilei", "hw", "schrodinger"])
    def test_shipped_cocycles(self, load, name):
        group = load(name)
        assert check_cocycle(group.cocycle, group.law).passed

    def test_cubic_function_is_not_a_cocycle(self, hw):
        xi = parse_expr("qp^2*q", hw.law.primed_table)
        report = check_cocycle(xi, hw.law)
        by_name = {c.name: c for c in report.checks}
        assert not by_name["cocycle identity"].passed
        assert by_name["xi(e, g) = 0"].passed

    def test_unnormalized_function_fails_identity_checks(self, hw):
        xi = parse_expr("1", hw.law.primed_table)
        report = check_cocycle(xi, hw.law)
        assert not report.passed

    @given(small, small, small, small)
    def test_coboundary_is_a_cocycle(self, galilei, a, b, c, d):
        law = galilei.law
        B, A, V = law.symbols
        lam = GeneratingFunction(a * B + b * A * V + c * V**2 + d * B * A)
        assert check_cocycle(coboundary_from(lam, law), law).passed

    def test_generating_function_must_vanish_at_identity(self, galilei):
        B, A, V = galilei.law.symbols
        with pytest.raises(CocycleError, match="vanish"):
            coboundary_from(GeneratingFunction(B + 1), galilei.law)


class TestExtendGroup:
    def test_phase_is_last_coordinate(self, hw):
        assert hw.extended.coordinates == ("q", "v", "phi")
        assert hw.extended.phase == "phi"

    def test_inverse_phase(self, hw):
        phi = hw.extended.symbols[-1]
        assert hw.extended.inverse[-1] == -phi

    def test_bad_cocycle_rejected(self, hw):
        xi = parse_expr("qp^2*q", hw.law.primed_table)
        with pytest.raises(CocycleError):
            extend_group(hw.law, xi)

    def test_phase_name_clash(self, hw):
        with pytest.raises(VerificationError, match="already has a coordinate"):
            extend_group(hw.law, sp.S.Zero, phase="q")


class TestLieTwoCocycle:
    def test_hw_sigma(self, hw):
        m, hbar = hw.parameter("m"), hw.parameter("hbar")
        sigma = hw.algebra.sigma
        assert sp.simplify(sigma[0, 1] - m / hbar) == 0
        assert sp.simplify(sigma[1, 0] + m / hbar) == 0

    def test_theta_at_identity(self, galilei):
        assert galilei.algebra.theta == (0, 0, 0, 1)

    def test_trivial_extension_has_zero_sigma(self, su2):
        assert su2.algebra.sigma.is_zero_matrix

    def test_extended_jacobi(self, schrodinger):
        assert schrodinger.algebra.jacobi_residuals() == []

    def test_shift_by_pseudo_cocycle(self, galilei):
        # lambda0 along A turns [B, V] = -A into a central term -1
        shifted = galilei.algebra.shifted((0, 1, 0))
        assert shifted.sigma[0, 2] == -1
        assert galilei.algebra.sigma[0, 2] == 0


class TestQuantizationForm:
    @pytest.mark.parametrize("name", ["galilei", "hw", "su2", "schrodinger"])
    def test_form_checks_pass(self, load, name):
        group = load(name)
        qform = quantization_one_form(group.extended, group.structure, group.scale)
        checks = quantization_form_checks(group.extended, qform, group.structure)
        assert [c.name for c in checks] == ["Theta(Xi) = 1", "L_Xi Theta = 0", "L_XR Theta = 0"]
        assert all(c.passed for c in checks)

    def test_scaled_form(self, hw):
        hbar = hw.parameter("hbar")
        qform = quantization_one_form(hw.extended, hw.structure, hw.scale)
        assert qform.scaled().components[-1] == hbar
        assert qform.base_part().components[-1] == 0


class TestNoetherInvariants:
    def test_hw_invariants(self, hw):
        m, hbar = hw.parameter("m"), hw.parameter("hbar")
        q, v, _ = hw.extended.symbols
        qform = quantization_one_form(hw.extended, hw.structure)
        F = noether_invariants(hw.extended, qform, hw.structure)
        assert set(F) == {"q", "v", "phi"}
        assert sp.simplify(F["q"] - m * v / hbar) == 0
        assert sp.simplify(F["v"] + m * q / hbar) == 0
        assert F["phi"] == 1


class TestPseudoCohomology:
    def test_pseudo_class_is_gradient_at_identity(self, galilei):
        B, A, V = galilei.law.symbols
        lam = GeneratingFunction(3 * B + A * V + V**2)
        assert pseudo_class(lam, galilei.law) == (3, 0, 0)

    @pytest.mark.parametrize("lambda0", [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, -1, 3)])
    def test_theta_lambda_consistent(self, galilei, lambda0):
        result = theta_lambda(lambda0, LieStructure(galilei.law))
        assert result.consistent

    def test_coadjoint_at_identity(self, galilei):
        ad = adjoint_matrix(galilei.law, galilei.law.identity_point())
        assert coadjoint_action(ad, (1, 2, 3)) == (1, 2, 3)
