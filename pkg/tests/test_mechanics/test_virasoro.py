"""Tests for src/gaq_toolkit/mechanics/virasoro.py."""
from __future__ import annotations

import pytest
import sympy as sp

from gaq_toolkit.errors import SpecInputError
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

c, cp = sp.symbols("c cp")


class TestSpec:
    def test_names(self):
        spec = VirasoroSpec(modes=2)
        assert spec.names == ("l_m2", "l_m1", "l_0", "l_1", "l_2")
        assert mode_name(-3) == "l_m3"

    @pytest.mark.parametrize(
        "kwargs",
        [{"modes": 1}, {"variant": "superstring"}, {"r": 0}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(SpecInputError):
            VirasoroSpec(**kwargs)

    def test_resonant(self):
        spec = VirasoroSpec.resonant(c, 2)
        assert spec.c_prime == 4 * c
        assert VirasoroSpec.resonant(c, 2, variant="string").c_prime == -4 * c


class TestAlgebra:
    def test_bracket(self):
        spec = VirasoroSpec(modes=3)
        assert virasoro_bracket(spec, 1, -1) == (-2 * sp.I, sp.expand(-sp.I / 12 * (c - cp)))
        assert virasoro_bracket(spec, 2, 1) == (-sp.I, 0)

    def test_bracket_outside_window(self):
        with pytest.raises(SpecInputError, match="within"):
            virasoro_bracket(VirasoroSpec(modes=2), 2, 1)

    @pytest.mark.parametrize("variant", ["virasoro", "string"])
    def test_jacobi(self, variant):
        assert jacobi_window_residuals(VirasoroSpec(modes=3, variant=variant)) == []

    def test_string_algebra_jacobi(self):
        spec = VirasoroSpec(modes=2, variant="string")
        ext = string_algebra(spec, d=1)
        assert "a0_m1" in ext.names
        assert string_jacobi_residuals(spec, ext) == []

    def test_string_algebra_needs_a_dimension(self):
        with pytest.raises(SpecInputError):
            string_algebra(VirasoroSpec(), d=0)


class TestCharacteristic:
    def test_generic(self):
        char = virasoro_characteristic(VirasoroSpec(modes=3))
        assert char.modes == (0,)
        assert char.closed

    def test_resonance(self):
        char = virasoro_characteristic(VirasoroSpec.resonant(c, 2, modes=3))
        assert char.modes == (-2, 0, 2)
        assert char.closed
        assert describe_modes(char.modes) == "{0, -2, 2}"

    def test_trivial_extension(self):
        char = virasoro_characteristic(VirasoroSpec(modes=2, c=sp.S.Zero, c_prime=sp.S.Zero))
        assert char.modes == (-2, -1, 0, 1, 2)
        assert char.closed

    def test_zero_c_with_linear_term_keeps_only_zero(self):
        char = virasoro_characteristic(VirasoroSpec(modes=3, c=sp.S.Zero, c_prime=sp.Integer(5)))
        assert char.modes == (0,)

    def test_polarizations(self):
        pols = virasoro_polarizations(VirasoroSpec.resonant(c, 2, modes=3))
        assert [p.label for p in pols] == ["P(r)", "P_C"]


class TestKac:
    @pytest.mark.parametrize(
        "c_value, k, s, branch, expected",
        [
            (1, 1, 1, 1, sp.Rational(-47, 2)),
            (sp.Rational(1, 2), 2, 1, 1, sp.Rational(-1051, 96)),
            (sp.Rational(1, 2), 2, 1, -1, sp.Rational(-8107, 96)),
        ],
    )
    def test_printed_formula(self, c_value, k, s, branch, expected):
        assert kac_h(c_value, k, s, branch) == expected

    @pytest.mark.parametrize(
        "branch, expected",
        [(1, sp.Rational(1, 2)), (-1, sp.Rational(1, 16))],
    )
    def test_standard_formula_ising(self, branch, expected):
        assert kac_h_standard(sp.Rational(1, 2), 2, 1, branch) == expected

    @pytest.mark.parametrize("k, s, branch", [(0, 1, 1), (1, -2, 1), (1, 1, 0)])
    def test_labels(self, k, s, branch):
        with pytest.raises(SpecInputError):
            kac_h(c, k, s, branch)


class TestClassicalLine:
    @pytest.mark.parametrize("c_value, r, h", [(1, 2, sp.Rational(-1, 8)), (24, 2, -3)])
    def test_values(self, c_value, r, h):
        line = classical_anomaly_line(c_value, r)
        assert line.h == h
        assert line.scanned == 50

    def test_trivial_resonance(self):
        assert classical_anomaly_line(c, 1).h == 0
