"""Tests for src/gaq_toolkit/mechanics/lie_structure.py."""
from __future__ import annotations

import pytest
import sympy as sp

from gaq_toolkit.errors import VerificationError
from gaq_toolkit.mechanics.lie_structure import (
    LieAlgebra,
    LieStructure,
    adjoint_matrix,
    commutator,
    commuting_residuals,
    duality_residuals,
    exterior_derivative,
    maurer_cartan_residuals,
)


def _params(group):
    return group.parameter("m"), group.parameter("hbar")


class TestInvariantFields:
    def test_hw_left_fields(self, hw):
        m, hbar = _params(hw)
        q, v, phi = hw.extended.symbols
        X_q, X_v, X_phi = hw.structure.left_fields
        assert X_q.components == (1, 0, sp.expand(-m * v / (2 * hbar)))
        assert X_v.components == (0, 1, sp.expand(m * q / (2 * hbar)))
        assert X_phi.components == (0, 0, 1)

    def test_hw_right_fields(self, hw):
        m, hbar = _params(hw)
        q, v, phi = hw.extended.symbols
        X_q, X_v, _ = hw.structure.right_fields
        assert sp.simplify(X_q.component("phi") - m * v / (2 * hbar)) == 0
        assert sp.simplify(X_v.component("phi") + m * q / (2 * hbar)) == 0

    @pytest.mark.parametrize("name", ["galilei", "hw", "su2", "schrodinger"])
    def test_left_and_right_commute(self, load, name):
        structure = load(name).structure
        assert commuting_residuals(structure.left_fields, structure.right_fields) == []

    def test_commutator_is_antisymmetric(self, galilei):
        X, Y = galilei.structure.left_fields[0], galilei.structure.left_fields[2]
        assert (commutator(X, Y) + commutator(Y, X)).is_zero


class TestStructureConstants:
    def test_galilei_brackets(self, galilei):
        algebra = galilei.structure.algebra
        B, A, V = (algebra.basis_vector(n) for n in ("B", "A", "V"))
        assert algebra.bracket(B, V)[:3] == (0, -1, 0)
        assert algebra.bracket(A, V)[:3] == (0, 0, 0)

    def test_galilei_central_entry(self, galilei):
        m, hbar = _params(galilei)
        algebra = galilei.structure.algebra
        bracket = algebra.bracket(algebra.basis_vector("A"), algebra.basis_vector("V"))
        assert sp.simplify(bracket[3] - m / hbar) == 0

    def test_antisymmetry_and_jacobi(self, su2):
        algebra = su2.structure.algebra
        assert algebra.antisymmetry_residuals() == []
        assert algebra.jacobi_residuals() == []

    def test_jacobi_violation_detected(self):
        algebra = LieAlgebra.from_brackets(("a", "b", "c"), {("a", "b"): {"a": 1}, ("b", "c"): {"b": 1}})
        assert algebra.jacobi_residuals()

    def test_unknown_generator_rejected(self):
        with pytest.raises(VerificationError):
            LieAlgebra.from_brackets(("a", "b"), {("a", "z"): {"a": 1}})

    def test_adjoint_of_algebra_element(self):
        algebra = LieAlgebra.from_brackets(("h", "e"), {("h", "e"): {"e": 2}})
        ad_h = algebra.adjoint_matrix(algebra.basis_vector("h"))
        assert ad_h == sp.Matrix([[0, 0], [0, 2]])


PUBLISHED_TABLES = {
    "hw": {
        ("q", "v"): "(m/hbar)*Xi",
    },
    "su2": {
        ("z1", "z2"): "z2",
        ("z1", "z1s"): "0",
        ("z1", "z2s"): "-z2s",
        ("z1s", "z2"): "-z2",
        ("z1s", "z2s"): "z2s",
        ("z2", "z2s"): "-z1 + z1s",
    },
    "schrodinger": {
        ("A", "B"): "B",
        ("A", "C"): "-C",
        ("A", "D"): "0",
        ("B", "C"): "A - D",
        ("B", "D"): "B",
        ("C", "D"): "-C",
        ("x1", "x2"): "(m*omega/hbar)*Xi",
        ("A", "x1"): "x1/2",
        ("A", "x2"): "-x2/2",
        ("B", "x1"): "0",
        ("B", "x2"): "x1",
        ("C", "x1"): "x2",
        ("C", "x2"): "0",
        ("D", "x1"): "-x1/2",
        ("D", "x2"): "x2/2",
    },
}


def _table_cases():
    for name, table in PUBLISHED_TABLES.items():
        for (left, right), expected in table.items():
            yield pytest.param(name, left, right, expected, id=f"{name}-[{left},{right}]")


class TestPublishedTables:
    @pytest.mark.parametrize("name, left, right, expected", list(_table_cases()))
    def test_bracket_entry(self, load, name, left, right, expected):
        group = load(name)
        ext = group.algebra
        got = ext.bracket(ext.basis_vector(left), ext.basis_vector(right))
        want = group.vector(expected) if expected != "0" else (0,) * (ext.dimension + 1)
        assert all(sp.simplify(g - w) == 0 for g, w in zip(got, want)), got

    @pytest.mark.parametrize("name", list(PUBLISHED_TABLES))
    def test_unlisted_pairs_commute(self, load, name):
        ext = load(name).algebra
        listed = {frozenset(pair) for pair in PUBLISHED_TABLES[name]}
        for j, left in enumerate(ext.algebra.names):
            for right in ext.algebra.names[j + 1:]:
                if frozenset((left, right)) in listed:
                    continue
                got = ext.bracket(ext.basis_vector(left), ext.basis_vector(right))
                assert all(sp.simplify(g) == 0 for g in got), (left, right, got)

    def test_schrodinger_table_is_complete(self, load):
        names = load("schrodinger").algebra.algebra.names
        assert len(PUBLISHED_TABLES["schrodinger"]) == len(names) * (len(names) - 1) // 2


class TestMaurerCartan:
    @pytest.mark.parametrize("name", ["galilei", "hw", "su2"])
    def test_forms_are_dual_and_satisfy_structure_equation(self, load, name):
        structure = load(name).structure
        forms = structure.maurer_cartan.forms
        assert duality_residuals(forms, structure.left_fields) == []
        assert maurer_cartan_residuals(forms, structure.algebra) == []

    def test_hw_phase_form(self, hw):
        m, hbar = _params(hw)
        q, v, _ = hw.extended.symbols
        theta = hw.structure.maurer_cartan.forms[-1]
        expected = (sp.expand(m * v / (2 * hbar)), sp.expand(-m * q / (2 * hbar)), 1)
        assert tuple(sp.expand(c) for c in theta.components) == expected

    def test_exterior_derivative_of_exact_form_vanishes(self, galilei):
        forms = galilei.structure.maurer_cartan.forms
        # the B-row is dB
        assert exterior_derivative(forms[0]).is_zero


class TestAdjoint:
    def test_identity_gives_identity_matrix(self, galilei):
        law = galilei.law
        assert adjoint_matrix(law, law.identity_point()) == sp.eye(3)

    def test_abelian_group_is_trivial(self, load):
        law = load("rk").law
        assert adjoint_matrix(law, law.generic_point("1")) == sp.eye(3)


def test_lie_structure_field_lookup(galilei):
    structure = LieStructure(galilei.law)
    assert structure.field("V").name == "V"
    assert structure.field("V", side="right").components[2] == 1
