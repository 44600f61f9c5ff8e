"""Tests for src/gaq_toolkit/mechanics/operators.py."""
from __future__ import annotations

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from gaq_toolkit.errors import RepresentationInputError
from gaq_toolkit.mechanics.operators import (
    DiffOperator,
    LadderOperator,
    commutant,
    commutator_residual,
    ladder_from_diff,
    stable_window,
)

y, p = sp.Symbol("y"), sp.Symbol("p")
s = sp.Symbol("s", positive=True)
D = DiffOperator.partial((y,), y)
Y = DiffOperator.multiplication((y,), y)


class TestDiffOperator:
    def test_heisenberg_relation(self):
        assert D.commutator(Y) == DiffOperator.identity((y,))

    def test_compose_uses_leibniz(self):
        product = D @ Y
        assert product.coefficient((1,)) == y
        assert product.coefficient((0,)) == 1

    def test_power_and_order(self):
        assert D.power(2) == DiffOperator.partial((y,), y, 2)
        assert D.power(3).order == 3
        assert D.power(0) == DiffOperator.identity((y,))

    @given(st.integers(min_value=0, max_value=6), st.integers(min_value=0, max_value=4))
    def test_apply_on_monomials(self, n, k):
        assert D.power(k).apply(y**n) == sp.expand(sp.ff(n, k) * y ** max(n - k, 0))

    def test_zero(self):
        assert (Y - Y).is_zero
        assert (Y - Y).to_text() == "0"

    def test_in_variable(self):
        f = sp.Symbol("f", positive=True)
        assert D.in_variable(y, p, f).coefficient((1,)) == 1 / f
        assert Y.in_variable(y, p, f) == DiffOperator.multiplication((p,), f * p)

    def test_subs(self):
        op = DiffOperator.multiplication((y,), s * y)
        assert op.subs({s: 2}) == DiffOperator.multiplication((y,), 2 * y)


class TestMatrices:
    def test_derivative_matrix(self):
        m = D.matrix(4)
        assert not m.overflow
        assert [m.matrix[j - 1, j] for j in range(1, 4)] == [1, 2, 3]

    def test_overflow_is_flagged(self):
        m = Y.matrix(3)
        assert m.overflow == frozenset({2})
        assert m.size == 3

    def test_degree_shift(self):
        assert Y.degree_shift() == 1
        assert D.degree_shift() == -1
        assert (Y @ Y @ D).degree_shift() == 1

    def test_stable_window(self):
        assert stable_window(5, 1, 1) == 3
        assert stable_window(3, -1) == 3
        assert stable_window(2, 3) == 0

    def test_commutator_on_stable_columns(self):
        assert commutator_residual(D, Y, DiffOperator.identity((y,)), 5) == []
        assert commutator_residual(D, Y, DiffOperator.from_dict((y,), {}), 5)

    def test_two_variables_have_no_monomial_matrix(self):
        z = sp.Symbol("z")
        with pytest.raises(RepresentationInputError):
            DiffOperator.partial((y, z), y).matrix(3)

    def test_non_polynomial_image(self):
        with pytest.raises(RepresentationInputError):
            DiffOperator.multiplication((y,), 1 / (1 + y)).matrix(3)


class TestLadder:
    def test_normal_ordering(self):
        product = LadderOperator.lowering(s) * LadderOperator.raising(s)
        assert product.as_dict() == {(0, 0): s, (1, 1): 1}

    def test_canonical_commutator(self):
        assert LadderOperator.lowering(s).commutator(LadderOperator.raising(s)) == LadderOperator.scalar(s, s)

    def test_matrices(self):
        up = LadderOperator.raising(s).matrix(3)
        down = LadderOperator.lowering(s).matrix(3)
        assert up[1, 0] == 1 and up[2, 1] == 1
        assert down[0, 1] == s and down[1, 2] == 2 * s

    def test_position_and_derivative(self):
        position = ladder_from_diff(Y, s).as_dict()
        assert position == {(0, 1): 1 / (2 * s), (1, 0): 1 / (2 * s)}
        derivative = ladder_from_diff(D, s).as_dict()
        assert derivative == {(0, 1): sp.Rational(1, 2), (1, 0): -sp.Rational(1, 2)}

    def test_oscillator_is_number_operator(self):
        oscillator = DiffOperator.from_dict((y,), {(2,): -1, (0,): s**2 * y**2})
        ladder = ladder_from_diff(oscillator, s)
        assert ladder.as_dict() == {(0, 0): s, (1, 1): 1}
        m = ladder.matrix(4)
        assert m.is_diagonal()
        assert [m[n, n] for n in range(4)] == [s, 3 * s, 5 * s, 7 * s]


class TestCommutant:
    def test_diagonal_matrix(self):
        assert commutant([sp.diag(1, 2)]).dimension == 2

    def test_irreducible_pair(self):
        result = commutant([sp.Matrix([[0, 1], [0, 0]]), sp.Matrix([[0, 0], [1, 0]])])
        assert result.scalar
        assert len(result.basis) == 1

    def test_empty(self):
        with pytest.raises(RepresentationInputError):
            commutant([])
