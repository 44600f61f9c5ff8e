"""Tests for src/gaq_toolkit/mechanics/linear.py."""
from __future__ import annotations

import sympy as sp

from gaq_toolkit.mechanics.linear import (
    coordinates_in,
    has_imaginary,
    in_span,
    is_zero_vector,
    nullspace,
    rank,
    span_key,
)

a, b = sp.symbols("a b", positive=True)
ONE, ZERO = sp.S.One, sp.S.Zero


class TestRank:
    def test_parameters_are_generic(self):
        assert rank([(a, b), (ONE, b / a)]) == 1
        assert rank([(a, ONE), (ONE, a)]) == 2

    def test_empty(self):
        assert rank([]) == 0


class TestSpans:
    def test_equal_spans_have_equal_keys(self):
        assert span_key([(ONE, ONE, ZERO), (ZERO, ONE, ONE)]) == span_key([(ONE, 2, ONE), (ONE, ZERO, -1)])

    def test_in_span(self):
        basis = [(ONE, ZERO, a), (ZERO, ONE, ZERO)]
        assert in_span(basis, (2, 3, 2 * a))
        assert not in_span(basis, (ZERO, ZERO, ONE))
        assert in_span([], (ZERO, ZERO))

    def test_coordinates_in(self):
        assert coordinates_in([(ONE, ZERO), (ONE, ONE)], (3, 1)) == (2, 1)
        assert coordinates_in([(ONE, ZERO)], (0, 1)) is None


class TestNullspace:
    def test_kernel(self):
        kernel = nullspace([(ONE, -a, ZERO)], 3)
        assert len(kernel) == 2
        for vec in kernel:
            assert sp.simplify(vec[0] - a * vec[1]) == 0

    def test_no_rows_gives_full_space(self):
        assert len(nullspace([], 3)) == 3


def test_zero_vector_and_imaginary():
    assert is_zero_vector((a - a, ZERO))
    assert has_imaginary([(ONE, sp.I * a)])
    assert not has_imaginary([(ONE, a)])
