"""Tests for src/gaq_toolkit/mechanics/symbolic.py."""
from __future__ import annotations

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from gaq_toolkit.errors import SpecInputError, UndeclaredSymbolError, ZeroDenominatorError
from gaq_toolkit.mechanics.parser import parse_expr
from gaq_toolkit.mechanics.symbolic import (
    Auxiliary,
    SymbolTable,
    canonical,
    derivative,
    diff,
    equal,
    is_zero,
    substitute,
    to_text,
)

q, v, t = sp.symbols("q v t")

coefficients = st.lists(st.integers(min_value=-4, max_value=4), min_size=1, max_size=4)


def _poly(coeffs: list[int]) -> sp.Expr:
    return sum((c * q**k * (v + k) for k, c in enumerate(coeffs)), sp.S.Zero)


class TestSymbolTable:
    def test_reserved_name_rejected(self):
        with pytest.raises(SpecInputError, match="reserved"):
            SymbolTable(coordinates=("i", "q"))

    def test_duplicate_name_rejected(self):
        with pytest.raises(SpecInputError, match="Duplicate"):
            SymbolTable(coordinates=("q", "q"))

    def test_unknown_symbol(self, qvt_table):
        with pytest.raises(UndeclaredSymbolError):
            qvt_table.symbol("w")

    def test_extend_keeps_existing(self, qvt_table):
        wider = qvt_table.extend(coordinates=("y",))
        assert wider.names[:3] == ("q", "v", "t")
        assert wider.has("y") and wider.has("m")

    def test_positive_parameter_assumption(self, qvt_table):
        assert qvt_table.symbol("m").is_positive


class TestCanonical:
    def test_cancels_fractions(self):
        assert canonical((q**2 - 1) / (q - 1)) == q + 1

    def test_auxiliary_square_reduced(self):
        table = SymbolTable(coordinates=("q",), auxiliaries=(Auxiliary("s", sp.Symbol("q") + 1),))
        s = table.symbol("s")
        assert canonical(s**3, table.relations) == canonical(s * (q + 1))

    def test_denominator_rationalized(self):
        table = SymbolTable(coordinates=("q",), auxiliaries=(Auxiliary("s", sp.Symbol("q")),))
        s = table.symbol("s")
        assert equal(1 / s, s / q, table.relations)
        assert not canonical(1 / s, table.relations).as_numer_denom()[1].has(s)

    def test_is_zero(self):
        assert is_zero(q * v - v * q)
        assert not is_zero(q - v)


class TestDerivative:
    def test_chain_rule_through_auxiliary(self):
        table = SymbolTable(coordinates=("q",), auxiliaries=(Auxiliary("s", sp.Symbol("q")),))
        s = table.symbol("s")
        # d(s)/dq with s^2 = q
        assert equal(derivative(s, q, table.relations), 1 / (2 * s), table.relations)

    def test_diff_by_name(self, qvt_table):
        e = parse_expr("q^2*v + t", qvt_table)
        assert equal(diff(e, "q", qvt_table), 2 * q * v)

    @given(coefficients, coefficients)
    def test_leibniz_rule(self, a, b):
        f, g = _poly(a), _poly(b)
        lhs = derivative(f * g, q)
        rhs = derivative(f, q) * g + f * derivative(g, q)
        assert equal(lhs, rhs)


class TestSubstitute:
    def test_simultaneous(self, qvt_table):
        e = parse_expr("q - v", qvt_table)
        assert substitute(e, {"q": v, "v": q}, qvt_table) == v - q

    def test_zero_denominator_raises(self, qvt_table):
        e = parse_expr("1/(q - v)", qvt_table)
        with pytest.raises(ZeroDenominatorError):
            substitute(e, {"q": v}, qvt_table)

    def test_string_key_needs_table(self):
        with pytest.raises(UndeclaredSymbolError):
            substitute(q, {"q": 1})

    @given(coefficients, coefficients, st.integers(min_value=-3, max_value=3))
    def test_substitution_is_multiplicative(self, a, b, value):
        f, g = _poly(a), _poly(b)
        binding = {q: v + value}
        assert equal(substitute(f * g, binding), substitute(f, binding) * substitute(g, binding))


class TestToText:
    @pytest.mark.parametrize("expr, expected", [
        (q**2, "q^2"),
        (sp.I * q, "i*q"),
    ])
    def test_grammar_output(self, expr, expected):
        assert to_text(expr) == expected

    @pytest.mark.parametrize("text", ["q + v*t", "i*m*q^2/2", "(q - 1)^(-2)*t", "-3/16*v"])
    def test_parse_of_printed_form(self, qvt_table, text):
        e = parse_expr(text, qvt_table)
        assert equal(parse_expr(to_text(e), qvt_table), e)
