"""
Tests for the polynomial expression parser.
"""

from fractions import Fraction

import pytest

from exact_core import ExactField
from exceptions import ParseError
from expression_parser import MAX_EXPONENT, parse_poly
from polynomials import MPoly

VARS = ("u1", "u2")


class TestParsing:
    """Test well-formed expressions."""

    def test_binomial_cube(self):
        u1 = MPoly.variable("u1", VARS)
        u2 = MPoly.variable("u2", VARS)
        assert parse_poly("(u1+u2)^3", VARS) == (u1 + u2) ** 3

    def test_rational_literal(self):
        p = parse_poly("3/2", VARS)
        assert p.is_constant
        assert p.constant_term() == Fraction(3, 2)

    def test_leading_sign_and_precedence(self):
        """'^' binds tighter than unary minus and '*' tighter than '+'."""
        p = parse_poly("-u1^2 + 2*u1*u2 - 1/3", VARS)
        assert p.terms == {(2, 0): -1, (1, 1): 2, (0, 0): Fraction(-1, 3)}

    def test_whitespace_and_newlines(self):
        assert parse_poly(" u1 *\n u2 ", VARS) == parse_poly("u1*u2", VARS)

    def test_no_variables(self):
        assert parse_poly("7", []).constant_term() == 7

    def test_modular_field(self):
        field = ExactField.modular(7)
        p = parse_poly("1/2*u1", VARS, field)
        assert p.field == field
        assert p.terms == {(1, 0): 4}

    def test_round_trip_through_expression(self):
        source = "u1^2 - 2*u1*u2 + 3/2"
        assert parse_poly(source, VARS).to_expression() == source


class TestErrors:
    """Test rejected input and error positions."""

    def test_implicit_multiplication(self):
        with pytest.raises(ParseError) as exc_info:
            parse_poly("2u1", VARS)
        assert exc_info.value.column == 2

    def test_juxtaposed_variables(self):
        with pytest.raises(ParseError):
            parse_poly("u1 u2", VARS)

    def test_unknown_identifier(self):
        with pytest.raises(ParseError) as exc_info:
            parse_poly("u1 + w", VARS)
        error = exc_info.value
        assert "Unknown identifier 'w'" in error.message
        assert (error.line, error.column) == (1, 6)

    def test_position_on_second_line(self):
        with pytest.raises(ParseError) as exc_info:
            parse_poly("u1 +\n  v", VARS)
        assert (exc_info.value.line, exc_info.value.column) == (2, 3)

    def test_division_outside_literal(self):
        with pytest.raises(ParseError) as exc_info:
            parse_poly("(u1+u2)/2", VARS)
        assert "Division" in exc_info.value.message

    def test_zero_denominator(self):
        with pytest.raises(ParseError) as exc_info:
            parse_poly("1/0", VARS)
        assert "Zero denominator" in exc_info.value.message

    def test_exponent_cap(self):
        with pytest.raises(ParseError):
            parse_poly(f"u1^{MAX_EXPONENT + 1}", VARS)

    def test_unbalanced_parenthesis(self):
        with pytest.raises(ParseError):
            parse_poly("(u1 + u2", VARS)

    def test_empty_source(self):
        with pytest.raises(ParseError):
            parse_poly("", VARS)

    def test_duplicate_variables(self):
        with pytest.raises(ParseError) as exc_info:
            parse_poly("u", ("u", "u"))
        assert exc_info.value.details["variables"] == ["u", "u"]

    def test_error_keeps_source_and_cause(self):
        with pytest.raises(ParseError) as exc_info:
            parse_poly("u1 +", VARS)
        assert exc_info.value.details["source"] == "u1 +"
        assert exc_info.value.original_error is not None
