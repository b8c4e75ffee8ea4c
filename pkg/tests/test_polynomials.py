"""
Unit tests for sparse multivariate and dense univariate polynomials.
"""

from fractions import Fraction

import pytest

from exact_core import RATIONALS, ExactField
from exceptions import FieldMismatchError, PolynomialError
from polynomials import (
    INFINITY,
    MPoly,
    UPoly,
    content_and_orders,
    diff,
    evaluate,
    order_at,
    rational_roots,
    roots_mod_p,
    substitute,
    upoly_gcd,
)

VARS = ("u1", "u2")


@pytest.fixture
def u1():
    return MPoly.variable("u1", VARS)


@pytest.fixture
def u2():
    return MPoly.variable("u2", VARS)


class TestMPolyArithmetic:
    """Test ring operations."""

    def test_binomial_expansion(self, u1, u2):
        """(u1 + u2)^3 has coefficients 1, 3, 3, 1."""
        cube = (u1 + u2) ** 3
        assert cube.terms == {(3, 0): 1, (2, 1): 3, (1, 2): 3, (0, 3): 1}

    def test_cancellation_drops_terms(self, u1, u2):
        assert (u1 * u2 - u2 * u1).is_zero

    def test_constants_lift(self, u1):
        p = 2 * u1 + 1
        assert p.constant_term() == 1
        assert p.degree() == 1

    def test_negative_power_rejected(self, u1):
        with pytest.raises(PolynomialError):
            u1 ** -1

    def test_variable_lists_must_match(self, u1):
        other = MPoly.variable("u1", ("u1",))
        with pytest.raises(PolynomialError):
            u1 + other

    def test_fields_must_match(self, u1):
        other = MPoly.variable("u1", VARS, ExactField.modular(101))
        with pytest.raises(FieldMismatchError):
            u1 * other


class TestCalculus:
    """Test differentiation, evaluation and substitution."""

    def test_partial_derivative(self, u1, u2):
        p = u1 ** 2 * u2 + 3 * u2
        assert diff(p, "u1") == 2 * u1 * u2
        assert diff(p, "u2") == u1 ** 2 + 3

    def test_derivative_in_characteristic_p(self):
        """d/du u^p vanishes over F_p."""
        field = ExactField.modular(5)
        u = MPoly.variable("u", ("u",), field)
        assert diff(u ** 5, "u").is_zero

    def test_unknown_variable(self, u1):
        with pytest.raises(PolynomialError):
            diff(u1, "w")

    def test_evaluate(self, u1, u2):
        p = u1 ** 2 - u2
        assert evaluate(p, [3, 4]).value == 5
        assert p.evaluate([Fraction(1, 2), 0]) == Fraction(1, 4)

    def test_evaluate_wrong_length(self, u1):
        with pytest.raises(PolynomialError):
            u1.evaluate([1])

    def test_substitute(self, u1, u2):
        """Composition with t -> (t, t^2) gives a univariate polynomial."""
        t = MPoly.variable("t", ("t",))
        image = substitute(u1 * u2 + 1, {"u1": t, "u2": t ** 2})
        assert image.univariate_coefficients() == [1, 0, 0, 1]

    def test_substitute_missing_variable(self, u1):
        t = MPoly.variable("t", ("t",))
        with pytest.raises(PolynomialError):
            substitute(u1, {"u1": t})

    def test_specialize(self, u1, u2):
        p = u1 * u2 + u2
        line = p.specialize({"u1": 2})
        assert line.variables == ("u2",)
        assert line.univariate_coefficients() == [0, 3]

    def test_reduce_to_prime_field(self, u1):
        field = ExactField.modular(7)
        p = (u1 * Fraction(1, 2)).reduce_to(field)
        assert p.field == field
        assert p.terms == {(1, 0): 4}

    def test_to_expression(self, u1, u2):
        p = u1 ** 2 - 2 * u1 * u2 + Fraction(3, 2)
        assert p.to_expression() == "u1^2 - 2*u1*u2 + 3/2"
        assert MPoly.zero(VARS).to_expression() == "0"


class TestUPoly:
    """Test univariate gcds and vanishing orders."""

    def test_content_of_list(self):
        """gcd(t^2(t-1), t(t-1)^2) = t(t-1)."""
        t = UPoly([0, 1])
        t1 = UPoly([-1, 1])
        common, degree, at_infinity = content_and_orders([t * t * t1, t * t1 * t1])
        assert degree == 2
        assert common == t * t1
        assert at_infinity == 0

    def test_order_at_infinity_from_gap(self):
        """Forms of degree 2 and 3 under a degree-3 chart: gap 0."""
        _, _, at_infinity = content_and_orders([UPoly([1, 0, 1]), UPoly([0, 0, 0, 5])])
        assert at_infinity == 0
        assert order_at(UPoly([1, 0, 1]), INFINITY, 5) == 3

    def test_order_at_finite_point(self):
        p = UPoly([0, 0, 1]) * UPoly([-2, 1])
        assert order_at(p, 0) == 2
        assert order_at(p, 2) == 1
        assert order_at(p, 1) == 0

    def test_order_of_zero_raises(self):
        with pytest.raises(PolynomialError):
            order_at(UPoly(), 0)

    def test_gcd_is_monic(self):
        g = upoly_gcd(UPoly([2, 2]), UPoly([-2, 0, 2]))
        assert g == UPoly([1, 1])

    def test_reversed(self):
        """t^3 * p(1/t) for p = 1 + 2t."""
        assert UPoly([1, 2]).reversed(3) == UPoly([0, 0, 2, 1])
        with pytest.raises(PolynomialError):
            UPoly([1, 2, 3]).reversed(1)

    def test_divides(self):
        assert UPoly([-1, 1]).divides(UPoly([-1, 0, 1]))
        assert not UPoly([1, 1, 1]).divides(UPoly([-1, 0, 1]))


class TestRoots:
    """Test root extraction over F_p and Q."""

    def test_roots_mod_p(self):
        """(t - 2)(t - 5)(t^2 + 1) over F_7: -1 is not a square mod 7."""
        p = 7
        poly = UPoly([-2, 1]) * UPoly([-5, 1]) * UPoly([1, 0, 1])
        coeffs = [int(c) % p for c in poly.coeffs]
        assert roots_mod_p(coeffs, p) == [2, 5]

    def test_roots_mod_p_none(self):
        assert roots_mod_p([1, 0, 1], 7) == []

    def test_rational_roots(self):
        poly = UPoly([-1, 2]) * UPoly([3, 1]) * UPoly([2, 0, 1])
        assert rational_roots(poly.coeffs) == [Fraction(-3), Fraction(1, 2)]

    def test_constant_has_no_roots(self):
        assert rational_roots([5]) == []
