"""
Unit tests for exact fields, exact linear algebra and seeded randomness.
"""

from fractions import Fraction

import pytest
from sympy import isprime

from exact_core import (
    RATIONALS,
    ExactField,
    ExactMatrix,
    FieldScalar,
    RandomSource,
    kernel_basis,
    random_primes,
    random_scalar,
    rank,
    row_space_meet,
    scalar,
)
from exceptions import FieldMismatchError, HeightOverflowError

P = 101


class TestExactField:
    """Test scalar conversion and arithmetic in Q and F_p."""

    def test_rational_conversion_keeps_fractions(self):
        """Rational values stay exact."""
        assert RATIONALS.convert(Fraction(3, 4)) == Fraction(3, 4)
        assert RATIONALS.add(Fraction(1, 3), Fraction(2, 3)) == 1

    def test_modular_conversion_of_fraction(self):
        """3/2 in F_101 is 3 times the inverse of 2."""
        field = ExactField.modular(P)
        value = field.convert(Fraction(3, 2))
        assert value * 2 % P == 3

    def test_fraction_with_vanishing_denominator(self):
        """A denominator divisible by p has no image."""
        field = ExactField.modular(P)
        with pytest.raises(FieldMismatchError):
            field.convert(Fraction(1, P))

    def test_height_cap(self):
        """Products exceeding the height cap raise."""
        small = ExactField.rational(height_bits=8)
        with pytest.raises(HeightOverflowError):
            small.mul(small.convert(200), small.convert(200))

    def test_float_rejected(self):
        with pytest.raises(TypeError):
            RATIONALS.convert(0.5)

    def test_small_modulus_rejected(self):
        with pytest.raises(ValueError):
            ExactField.modular(2)

    def test_inverse_of_zero(self):
        with pytest.raises(ZeroDivisionError):
            ExactField.modular(P).inv(0)


class TestFieldScalar:
    """Test tagged scalars."""

    def test_arithmetic_with_integers(self):
        """Integers lift into the scalar's field."""
        x = scalar(5, ExactField.modular(P))
        assert (x * 21).value == 105 % P
        assert (3 - x).value == (3 - 5) % P
        assert (x / x).value == 1

    def test_mixing_fields_raises(self):
        """Scalars of different primes never combine."""
        a = scalar(1, ExactField.modular(P))
        b = scalar(1, ExactField.modular(103))
        with pytest.raises(FieldMismatchError):
            a + b

    def test_foreign_scalar_conversion_raises(self):
        with pytest.raises(FieldMismatchError):
            RATIONALS.convert(FieldScalar(1, ExactField.modular(P)))


class TestExactMatrix:
    """Test rank, kernels and row-space meets."""

    def test_rank_over_q(self):
        m = ExactMatrix.from_rows(RATIONALS, [[1, 2, 3], [2, 4, 6], [0, 1, 1]])
        assert rank(m) == 2

    def test_rank_depends_on_characteristic(self):
        """A determinant of 7 vanishes modulo 7 only."""
        rows = [[1, 2], [3, 13]]
        assert rank(ExactMatrix.from_rows(RATIONALS, rows)) == 2
        assert rank(ExactMatrix.from_rows(ExactField.modular(7), rows)) == 1

    def test_echelon_scales_pivots_to_one(self):
        """Elimination divides by the pivot, so every pivot row leads with 1."""
        m = ExactMatrix.from_rows(RATIONALS, [[2, 4, 6], [1, 3, 4]])
        rows, pivots = m.echelon()
        assert pivots == [0, 1]
        assert rows == [[1, 2, 3], [0, 1, 1]]
        reduced, _ = m.echelon(reduced=True)
        assert reduced == [[1, 0, 1], [0, 1, 1]]

    def test_echelon_modular_pivot(self):
        rows, _ = ExactMatrix.from_rows(ExactField.modular(7), [[2, 4, 6]]).echelon()
        assert rows == [[1, 2, 3]]

    def test_kernel_vectors_are_annihilated(self):
        """Every kernel basis vector maps to zero and the basis has full nullity."""
        m = ExactMatrix.from_rows(RATIONALS, [[1, 1, 0, 2], [0, 1, 1, 1]])
        basis = kernel_basis(m)
        assert len(basis) == 2
        for vector in basis:
            assert not any(m.apply(vector))

    def test_row_space_meet(self):
        """Two planes in 3-space meet in a line."""
        a = ExactMatrix.from_rows(RATIONALS, [[1, 0, 0], [0, 1, 0]])
        b = ExactMatrix.from_rows(RATIONALS, [[0, 1, 0], [0, 0, 1]])
        meet = row_space_meet(a, b)
        assert meet.rows == 1
        assert meet.rank() == 1
        assert a.stack(meet).rank() == 2
        assert b.stack(meet).rank() == 2

    def test_meet_with_empty_matrix(self):
        a = ExactMatrix.from_rows(RATIONALS, [[1, 0]])
        empty = ExactMatrix.from_rows(RATIONALS, [], 2)
        assert row_space_meet(a, empty).rows == 0

    def test_unequal_rows_rejected(self):
        with pytest.raises(ValueError):
            ExactMatrix.from_rows(RATIONALS, [[1, 2], [3]])

    def test_matmul_and_identity(self):
        m = ExactMatrix.from_rows(RATIONALS, [[1, 2], [3, 4]])
        assert (m @ ExactMatrix.identity(RATIONALS, 2)) == m
        assert (m @ m).entries == ((7, 10), (15, 22))

    def test_stack_over_different_fields_raises(self):
        a = ExactMatrix.from_rows(RATIONALS, [[1, 2]])
        b = ExactMatrix.from_rows(ExactField.modular(P), [[1, 2]])
        with pytest.raises(FieldMismatchError):
            a.stack(b)


class TestRandomSource:
    """Test seeded streams and prime drawing."""

    def test_same_seed_same_stream(self):
        """Identical (seed, field) gives identical draws."""
        field = ExactField.modular(P)
        a = RandomSource(42, field)
        b = RandomSource(42, field)
        assert [a.scalar_value() for _ in range(10)] == [b.scalar_value() for _ in range(10)]
        assert a.position == 10

    def test_rational_draws_stay_in_window(self):
        rng = RandomSource(3, RATIONALS, window=5)
        values = [rng.scalar_value() for _ in range(50)]
        assert all(-5 <= v <= 5 for v in values)
        assert all(isinstance(v, Fraction) for v in values)

    def test_spawned_seeds_are_reproducible(self):
        assert RandomSource(9).spawn_seeds(3) == RandomSource(9).spawn_seeds(3)
        assert len(set(RandomSource(9).spawn_seeds(3))) == 3

    def test_scalar_without_field_raises(self):
        with pytest.raises(ValueError):
            RandomSource(1).scalar_value()

    def test_random_scalar_is_tagged(self):
        field = ExactField.modular(P)
        value = random_scalar(RandomSource(4, field))
        assert value.field == field
        assert 0 <= value.value < P

    def test_choice(self):
        rng = RandomSource(8)
        assert rng.choice(["a"]) == "a"
        with pytest.raises(ValueError):
            rng.choice([])

    def test_random_primes(self):
        """Drawn primes are distinct, prime and exactly 62 bits long."""
        primes = random_primes(RandomSource(5), 3, 62)
        assert len(set(primes)) == 3
        for p in primes:
            assert isprime(p)
            assert p.bit_length() == 62
        assert primes == random_primes(RandomSource(5), 3, 62)
