"""Tests for cofactors, term removal, bounded length search and subring restriction."""

from fractions import Fraction

import pytest

from recipcas.errors import (
    IndexOutOfRangeError,
    PreconditionViolatedError,
    ValidationError,
    ZeroValueError,
)
from recipcas.length import (
    brute_force_length,
    cofactor_product,
    length_candidates,
    solve_scalars,
    reduce_length_step,
    restrict_to_subring,
)
from recipcas.poly import Polynomial
from recipcas.rational import RationalFunction
from recipcas.recip import RecipSum


class TestCofactorProduct:
    """Test F*alpha for F the product of denominators."""

    def test_two_variables(self, xy):
        """Test {X, Y} -> X + Y."""
        x, y = xy

        assert cofactor_product(RecipSum.of(x, y)) == x + y

    def test_single_term(self, xy):
        """Test {X} -> 1."""
        assert cofactor_product(RecipSum.of(xy[0])) == Polynomial.one(2)

    def test_repeated_term(self, xy):
        """Test {X, X} -> 2X."""
        x, _ = xy

        assert cofactor_product(RecipSum.of(x, x)) == 2 * x

    def test_identity(self, xy):
        """Test 1/F = (1/(F*alpha)) * alpha."""
        x, y = xy
        alpha = RecipSum.of(x + y, x * y - 1, Polynomial.constant(2, 3))
        full = (x + y) * (x * y - 1) * 3
        one = Polynomial.one(2)

        cofactor = cofactor_product(alpha)

        assert RationalFunction(one, full) == RationalFunction(one, cofactor) * alpha.value

    def test_zero_value(self, xy):
        """Test that a zero value has no cofactor."""
        x, _ = xy
        with pytest.raises(ZeroValueError):
            cofactor_product(RecipSum.of(x, -x))


class TestReduceLengthStep:
    """Test removing one denominator."""

    def test_remove_last(self, xy):
        """Test ({X, Y}, 2) -> {X}."""
        x, y = xy

        assert reduce_length_step(RecipSum.of(x, y), 2) == RecipSum.of(x)

    def test_remove_only(self, xy):
        """Test ({X}, 1) -> {}."""
        result = reduce_length_step(RecipSum.of(xy[0]), 1)

        assert len(result) == 0
        assert result.value.is_zero

    def test_remove_product(self, xy):
        """Test ({X, Y, XY}, 3) -> {X, Y}."""
        x, y = xy

        assert reduce_length_step(RecipSum.of(x, y, x * y), 3) == RecipSum.of(x, y)

    def test_index_out_of_range(self, xy):
        """Test 1-based index bounds."""
        alpha = RecipSum.of(*xy)
        with pytest.raises(IndexOutOfRangeError):
            reduce_length_step(alpha, 0)
        with pytest.raises(IndexOutOfRangeError):
            reduce_length_step(alpha, 3)


class TestBruteForceLength:
    """Test the bounded length oracle."""

    def test_single_reciprocal(self, xy):
        """Test 1/X -> 1."""
        one = Polynomial.one(2)

        assert brute_force_length(RationalFunction(one, xy[0]), 2, 2, 3) == 1

    def test_constant_absorbed(self, xy):
        """Test 2/X -> 1 via 1/(X/2)."""
        r = RationalFunction(Polynomial.constant(2, 2), xy[0])

        assert brute_force_length(r, 1, 1, 2) == 1

    def test_sum_of_two(self, xy):
        """Test (X + Y)/(X*Y) -> 2."""
        x, y = xy

        assert brute_force_length(RationalFunction(x + y, x * y), 2, 2, 3) == 2

    def test_zero(self):
        """Test that zero is the empty sum."""
        assert brute_force_length(RationalFunction.zero(2), 1, 1, 1) == 0

    def test_not_found(self, xy):
        """Test X/Y, which has no short representation."""
        x, y = xy

        assert brute_force_length(RationalFunction(x, y), 1, 1, 2) is None

    def test_term_bound_respected(self, xy):
        """Test that a term bound below the length gives no answer."""
        x, y = xy

        assert brute_force_length(RationalFunction(x + y, x * y), 1, 1, 1) is None

    def test_negative_bounds(self, xy):
        """Test bound validation."""
        with pytest.raises(ValidationError):
            brute_force_length(RationalFunction(xy[0]), -1, 1, 1)

    def test_candidates_are_primitive(self):
        """Test the candidate set for one variable, degree 1, height 2."""
        candidates = length_candidates(1, 1, 2)

        contents = {c.content_normalized()[0] for c in candidates}
        assert contents <= {Fraction(1), Fraction(-1)}
        assert len(candidates) == len(set(candidates))
        # single terms ±1, ±X; two terms a + b*X with gcd(a, b) = 1
        assert len(candidates) == 4 + 12

    def test_scaled_terms(self, xy):
        """Test that every term may carry its own scalar: 2/X + 2/Y and 2/X + 3/Y -> 2."""
        x, y = xy

        assert brute_force_length(RationalFunction(2 * x + 2 * y, x * y), 1, 1, 2) == 2
        assert brute_force_length(RationalFunction(3 * x + 2 * y, x * y), 1, 1, 3) == 2

    def test_three_scaled_terms(self, xy):
        """Test 2/X + 3/Y + 1/(X + Y), whose denominator needs three linear factors."""
        x, y = xy
        one = Polynomial.one(2)
        r = 2 * RationalFunction(one, x) + 3 * RationalFunction(one, y)
        r = r + RationalFunction(one, x + y)

        assert brute_force_length(r, 1, 1, 2) is None
        assert brute_force_length(r, 1, 1, 3) == 3


class TestSolveScalars:
    """Test the exact solve for per-term scalars."""

    def test_solvable(self, xy):
        """Test (3X + 2Y)/(X*Y) over {X, Y} -> 2/X + 3/Y."""
        x, y = xy

        assert solve_scalars(RationalFunction(3 * x + 2 * y, x * y), [x, y]) == [
            Fraction(2),
            Fraction(3),
        ]

    def test_denominator_not_covered(self, xy):
        """Test that a product missing a factor of the denominator has no solution."""
        x, y = xy

        assert solve_scalars(RationalFunction(x + y, x * y), [Polynomial.one(2), x]) is None

    def test_inconsistent_system(self, xy):
        """Test X/Y over {1, Y}: X = c1*Y + c2 has no solution."""
        x, y = xy

        assert solve_scalars(RationalFunction(x, y), [Polynomial.one(2), y]) is None


class TestRestrictToSubring:
    """Test restriction to Q[X1..Xj]."""

    def test_cancelling_pair(self, xy):
        """Test {X, Y, -Y} with j = 1 -> {X}."""
        x, y = xy

        assert restrict_to_subring(RecipSum.of(x, y, -y), 1) == RecipSum.of(x)

    def test_already_restricted(self, xy):
        """Test {X, X^2} with j = 1 is unchanged."""
        x, _ = xy
        alpha = RecipSum.of(x, x**2)

        assert restrict_to_subring(alpha, 1) == alpha

    def test_cancelling_products(self, xy):
        """Test {X, XY, -XY} with j = 1 -> {X}."""
        x, y = xy

        restricted = restrict_to_subring(RecipSum.of(x, x * y, -x * y), 1)

        assert restricted == RecipSum.of(x)
        assert restricted.n == 2

    def test_value_outside_subring(self, xy):
        """Test that the value must lie in Q(X1..Xj)."""
        with pytest.raises(PreconditionViolatedError):
            restrict_to_subring(RecipSum.of(*xy), 1)

    def test_index_out_of_range(self, xy):
        """Test the bounds on j."""
        with pytest.raises(IndexOutOfRangeError):
            restrict_to_subring(RecipSum.of(*xy), 3)
