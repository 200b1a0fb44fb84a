"""Tests for the expression language and canonical printers."""

import random
from fractions import Fraction

import pytest

from recipcas.errors import ExpressionSyntaxError, UnknownVariableError, ZeroDenominatorError
from recipcas.parser import (
    BinaryOp,
    Call,
    Number,
    Power,
    TokenKind,
    Variable,
    as_rational,
    format_polynomial,
    format_rational,
    format_recip,
    format_value,
    parse_expression,
    parse_tree,
    tokenize,
)
from recipcas.poly import Polynomial
from recipcas.rational import RationalFunction
from recipcas.recip import RecipSum
from recipcas.sampling import random_polynomial, random_rational, random_recip_sum


class TestTokenizer:
    """Test tokenization."""

    def test_tokens_and_positions(self):
        """Test token kinds and offsets."""
        tokens = tokenize("recip(X1 + 3/4)")

        assert [t.kind for t in tokens] == [
            TokenKind.NAME,
            TokenKind.LPAREN,
            TokenKind.NAME,
            TokenKind.OPERATOR,
            TokenKind.NUMBER,
            TokenKind.OPERATOR,
            TokenKind.NUMBER,
            TokenKind.RPAREN,
            TokenKind.END,
        ]
        assert [t.position for t in tokens][:4] == [0, 5, 6, 9]

    def test_unexpected_character(self):
        """Test that stray characters report their offset."""
        with pytest.raises(ExpressionSyntaxError) as exc_info:
            tokenize("X $ Y")

        assert exc_info.value.position == 2


class TestParseTree:
    """Test precedence and tree shape."""

    def test_precedence(self):
        """Test that '^' binds tighter than '*', which binds tighter than '+'."""
        tree = parse_tree("X + 2*Y^3")

        assert isinstance(tree, BinaryOp) and tree.op == "+"
        assert tree.left == Variable("X", 0)
        product = tree.right
        assert isinstance(product, BinaryOp) and product.op == "*"
        assert product.left == Number(Fraction(2), 4)
        assert product.right == Power(Variable("Y", 6), 3, 7)

    def test_left_associative_division(self):
        """Test that X/Y/2 parses as (X/Y)/2."""
        tree = parse_tree("X/Y/2")

        assert isinstance(tree, BinaryOp) and tree.op == "/"
        assert isinstance(tree.left, BinaryOp) and tree.left.op == "/"

    def test_function_call(self):
        """Test sigma(...) nodes."""
        tree = parse_tree("sigma(X)")

        assert tree == Call("sigma", Variable("X", 6), 0)


class TestParseExpression:
    """Test evaluation of expression text."""

    def test_recip_sum(self, parse, xy):
        """Test recip(X+Y) + recip(X) -> RecipSum {X + Y, X}."""
        x, y = xy

        assert parse("recip(X+Y) + recip(X)") == RecipSum.of(x + y, x)

    def test_polynomial_literal(self, parse, xy):
        """Test X^2*Y - 3/4 -> polynomial."""
        x, y = xy

        result = parse("X^2*Y - 3/4")

        assert isinstance(result, Polynomial)
        assert result == x**2 * y - Fraction(3, 4)

    def test_division_by_zero_polynomial(self, parse):
        """Test 1/(X - X)."""
        with pytest.raises(ZeroDenominatorError):
            parse("1/(X - X)")

    def test_rational_function(self, parse, xy):
        """Test that division yields a rational function."""
        x, y = xy

        assert parse("(X^2 - Y^2)/(X*Y)") == RationalFunction(x**2 - y**2, x * y)

    def test_exact_quotient_collapses(self, parse, xy):
        """Test that quotients with denominator 1 come back as polynomials."""
        x, y = xy

        result = parse("(X^2 - Y^2)/(X - Y)")

        assert isinstance(result, Polynomial)
        assert result == x + y

    def test_aliases(self, xyz):
        """Test lowercase aliases and indexed names."""
        x, y, z = xyz

        assert parse_expression("x*y + X3", 3) == x * y + z

    def test_indexed_names_beyond_three(self):
        """Test X1..Xn for n > 3."""
        xs = Polynomial.variables(4)

        assert parse_expression("X1*X4", 4) == xs[0] * xs[3]

    def test_sigma(self, parse, xy):
        """Test sigma on fractions and polynomials."""
        x, y = xy
        one = Polynomial.one(2)

        assert parse("sigma(X/Y)") == RationalFunction(y, x)
        assert parse("sigma(X)") == RationalFunction(one, x)
        assert parse("sigma(X*Y/(X+Y))") == RationalFunction(one, x + y)

    def test_recip_arithmetic(self, parse, xy):
        """Test that reciprocal sums survive ring operations."""
        x, y = xy

        assert parse("recip(X) * recip(Y)") == RecipSum.of(x * y)
        assert parse("recip(X) + 1") == RecipSum.of(x, Polynomial.one(2))
        assert parse("recip(X) - recip(Y)") == RecipSum.of(x, -y)
        assert parse("-recip(X)") == RecipSum.of(-x)
        assert parse("recip(X)^2") == RecipSum.of(x**2)
        assert parse("2*recip(X)") == RecipSum.of(x.scale(Fraction(1, 2)))
        assert parse("recip(X)/2") == RecipSum.of(2 * x)

    def test_recip_mixed_with_polynomials(self, parse, xy):
        """Test that sums with non-constant polynomials fall back to values."""
        x, y = xy

        result = parse("recip(X) + Y")

        assert result == RationalFunction(x * y + 1, x)

    def test_recip_needs_polynomial(self, parse):
        """Test recip of a proper fraction."""
        with pytest.raises(ExpressionSyntaxError):
            parse("recip(X/Y)")

    def test_recip_of_zero(self, parse):
        """Test recip(0)."""
        with pytest.raises(ZeroDenominatorError):
            parse("recip(X - X)")

    @pytest.mark.parametrize(
        ("text", "position"),
        [
            ("X + * Y", 4),
            ("X^Y", 2),
            ("X^-1", 2),
            ("(X + Y", 6),
            ("sigma X", 6),
            ("X Y", 2),
            ("", 0),
        ],
    )
    def test_syntax_errors_carry_position(self, parse, text, position):
        """Test error offsets on malformed input."""
        with pytest.raises(ExpressionSyntaxError) as exc_info:
            parse(text)

        assert exc_info.value.position == position
        assert exc_info.value.details["position"] == position

    def test_unknown_variable(self, parse):
        """Test Z in two variables."""
        with pytest.raises(UnknownVariableError):
            parse("X + Z")


class TestPrinting:
    """Test canonical text."""

    def test_polynomial(self, xy):
        """Test graded-lex order, signs and rational coefficients."""
        x, y = xy

        assert format_polynomial(x**2 * y - Fraction(3, 4)) == "X^2*Y - 3/4"
        assert format_polynomial(-x + 2 * y) == "-X + 2*Y"
        assert format_polynomial(x.scale(Fraction(-3, 4))) == "-3/4*X"
        assert format_polynomial(Polynomial.zero(2)) == "0"

    def test_rational(self, xy):
        """Test parenthesization of numerator and denominator."""
        x, y = xy
        one = Polynomial.one(2)

        assert format_rational(RationalFunction(x + y, x * y)) == "(X + Y)/(X*Y)"
        assert format_rational(RationalFunction(one, x**2)) == "1/X^2"
        assert format_rational(RationalFunction(x, y + 1)) == "X/(Y + 1)"
        assert format_rational(RationalFunction(x * y, y)) == "X"

    def test_recip(self, xy):
        """Test reciprocal sums and the empty sum."""
        x, y = xy

        assert format_recip(RecipSum.of(x, y + 1)) == "recip(X) + recip(Y + 1)"
        assert format_recip(RecipSum.of(n=2)) == "0"

    def test_indexed_names(self):
        """Test printing with more than three variables."""
        xs = Polynomial.variables(4)

        assert format_value(xs[0] * xs[3] + 1) == "X1*X4 + 1"


class TestRoundTrip:
    """Test parse(print(v)) = v."""

    def test_printed_values_parse_back(self):
        """Test 200 printed polynomials, fractions and reciprocal sums."""
        rng = random.Random(2024)
        for i in range(200):
            n = rng.choice((2, 3, 4))
            kind = i % 3
            if kind == 0:
                v: object = random_polynomial(rng, n, max_degree=4, height=9)
            elif kind == 1:
                v = random_rational(rng, n, max_degree=3, height=9)
            else:
                v = random_recip_sum(rng, n, max_terms=3, max_degree=3, height=9)

            parsed = parse_expression(format_value(v), n)  # type: ignore[arg-type]

            if isinstance(v, RecipSum):
                assert parsed == v
            else:
                assert as_rational(parsed) == as_rational(v)  # type: ignore[arg-type]
