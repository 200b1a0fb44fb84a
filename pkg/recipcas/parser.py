"""Expression language: tokenizer, recursive-descent parser, evaluator and canonical printers.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' INTEGER)?
    atom   := NUMBER | VARIABLE | '(' expr ')' | ('sigma' | 'recip') '(' expr ')'

Printed values parse back to themselves.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import ExpressionSyntaxError, ValidationError, ZeroDenominatorError
from .poly import Polynomial, variable_index, variable_names
from .rational import RationalFunction
from .recip import RecipCombineKind, RecipSum, recip_combine, sigma

logger = logging.getLogger(__name__)

Value = Polynomial | RationalFunction | RecipSum

FUNCTIONS = frozenset({"sigma", "recip"})


# Tokens


class TokenKind(Enum):
    NUMBER = "number"
    NAME = "name"
    OPERATOR = "operator"
    LPAREN = "("
    RPAREN = ")"
    END = "end"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    position: int


_TOKEN_RE = re.compile(
    r"(?P<number>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^])"
    r"|(?P<lparen>\()|(?P<rparen>\))"
)

_GROUP_KINDS = {
    "number": TokenKind.NUMBER,
    "name": TokenKind.NAME,
    "op": TokenKind.OPERATOR,
    "lparen": TokenKind.LPAREN,
    "rparen": TokenKind.RPAREN,
}


def tokenize(text: str) -> list[Token]:
    """Split text into tokens, ending with an END token.

    Raises:
        ExpressionSyntaxError: On a character that starts no token
    """
    tokens: list[Token] = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            tokens.append(Token(TokenKind.END, "", pos))
            return tokens
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.lastgroup is None:
            raise ExpressionSyntaxError(f"Unexpected character '{text[pos]}'", pos, text)
        tokens.append(Token(_GROUP_KINDS[match.lastgroup], match.group(), pos))
        pos = match.end()


# Syntax tree


@dataclass(frozen=True)
class Number:
    value: Fraction
    position: int


@dataclass(frozen=True)
class Variable:
    name: str
    position: int


@dataclass(frozen=True)
class UnaryOp:
    op: str
    operand: Expression
    position: int


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: Expression
    right: Expression
    position: int


@dataclass(frozen=True)
class Power:
    base: Expression
    exponent: int
    position: int


@dataclass(frozen=True)
class Call:
    function: str
    argument: Expression
    position: int


Expression = Number | Variable | UnaryOp | BinaryOp | Power | Call


class Parser:
    """Recursive-descent parser producing an Expression tree."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        if token.kind is not TokenKind.END:
            self.index += 1
        return token

    def _error(self, message: str, token: Token | None = None) -> ExpressionSyntaxError:
        token = token or self.current
        return ExpressionSyntaxError(message, token.position, self.text)

    def _expect(self, kind: TokenKind) -> Token:
        if self.current.kind is not kind:
            found = self.current.text or "end of input"
            raise self._error(f"Expected '{kind.value}', found '{found}'")
        return self._advance()

    def parse(self) -> Expression:
        if self.current.kind is TokenKind.END:
            raise self._error("Empty expression")
        node = self._expr()
        if self.current.kind is not TokenKind.END:
            raise self._error(f"Unexpected '{self.current.text}'")
        return node

    def _is_op(self, *ops: str) -> bool:
        return self.current.kind is TokenKind.OPERATOR and self.current.text in ops

    def _expr(self) -> Expression:
        node = self._term()
        while self._is_op("+", "-"):
            token = self._advance()
            node = BinaryOp(token.text, node, self._term(), token.position)
        return node

    def _term(self) -> Expression:
        node = self._unary()
        while self._is_op("*", "/"):
            token = self._advance()
            node = BinaryOp(token.text, node, self._unary(), token.position)
        return node

    def _unary(self) -> Expression:
        if self._is_op("-", "+"):
            token = self._advance()
            return UnaryOp(token.text, self._unary(), token.position)
        return self._power()

    def _power(self) -> Expression:
        base = self._atom()
        if self._is_op("^"):
            caret = self._advance()
            token = self.current
            if token.kind is not TokenKind.NUMBER or "." in token.text:
                raise self._error("Exponent must be a nonnegative integer literal")
            self._advance()
            return Power(base, int(token.text), caret.position)
        return base

    def _atom(self) -> Expression:
        token = self.current
        if token.kind is TokenKind.NUMBER:
            self._advance()
            return Number(Fraction(token.text), token.position)
        if token.kind is TokenKind.NAME:
            self._advance()
            if token.text in FUNCTIONS:
                self._expect(TokenKind.LPAREN)
                argument = self._expr()
                self._expect(TokenKind.RPAREN)
                return Call(token.text, argument, token.position)
            return Variable(token.text, token.position)
        if token.kind is TokenKind.LPAREN:
            self._advance()
            node = self._expr()
            self._expect(TokenKind.RPAREN)
            return node
        found = token.text or "end of input"
        raise self._error(f"Unexpected '{found}'")


def parse_tree(text: str) -> Expression:
    """Parse text into an Expression tree without evaluating it."""
    return Parser(text).parse()


# Evaluation


def collapse(value: Value) -> Value:
    """Rational functions with denominator 1 become polynomials."""
    if isinstance(value, RationalFunction) and value.is_polynomial:
        return value.as_polynomial()
    return value


def as_rational(value: Value) -> RationalFunction:
    """Exact rational-function value of any parsed value."""
    if isinstance(value, RecipSum):
        return value.value
    if isinstance(value, Polynomial):
        return RationalFunction.from_polynomial(value)
    return value


def _constant(value: Value) -> Fraction | None:
    if isinstance(value, Polynomial) and value.is_constant:
        return value.constant_value()
    return None


def _recip_of_constant(n: int, c: Fraction) -> RecipSum:
    if c == 0:
        return RecipSum(n, ())
    return RecipSum(n, (Polynomial.constant(n, 1 / c),))


def _scale_denominators(alpha: RecipSum, factor: Fraction) -> RecipSum:
    """c * Σ 1/f_i = Σ 1/(f_i / c)."""
    return RecipSum(alpha.n, tuple(f.scale(1 / factor) for f in alpha.denoms))


def _combine_recip(op: str, left: Value, right: Value) -> Value | None:
    """Keep the representation when at least one side is a RecipSum; None falls back to values."""
    if not isinstance(left, RecipSum) and not isinstance(right, RecipSum):
        return None
    n = left.n
    lc, rc = _constant(left), _constant(right)

    if op in "+-":
        if isinstance(left, RecipSum):
            lhs = left
        elif lc is not None:
            lhs = _recip_of_constant(n, lc)
        else:
            return None
        if isinstance(right, RecipSum):
            rhs = right
        elif rc is not None:
            rhs = _recip_of_constant(n, rc)
        else:
            return None
        if op == "-":
            rhs = recip_combine(RecipCombineKind.NEG, rhs)
        return recip_combine(RecipCombineKind.ADD, lhs, rhs)

    if op == "*":
        if isinstance(left, RecipSum) and isinstance(right, RecipSum):
            return recip_combine(RecipCombineKind.MUL, left, right)
        alpha, c = (left, rc) if isinstance(left, RecipSum) else (right, lc)
        assert isinstance(alpha, RecipSum)
        if c is None or c == 0:
            return None
        return _scale_denominators(alpha, c)

    if isinstance(left, RecipSum) and rc is not None:
        if rc == 0:
            raise ZeroDenominatorError()
        return _scale_denominators(left, 1 / rc)
    return None


class Evaluator:
    """Evaluate Expression trees over Q(X1..Xn)."""

    def __init__(self, n: int, text: str = "") -> None:
        if n < 1:
            raise ValidationError("Expressions need at least one variable", {"n": n})
        self.n = n
        self.text = text

    def evaluate(self, node: Expression) -> Value:
        match node:
            case Number(value=value):
                return Polynomial.constant(self.n, value)
            case Variable(name=name, position=position):
                return Polynomial.variable(self.n, variable_index(name, self.n, position))
            case UnaryOp(op=op, operand=operand):
                inner = self.evaluate(operand)
                if op == "+":
                    return inner
                if isinstance(inner, RecipSum):
                    return recip_combine(RecipCombineKind.NEG, inner)
                return -inner
            case Power(base=base, exponent=exponent):
                return self._power(self.evaluate(base), exponent)
            case BinaryOp(op=op, left=left, right=right):
                return self._binary(op, self.evaluate(left), self.evaluate(right))
            case Call(function="sigma", argument=argument):
                return collapse(sigma(as_rational(self.evaluate(argument))))
            case Call(function="recip", argument=argument, position=position):
                return self._recip(self.evaluate(argument), position)
        raise ExpressionSyntaxError("Unsupported expression", 0, self.text)

    def _power(self, base: Value, exponent: int) -> Value:
        if isinstance(base, RecipSum):
            if exponent == 0:
                return Polynomial.one(self.n)
            result = base
            for _ in range(exponent - 1):
                result = recip_combine(RecipCombineKind.MUL, result, base)
            return result
        return base**exponent

    def _binary(self, op: str, left: Value, right: Value) -> Value:
        combined = _combine_recip(op, left, right)
        if combined is not None:
            return combined
        if op == "/" or isinstance(left, RationalFunction | RecipSum) or isinstance(
            right, RationalFunction | RecipSum
        ):
            lhs, rhs = as_rational(left), as_rational(right)
            if op == "+":
                return collapse(lhs + rhs)
            if op == "-":
                return collapse(lhs - rhs)
            if op == "*":
                return collapse(lhs * rhs)
            if rhs.is_zero:
                raise ZeroDenominatorError()
            return collapse(lhs / rhs)
        assert isinstance(left, Polynomial) and isinstance(right, Polynomial)
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        return left * right

    def _recip(self, argument: Value, position: int) -> RecipSum:
        value = collapse(argument)
        if not isinstance(value, Polynomial):
            raise ExpressionSyntaxError("recip() needs a polynomial argument", position, self.text)
        if value.is_zero:
            raise ZeroDenominatorError("recip() of the zero polynomial")
        return RecipSum(self.n, (value,))


def parse_expression(text: str, n: int) -> Value:
    """Parse and evaluate an expression over Q(X1..Xn).

    Args:
        text: Expression text, e.g. 'recip(X+Y) + recip(X)'
        n: Variable count

    Raises:
        ExpressionSyntaxError: If the text is malformed (carries the position)
        UnknownVariableError: If a variable is not one of X1..Xn
        ZeroDenominatorError: On division by a zero polynomial

    Returns:
        Polynomial for polynomial text, RecipSum when reciprocal sums are kept
        intact, RationalFunction otherwise
    """
    value = Evaluator(n, text).evaluate(parse_tree(text))
    logger.debug("Parsed expression", extra={"text": text, "kind": type(value).__name__})
    return value


# Printing


def _format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(exps: tuple[int, ...], names: tuple[str, ...]) -> str:
    factors = []
    for name, e in zip(names, exps, strict=True):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def format_polynomial(f: Polynomial) -> str:
    """Canonical text: graded-lex term order, explicit '*' and '^'."""
    if f.is_zero:
        return "0"
    names = variable_names(f.n)
    parts: list[str] = []
    for i, (exps, coeff) in enumerate(f.terms()):
        monomial = _format_monomial(exps, names)
        magnitude = abs(coeff)
        if not monomial:
            body = _format_fraction(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{_format_fraction(magnitude)}*{monomial}"
        if i == 0:
            parts.append(f"-{body}" if coeff < 0 else body)
        else:
            parts.append(f"{'-' if coeff < 0 else '+'} {body}")
    return " ".join(parts)


def _is_single_power(f: Polynomial) -> bool:
    """A bare variable power X^k with coefficient 1, safe right of '/'."""
    if len(f.terms()) != 1:
        return False
    exps, coeff = f.terms()[0]
    return coeff == 1 and sum(1 for e in exps if e) == 1


def format_rational(r: RationalFunction) -> str:
    """Canonical text: 'num/den', parenthesized where needed, e.g. '(X + Y)/(X*Y)'."""
    if r.is_polynomial:
        return format_polynomial(r.num)
    num = format_polynomial(r.num)
    if len(r.num.terms()) > 1:
        num = f"({num})"
    den = format_polynomial(r.den)
    if not _is_single_power(r.den):
        den = f"({den})"
    return f"{num}/{den}"


def format_recip(alpha: RecipSum) -> str:
    """Canonical text 'recip(f1) + recip(f2) + ...'; the empty sum prints as '0'."""
    if not alpha.denoms:
        return "0"
    return " + ".join(f"recip({format_polynomial(f)})" for f in alpha.denoms)


def format_value(value: Value) -> str:
    if isinstance(value, RecipSum):
        return format_recip(value)
    if isinstance(value, RationalFunction):
        return format_rational(value)
    return format_polynomial(value)
