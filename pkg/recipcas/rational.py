"""Rational functions in canonical reduced form."""

from __future__ import annotations

import logging
from fractions import Fraction

from .errors import ValidationError, VariableCountMismatchError, ZeroDenominatorError
from .poly import Polynomial, Scalar

logger = logging.getLogger(__name__)


def _reduce(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Cancel common factors; den ends with content 1 and positive leading coefficient."""
    if num.n != den.n:
        raise VariableCountMismatchError(num.n, den.n)
    if den.is_zero:
        raise ZeroDenominatorError()
    if num.is_zero:
        return num, Polynomial.one(num.n)
    if den.is_constant:
        return num.scale(1 / den.constant_value()), Polynomial.one(num.n)

    p, q = num.rep.cancel(den.rep)
    content, primitive = Polynomial(q).content_normalized()
    return Polynomial(p).scale(1 / content), primitive


class RationalFunction:
    """Element num/den of Q(X1..Xn), always stored reduced and canonical.

    Equal values have identical (num, den) pairs, so equality and hashing are
    structural.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None) -> None:
        if den is None:
            den = Polynomial.one(num.n)
        self._num, self._den = _reduce(num, den)

    @classmethod
    def _canonical(cls, num: Polynomial, den: Polynomial) -> RationalFunction:
        obj = cls.__new__(cls)
        obj._num, obj._den = num, den
        return obj

    @classmethod
    def zero(cls, n: int) -> RationalFunction:
        return cls._canonical(Polynomial.zero(n), Polynomial.one(n))

    @classmethod
    def one(cls, n: int) -> RationalFunction:
        return cls._canonical(Polynomial.one(n), Polynomial.one(n))

    @classmethod
    def constant(cls, n: int, value: Scalar) -> RationalFunction:
        return cls._canonical(Polynomial.constant(n, value), Polynomial.one(n))

    @classmethod
    def from_polynomial(cls, f: Polynomial) -> RationalFunction:
        return cls._canonical(f, Polynomial.one(f.n))

    @property
    def num(self) -> Polynomial:
        return self._num

    @property
    def den(self) -> Polynomial:
        return self._den

    @property
    def n(self) -> int:
        return self._num.n

    @property
    def is_zero(self) -> bool:
        return self._num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self._den.is_constant

    @property
    def is_constant(self) -> bool:
        return self._den.is_constant and self._num.is_constant

    def as_polynomial(self) -> Polynomial:
        """Return the value as a Polynomial.

        Raises:
            ValidationError: If the denominator is not constant
        """
        if not self.is_polynomial:
            raise ValidationError("Rational function is not a polynomial", {"value": str(self)})
        return self._num

    def involves_only(self, j: int) -> bool:
        return self._num.involves_only(j) and self._den.involves_only(j)

    # Arithmetic

    def _coerce(self, other: object) -> RationalFunction | None:
        if isinstance(other, RationalFunction):
            if other.n != self.n:
                raise VariableCountMismatchError(self.n, other.n)
            return other
        if isinstance(other, Polynomial):
            if other.n != self.n:
                raise VariableCountMismatchError(self.n, other.n)
            return RationalFunction.from_polynomial(other)
        if isinstance(other, int | Fraction):
            return RationalFunction.constant(self.n, other)
        return None

    def __add__(self, other: object) -> RationalFunction:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        if self._den == rhs._den:
            return RationalFunction(self._num + rhs._num, self._den)
        return RationalFunction(self._num * rhs._den + rhs._num * self._den, self._den * rhs._den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction._canonical(-self._num, self._den)

    def __sub__(self, other: object) -> RationalFunction:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> RationalFunction:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> RationalFunction:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return RationalFunction(self._num * rhs._num, self._den * rhs._den)

    __rmul__ = __mul__

    def reciprocal(self) -> RationalFunction:
        if self.is_zero:
            raise ZeroDenominatorError("Reciprocal of zero")
        return RationalFunction(self._den, self._num)

    def __truediv__(self, other: object) -> RationalFunction:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self * rhs.reciprocal()

    def __rtruediv__(self, other: object) -> RationalFunction:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs * self.reciprocal()

    def __pow__(self, exponent: int) -> RationalFunction:
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        # Powers of a reduced fraction stay reduced.
        num, den = self._num**exponent, self._den**exponent
        content, primitive = den.content_normalized()
        return RationalFunction._canonical(num.scale(1 / content), primitive)

    # Protocols

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.is_polynomial and self._num == other
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        if self.is_polynomial:
            return hash(self._num)
        return hash((self._num, self._den))

    def __str__(self) -> str:
        from .parser import format_rational

        return format_rational(self)

    def __repr__(self) -> str:
        return f"RationalFunction({self}, n={self.n})"


def normalize_fraction(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Reduced canonical form of num/den.

    Raises:
        ZeroDenominatorError: If den is zero
        VariableCountMismatchError: If num and den have different variable counts
    """
    return RationalFunction(num, den)
