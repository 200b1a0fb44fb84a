"""Sparse multivariate polynomials over the rationals.

Polynomials wrap sympy's sparse ``PolyElement`` over ``QQ`` in a ring with
graded lexicographic order, X1 > X2 > ... > Xn. The wrapper is immutable and
hashable, speaks ``fractions.Fraction`` at its public boundary and keeps the
variable count explicit so mixed-ring arithmetic is rejected instead of
silently embedded.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd as int_gcd
from math import lcm as int_lcm
from typing import Any

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing

from .errors import (
    ArityMismatchError,
    ErrorContext,
    NotDivisibleError,
    UnknownVariableError,
    ValidationError,
    VariableCountMismatchError,
    ZeroDenominatorError,
    ZeroPolynomialError,
)

logger = logging.getLogger(__name__)

Exponents = tuple[int, ...]
Scalar = int | Fraction


def variable_names(n: int) -> tuple[str, ...]:
    """Canonical printed names: X, Y, Z up to three variables, X1..Xn beyond."""
    if n <= 3:
        return ("X", "Y", "Z")[:n]
    return tuple(f"X{i}" for i in range(1, n + 1))


def variable_index(name: str, n: int, position: int | None = None) -> int:
    """Resolve a variable name to its 1-based index.

    Accepts X1..Xn (any case) and, for n <= 3, the aliases x, y, z.

    Raises:
        UnknownVariableError: If the name does not denote one of the n variables
    """
    lowered = name.lower()
    if n <= 3 and lowered in ("x", "y", "z")[:n]:
        return "xyz".index(lowered) + 1
    if lowered.startswith("x") and lowered[1:].isdigit():
        index = int(lowered[1:])
        if 1 <= index <= n:
            return index
    raise UnknownVariableError(name, n, position)


@lru_cache(maxsize=None)
def polynomial_ring(n: int) -> PolyRing:
    """Shared sympy ring QQ[x1..xn] with graded lex order."""
    if n < 1:
        raise ValidationError("Polynomial rings need at least one variable", {"n": n})
    return PolyRing(",".join(f"x{i}" for i in range(1, n + 1)), QQ, grlex)


def to_fraction(value: Any) -> Fraction:
    """Convert a ground-domain element (or int/Fraction) to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(int(value.numerator), int(value.denominator))


def _to_ground(value: Scalar) -> Any:
    c = Fraction(value)
    return QQ(c.numerator, c.denominator)


class Polynomial:
    """Immutable sparse polynomial in X1..Xn with rational coefficients."""

    __slots__ = ("_rep", "_hash")

    def __init__(self, rep: PolyElement) -> None:
        self._rep = rep
        self._hash: int | None = None

    # Construction

    @classmethod
    def from_terms(
        cls,
        n: int,
        terms: Mapping[Exponents, Scalar] | Iterable[tuple[Exponents, Scalar]],
    ) -> Polynomial:
        """Build a polynomial from (exponent vector, coefficient) pairs.

        Repeated exponent vectors are summed; zero coefficients are dropped.

        Raises:
            ValidationError: If an exponent vector has the wrong length or a negative entry
        """
        items = terms.items() if isinstance(terms, Mapping) else terms
        collected: dict[Exponents, Fraction] = {}
        for exps, coeff in items:
            key = tuple(int(e) for e in exps)
            if len(key) != n or any(e < 0 for e in key):
                raise ValidationError(
                    "Exponent vector must have n nonnegative entries",
                    {"exponents": list(key), "n": n},
                )
            collected[key] = collected.get(key, Fraction(0)) + Fraction(coeff)

        ring = polynomial_ring(n)
        return cls(ring.from_dict({k: _to_ground(v) for k, v in collected.items() if v}))

    @classmethod
    def zero(cls, n: int) -> Polynomial:
        return cls(polynomial_ring(n).zero)

    @classmethod
    def one(cls, n: int) -> Polynomial:
        return cls(polynomial_ring(n).one)

    @classmethod
    def constant(cls, n: int, value: Scalar) -> Polynomial:
        return cls(polynomial_ring(n).ground_new(_to_ground(value)))

    @classmethod
    def monomial(cls, n: int, exponents: Sequence[int], coeff: Scalar = 1) -> Polynomial:
        return cls.from_terms(n, [(tuple(exponents), coeff)])

    @classmethod
    def variable(cls, n: int, index: int) -> Polynomial:
        """The variable X_index (1-based)."""
        if not 1 <= index <= n:
            raise ValidationError(
                f"Variable index {index} outside 1..{n}", {"index": index, "n": n}
            )
        return cls(polynomial_ring(n).gens[index - 1])

    @classmethod
    def variables(cls, n: int) -> tuple[Polynomial, ...]:
        return tuple(cls(g) for g in polynomial_ring(n).gens)

    # Inspection

    @property
    def rep(self) -> PolyElement:
        """Underlying sympy element; callers must not mutate it."""
        return self._rep

    @property
    def n(self) -> int:
        return int(self._rep.ring.ngens)

    @property
    def is_zero(self) -> bool:
        return not self._rep

    @property
    def is_constant(self) -> bool:
        return bool(self._rep.is_ground)

    @property
    def is_monomial(self) -> bool:
        return len(self._rep) == 1

    def terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in graded lex order, leading term first."""
        return [(monom, to_fraction(coeff)) for monom, coeff in self._rep.terms()]

    def monomials(self) -> list[Exponents]:
        return [monom for monom, _ in self._rep.terms()]

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return to_fraction(self._rep.get(tuple(exponents), QQ.zero))

    def constant_value(self) -> Fraction:
        """Coefficient of the constant monomial."""
        return self.coefficient((0,) * self.n)

    @property
    def leading_coefficient(self) -> Fraction:
        return to_fraction(self._rep.LC)

    @property
    def leading_monomial(self) -> Exponents:
        return tuple(self._rep.LM)

    def degree(self, index: int) -> int:
        """Degree in X_index (1-based); -1 for the zero polynomial."""
        return max((m[index - 1] for m in self._rep), default=-1)

    def low_degree(self, index: int) -> int:
        """Largest c with X_index^c dividing the polynomial; 0 for zero."""
        return min((m[index - 1] for m in self._rep), default=0)

    def degrees(self) -> Exponents:
        return tuple(self.degree(i) for i in range(1, self.n + 1))

    @property
    def total_degree(self) -> int:
        return max((sum(m) for m in self._rep), default=-1)

    @property
    def order(self) -> int:
        """Lowest total degree of a term, the largest j with f in (X1..Xn)^j."""
        if self.is_zero:
            raise ZeroPolynomialError("order")
        return min(sum(m) for m in self._rep)

    def involves_only(self, j: int) -> bool:
        """True when no variable beyond X_j occurs."""
        return all(not any(m[j:]) for m in self._rep)

    def height(self) -> int:
        """Largest absolute integer coefficient; only meaningful for integral polynomials."""
        return max((abs(c.numerator) for _, c in self.terms()), default=0)

    # Arithmetic

    def _coerce(self, other: object) -> Polynomial | None:
        if isinstance(other, Polynomial):
            if other.n != self.n:
                raise VariableCountMismatchError(self.n, other.n)
            return other
        if isinstance(other, int | Fraction):
            return Polynomial.constant(self.n, other)
        return None

    def __add__(self, other: object) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return Polynomial(self._rep + rhs._rep)

    __radd__ = __add__

    def __sub__(self, other: object) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return Polynomial(self._rep - rhs._rep)

    def __rsub__(self, other: object) -> Polynomial:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return Polynomial(lhs._rep - self._rep)

    def __mul__(self, other: object) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return Polynomial(self._rep * rhs._rep)

    __rmul__ = __mul__

    def __neg__(self) -> Polynomial:
        return Polynomial(-self._rep)

    def __pow__(self, exponent: int) -> Polynomial:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValidationError(
                "Polynomial exponent must be a nonnegative integer", {"exponent": exponent}
            )
        return Polynomial(self._rep**exponent)

    def scale(self, factor: Scalar) -> Polynomial:
        return Polynomial(self._rep.mul_ground(_to_ground(factor)))

    def shift(self, exponents: Sequence[int]) -> Polynomial:
        """Multiply by the monomial X^exponents."""
        return Polynomial(self._rep.mul_monom(tuple(exponents)))

    def divmod(self, divisor: Polynomial) -> tuple[Polynomial, Polynomial]:
        """Multivariate division by a single divisor: self = q*divisor + r."""
        rhs = self._coerce(divisor)
        assert rhs is not None
        if rhs.is_zero:
            raise ZeroDenominatorError()
        q, r = self._rep.div(rhs._rep)
        return Polynomial(q), Polynomial(r)

    def divides(self, other: Polynomial) -> bool:
        """True when self divides other exactly."""
        if self.is_zero:
            return other.is_zero
        return other.divmod(self)[1].is_zero

    def exact_div(self, divisor: Polynomial) -> Polynomial:
        """Quotient of an exact division.

        Raises:
            ZeroDenominatorError: If divisor is zero
            NotDivisibleError: If the division leaves a remainder
        """
        rhs = self._coerce(divisor)
        assert rhs is not None
        if rhs.is_zero:
            raise ZeroDenominatorError()
        with ErrorContext("Exact division", {ExactQuotientFailed: NotDivisibleError}):
            return Polynomial(self._rep.exquo(rhs._rep))

    def content_normalized(self) -> tuple[Fraction, Polynomial]:
        """Split into (c, g): self = c*g, g integral and primitive with positive leading term."""
        if self.is_zero:
            return Fraction(0), self
        coeffs = [c for _, c in self.terms()]
        common = 1
        for c in coeffs:
            common = int_lcm(common, c.denominator)
        g = 0
        for c in coeffs:
            g = int_gcd(g, int(c * common))
        content = Fraction(g, common)
        if coeffs[0] < 0:
            content = -content
        return content, self.scale(1 / content)

    def coefficients_in(self, index: int) -> dict[int, Polynomial]:
        """Coefficients f_j of X_index^j, as polynomials in the remaining n-1 variables."""
        if self.n < 2:
            raise ValidationError(
                "Splitting off a variable needs at least two variables", {"n": self.n}
            )
        grouped: dict[int, dict[Exponents, Fraction]] = {}
        for monom, coeff in self.terms():
            rest = monom[: index - 1] + monom[index:]
            grouped.setdefault(monom[index - 1], {})[rest] = coeff
        return {j: Polynomial.from_terms(self.n - 1, t) for j, t in sorted(grouped.items())}

    # Protocols

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and dict(self._rep) == dict(other._rep)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._rep.items())))
        return self._hash

    def __str__(self) -> str:
        from .parser import format_polynomial

        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self}, n={self.n})"


class PolyOpKind(Enum):
    """Polynomial operations exposed through poly_op."""

    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    POW = "pow"


def poly_op(kind: PolyOpKind | str, f: Polynomial, g: Polynomial | int) -> Polynomial:
    """Apply a ring operation; g is an exponent for POW.

    Raises:
        VariableCountMismatchError: If operands have different variable counts
        ValidationError: If a POW exponent is negative
    """
    kind = PolyOpKind(kind)
    if kind is PolyOpKind.POW:
        if isinstance(g, Polynomial):
            raise ValidationError("pow takes an integer exponent")
        return f**g
    if not isinstance(g, Polynomial):
        raise ValidationError(f"{kind.value} takes two polynomials")
    if f.n != g.n:
        raise VariableCountMismatchError(f.n, g.n)
    if kind is PolyOpKind.ADD:
        return f + g
    if kind is PolyOpKind.SUB:
        return f - g
    return f * g


def gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Greatest common divisor with content 1 and positive leading coefficient.

    gcd(0, 0) is 0; gcd(f, 0) is f normalized.
    """
    if f.n != g.n:
        raise VariableCountMismatchError(f.n, g.n)
    if f.is_zero and g.is_zero:
        return f
    if g.is_zero:
        return f.content_normalized()[1]
    if f.is_zero:
        return g.content_normalized()[1]
    return Polynomial(f.rep.gcd(g.rep)).content_normalized()[1]


@dataclass(frozen=True)
class ExponentProfile:
    """Per-variable divisibility data of a nonzero polynomial.

    t[i] is the power of X_i dividing f, deg[i] its X_i-degree and
    a[i] = deg[i] - t[i].
    """

    t: Exponents
    a: Exponents
    deg: Exponents

    def __post_init__(self) -> None:
        if not len(self.t) == len(self.a) == len(self.deg):
            raise ValidationError("Exponent profile vectors differ in length")
        if any(x < 0 for x in self.t + self.a):
            raise ValidationError("Exponent profile entries must be nonnegative")
        if any(ai + ti != di for ai, ti, di in zip(self.a, self.t, self.deg, strict=True)):
            raise ValidationError("Exponent profile must satisfy a + t = deg")


def exponent_profile(f: Polynomial) -> ExponentProfile:
    """Compute t(f), a(f) and deg(f).

    Raises:
        ZeroPolynomialError: If f is zero
    """
    if f.is_zero:
        raise ZeroPolynomialError("exponent_profile")
    t = tuple(f.low_degree(i) for i in range(1, f.n + 1))
    deg = f.degrees()
    return ExponentProfile(t=t, a=tuple(d - c for d, c in zip(deg, t, strict=True)), deg=deg)


def substitute(f: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """Replace each X_i of f by images[i] and expand.

    The images may live in any ring, provided they all share one.

    Raises:
        ArityMismatchError: If the number of images differs from f.n
        VariableCountMismatchError: If images come from different rings
    """
    if len(images) != f.n:
        raise ArityMismatchError(f.n, len(images))
    target = images[0].n
    for image in images[1:]:
        if image.n != target:
            raise VariableCountMismatchError(target, image.n)

    ring = polynomial_ring(target)
    powers: list[list[PolyElement]] = [[ring.one, image.rep] for image in images]

    def power(i: int, k: int) -> PolyElement:
        cache = powers[i]
        while len(cache) <= k:
            cache.append(cache[-1] * cache[1])
        return cache[k]

    result = ring.zero
    for monom, coeff in f.rep.items():
        term = ring.ground_new(coeff)
        for i, k in enumerate(monom):
            if k:
                term = term * power(i, k)
        result += term
    return Polynomial(result)
