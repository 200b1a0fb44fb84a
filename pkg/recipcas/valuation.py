"""Valuations on Q(X1..Xn): X_i-adic, order, weighted substitution, Gauss and lex extensions."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache, total_ordering
from math import gcd as int_gcd

from .errors import (
    IndexOutOfRangeError,
    InvalidPairError,
    InvalidSpecError,
    UnsupportedArityError,
    ValidationError,
)
from .poly import Polynomial, substitute, variable_index
from .rational import RationalFunction
from .recip import sigma

logger = logging.getLogger(__name__)


@total_ordering
@dataclass(frozen=True)
class ValueResult:
    """Valuation value: an integer, a lexicographically ordered tuple, or +infinity.

    Rank-1 values are 1-tuples; +infinity (components None) is the value of 0
    and exceeds every finite value.
    """

    components: tuple[int, ...] | None

    @classmethod
    def of(cls, *components: int) -> ValueResult:
        return cls(tuple(components))

    @property
    def is_infinite(self) -> bool:
        return self.components is None

    @property
    def rank(self) -> int | None:
        return None if self.components is None else len(self.components)

    def _finite(self, other: ValueResult) -> tuple[tuple[int, ...], tuple[int, ...]]:
        assert self.components is not None and other.components is not None
        if len(self.components) != len(other.components):
            raise ValidationError(
                "Cannot combine values of different rank",
                {"left": str(self), "right": str(other)},
            )
        return self.components, other.components

    def __add__(self, other: ValueResult) -> ValueResult:
        if self.is_infinite or other.is_infinite:
            return INFINITY
        left, right = self._finite(other)
        return ValueResult(tuple(a + b for a, b in zip(left, right, strict=True)))

    def __sub__(self, other: ValueResult) -> ValueResult:
        if other.is_infinite:
            raise ValidationError("Cannot subtract an infinite value")
        if self.is_infinite:
            return INFINITY
        left, right = self._finite(other)
        return ValueResult(tuple(a - b for a, b in zip(left, right, strict=True)))

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, ValueResult):
            return NotImplemented
        if self.is_infinite:
            return False
        if other.is_infinite:
            return True
        left, right = self._finite(other)
        return left < right

    def to_json(self) -> int | list[int] | str:
        if self.components is None:
            return "inf"
        if len(self.components) == 1:
            return self.components[0]
        return list(self.components)

    def __str__(self) -> str:
        if self.components is None:
            return "inf"
        if len(self.components) == 1:
            return str(self.components[0])
        return "(" + ", ".join(str(c) for c in self.components) + ")"


INFINITY = ValueResult(None)


# Valuation specs


@dataclass(frozen=True)
class XAdic:
    """t_i(num) - t_i(den): the power of X_index."""

    index: int

    def __str__(self) -> str:
        return f"xadic:{self.index}"


@dataclass(frozen=True)
class Order:
    """Lowest total degree, the order valuation at the origin."""

    def __str__(self) -> str:
        return "order"


@dataclass(frozen=True)
class WeightedSub:
    """v_{p,q,h}: substitute X = s^p, Y = (s-u)^q and take min{i + h*j} over s^i u^j."""

    p: int
    q: int
    h: int

    def __post_init__(self) -> None:
        validate_pair(self.p, self.q)
        if not 1 <= self.h <= self.p * self.q + 1:
            raise InvalidPairError(
                f"Weight h must lie in 1..{self.p * self.q + 1}",
                {"p": self.p, "q": self.q, "h": self.h},
            )

    def __str__(self) -> str:
        return f"wsub:{self.p},{self.q},{self.h}"


@dataclass(frozen=True)
class GaussExt:
    """min_j inner(f_j) over the coefficients f_j of X_var^j."""

    inner: ValuationSpec
    var: int

    def __str__(self) -> str:
        return f"gauss:{self.var}:{self.inner}"


@dataclass(frozen=True)
class LexComposite:
    """min_j (inner(f_j), -j) lexicographically; ties go to the largest j."""

    inner: ValuationSpec
    var: int

    def __str__(self) -> str:
        return f"lex:{self.var}:{self.inner}"


@dataclass(frozen=True)
class Sigma:
    """inner composed with the sigma involution."""

    inner: ValuationSpec

    def __str__(self) -> str:
        return f"sigma:{self.inner}"


ValuationSpec = XAdic | Order | WeightedSub | GaussExt | LexComposite | Sigma


def validate_pair(p: int, q: int, minimum_p: int = 1) -> None:
    """Require gcd(p, q) = 1 and minimum_p <= p < q.

    Raises:
        InvalidPairError: If the pair is not admissible
    """
    if not (minimum_p <= p < q) or int_gcd(p, q) != 1:
        raise InvalidPairError(
            f"Pair ({p}, {q}) must be coprime with {minimum_p} <= p < q",
            {"p": p, "q": q},
        )


def check_arity(spec: ValuationSpec, n: int) -> None:
    """Validate that spec acts on Q(X1..Xn).

    Raises:
        UnsupportedArityError: For WeightedSub with n != 2, or an extension with n < 2
        IndexOutOfRangeError: If a variable index is outside 1..n
    """
    match spec:
        case XAdic(index=index):
            if not 1 <= index <= n:
                raise IndexOutOfRangeError(index, n)
        case Order():
            pass
        case WeightedSub():
            if n != 2:
                raise UnsupportedArityError("WeightedSub", 2, n)
        case GaussExt(inner=inner, var=var) | LexComposite(inner=inner, var=var):
            if n < 2:
                raise UnsupportedArityError(type(spec).__name__, 2, n)
            if not 1 <= var <= n:
                raise IndexOutOfRangeError(var, n)
            check_arity(inner, n - 1)
        case Sigma(inner=inner):
            check_arity(inner, n)


def rank(spec: ValuationSpec) -> int:
    """Length of the value tuples spec produces."""
    match spec:
        case GaussExt(inner=inner) | Sigma(inner=inner):
            return rank(inner)
        case LexComposite(inner=inner):
            return rank(inner) + 1
        case _:
            return 1


@lru_cache(maxsize=64)
def _weighted_images(p: int, q: int) -> tuple[Polynomial, Polynomial]:
    s, u = Polynomial.variables(2)
    return s**p, (s - u) ** q


def _polynomial_value(spec: ValuationSpec, f: Polynomial) -> ValueResult:
    """Value of a nonzero polynomial."""
    match spec:
        case XAdic(index=index):
            return ValueResult.of(f.low_degree(index))
        case Order():
            return ValueResult.of(f.order)
        case WeightedSub(p=p, q=q, h=h):
            expanded = substitute(f, _weighted_images(p, q))
            return ValueResult.of(min(i + h * j for i, j in expanded.monomials()))
        case GaussExt(inner=inner, var=var):
            return min(
                value(inner, RationalFunction.from_polynomial(coeff))
                for coeff in f.coefficients_in(var).values()
            )
        case LexComposite(inner=inner, var=var):
            inner_min, k = min(
                (
                    (value(inner, RationalFunction.from_polynomial(coeff)), -j)
                    for j, coeff in f.coefficients_in(var).items()
                ),
            )
            assert inner_min.components is not None
            return ValueResult(inner_min.components + (k,))
        case Sigma(inner=inner):
            return value(inner, sigma(RationalFunction.from_polynomial(f)))
    raise InvalidSpecError(f"Unsupported valuation spec {spec!r}")


def value(spec: ValuationSpec, r: RationalFunction | Polynomial) -> ValueResult:
    """Valuation of r, +infinity when r is zero.

    Raises:
        UnsupportedArityError: If spec does not act on r's variable count
    """
    if isinstance(r, Polynomial):
        r = RationalFunction.from_polynomial(r)
    check_arity(spec, r.n)
    if r.is_zero:
        return INFINITY
    return _polynomial_value(spec, r.num) - _polynomial_value(spec, r.den)


def theta(p: int, q: int) -> RationalFunction:
    """theta_{p,q} = sigma(1/(X^q - Y^p)) = X^q Y^p / (Y^p - X^q).

    Raises:
        InvalidPairError: Unless gcd(p, q) = 1 and 0 < p < q
    """
    validate_pair(p, q)
    x, y = Polynomial.variables(2)
    return RationalFunction(x**q * y**p, y**p - x**q)


def beta(p: int, q: int) -> tuple[RationalFunction, int, int]:
    """beta_{p,q} = X^(2q-c) Y^d / (X^q - Y^p) with qd - pc = 1, 0 < c < q, 0 < d < p.

    Raises:
        InvalidPairError: Unless gcd(p, q) = 1 and 1 < p < q

    Returns:
        Tuple of (beta, c, d)
    """
    validate_pair(p, q, minimum_p=2)
    d = pow(q, -1, p)
    c = (q * d - 1) // p
    x, y = Polynomial.variables(2)
    return RationalFunction(x ** (2 * q - c) * y**d, x**q - y**p), c, d


# Grammar: xadic:i | order | wsub:p,q,h | gauss:VAR:SPEC | lex:VAR:SPEC | sigma:SPEC
# Inner gauss/lex specs are read over the n-1 variables left after removing VAR.


def _parse_int(token: str, text: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise InvalidSpecError(
            f"Expected an integer in valuation spec, got '{token}'", {"spec": text}
        ) from None


def _parse_var(token: str, n: int) -> int:
    return int(token) if token.isdigit() else variable_index(token, n)


def parse_valuation_spec(text: str, n: int) -> ValuationSpec:
    """Parse SPEC text for Q(X1..Xn) and validate its arity.

    Args:
        text: Spec text such as 'order', 'wsub:2,3,7' or 'lex:Y:xadic:1'. The inner
            SPEC of gauss/lex names the remaining n-1 variables renumbered in
            order, so for n = 3 'gauss:Y:xadic:Y' is the Z-adic inner valuation
        n: Variable count the spec acts on

    Raises:
        InvalidSpecError: If the text is malformed
        UnsupportedArityError: If the spec needs another variable count

    Returns:
        Parsed valuation spec
    """
    spec = _parse_spec(text.strip(), n, text)
    check_arity(spec, n)
    return spec


def _parse_spec(text: str, n: int, original: str) -> ValuationSpec:
    head, _, rest = text.partition(":")
    head = head.lower()

    if head == "order" and not rest:
        return Order()
    if head == "xadic" and rest:
        return XAdic(_parse_var(rest, n))
    if head == "wsub" and rest:
        parts = rest.split(",")
        if len(parts) != 3:
            raise InvalidSpecError("wsub needs three integers p,q,h", {"spec": original})
        p, q, h = (_parse_int(part.strip(), original) for part in parts)
        if n != 2:
            raise UnsupportedArityError("WeightedSub", 2, n)
        return WeightedSub(p, q, h)
    if head in ("gauss", "lex") and rest:
        var_token, _, inner_text = rest.partition(":")
        if not inner_text:
            raise InvalidSpecError(f"{head} needs VAR:SPEC", {"spec": original})
        var = _parse_var(var_token, n)
        inner = _parse_spec(inner_text, n - 1, original)
        return GaussExt(inner, var) if head == "gauss" else LexComposite(inner, var)
    if head == "sigma" and rest:
        return Sigma(_parse_spec(rest, n, original))

    raise InvalidSpecError(f"Unrecognized valuation spec '{original}'", {"spec": original})
