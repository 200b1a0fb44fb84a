"""Reciprocal sums Σ 1/f_i, the sigma involution, the star transform and unit inversion."""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property, reduce
from operator import mul

from .config import get_settings
from .errors import (
    InternalContradictionError,
    NotAUnitError,
    TermBudgetExceededError,
    ValidationError,
    VariableCountMismatchError,
    ZeroPolynomialError,
)
from .observability import TimedOperation
from .poly import Exponents, Polynomial, exponent_profile
from .rational import RationalFunction

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RecipSum:
    """Finite multiset of nonzero denominators standing for Σ 1/f_i.

    Denominators are kept unexpanded; the rational value is only computed by
    recip_normalize (and cached on the instance).
    """

    n: int
    denoms: tuple[Polynomial, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "denoms", tuple(self.denoms))
        for f in self.denoms:
            if f.n != self.n:
                raise VariableCountMismatchError(self.n, f.n)
            if f.is_zero:
                raise ZeroPolynomialError("RecipSum denominator")

    @classmethod
    def of(cls, *denoms: Polynomial, n: int | None = None) -> RecipSum:
        """Build from denominators; n is inferred unless the sum is empty."""
        if n is None:
            if not denoms:
                raise ValidationError("An empty RecipSum needs an explicit variable count")
            n = denoms[0].n
        return cls(n, denoms)

    def __len__(self) -> int:
        return len(self.denoms)

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.denoms)

    @cached_property
    def value(self) -> RationalFunction:
        return recip_normalize(self)

    def value_equals(self, other: RecipSum) -> bool:
        return self.value == other.value

    def collect(self) -> RecipSum:
        """Merge like terms without changing the value.

        Each denominator is written c*g with g primitive; reciprocals sharing g
        are added up and re-emitted as a single 1/(g/s), cancelling groups vanish.
        """
        return RecipSum(
            self.n,
            tuple(g.scale(1 / s) for g, s in _grouped(self.denoms).items() if s != 0),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RecipSum):
            return NotImplemented
        return self.n == other.n and Counter(self.denoms) == Counter(other.denoms)

    def __hash__(self) -> int:
        return hash((self.n, frozenset(Counter(self.denoms).items())))

    def __str__(self) -> str:
        from .parser import format_recip

        return format_recip(self)

    def __repr__(self) -> str:
        return f"RecipSum({self}, n={self.n})"


def _grouped(denoms: Iterable[Polynomial]) -> dict[Polynomial, Fraction]:
    """Map each primitive part g to the coefficient s of 1/g in Σ 1/f."""
    groups: dict[Polynomial, Fraction] = {}
    for f in denoms:
        content, primitive = f.content_normalized()
        groups[primitive] = groups.get(primitive, Fraction(0)) + 1 / content
    return groups


def _balanced_sum(parts: Sequence[RationalFunction], n: int) -> RationalFunction:
    if not parts:
        return RationalFunction.zero(n)
    layer = list(parts)
    while len(layer) > 1:
        paired = [layer[i] + layer[i + 1] for i in range(0, len(layer) - 1, 2)]
        if len(layer) % 2:
            paired.append(layer[-1])
        layer = paired
    return layer[0]


def recip_normalize(alpha: RecipSum) -> RationalFunction:
    """Canonical rational function equal to Σ 1/f_i."""
    parts = [
        RationalFunction(Polynomial.constant(alpha.n, s), g)
        for g, s in _grouped(alpha.denoms).items()
        if s != 0
    ]
    return _balanced_sum(parts, alpha.n)


class RecipCombineKind(Enum):
    """Representation-level operations on reciprocal sums."""

    ADD = "add"
    MUL = "mul"
    NEG = "neg"


def recip_combine(
    kind: RecipCombineKind | str, alpha: RecipSum, beta: RecipSum | None = None
) -> RecipSum:
    """Combine reciprocal sums without normalizing.

    ADD is multiset union, MUL takes all pairwise products of denominators and
    NEG negates every denominator of alpha (beta is ignored).
    """
    kind = RecipCombineKind(kind)
    if kind is RecipCombineKind.NEG:
        return RecipSum(alpha.n, tuple(-f for f in alpha.denoms))
    if beta is None:
        raise ValidationError(f"recip_combine {kind.value} needs two operands")
    if alpha.n != beta.n:
        raise VariableCountMismatchError(alpha.n, beta.n)
    if kind is RecipCombineKind.ADD:
        return RecipSum(alpha.n, alpha.denoms + beta.denoms)
    return RecipSum(alpha.n, tuple(f * g for f in alpha.denoms for g in beta.denoms))


def _monomial(n: int, exponents: Exponents) -> Polynomial:
    return Polynomial.monomial(n, exponents)


def _reverse(f: Polynomial) -> tuple[Polynomial, Exponents]:
    """Return (rev, d) with f(1/X1..1/Xn) = rev / X^d."""
    deg = f.degrees()
    rev = Polynomial.from_terms(
        f.n, [(tuple(d - e for d, e in zip(deg, monom, strict=True)), c) for monom, c in f.terms()]
    )
    return rev, deg


def sigma(r: RationalFunction) -> RationalFunction:
    """Image of r under X_i -> 1/X_i; an involution fixing the constants."""
    if r.is_zero or r.is_constant:
        return r
    num_rev, num_deg = _reverse(r.num)
    den_rev, den_deg = _reverse(r.den)
    return RationalFunction(num_rev.shift(den_deg), den_rev.shift(num_deg))


@dataclass(frozen=True)
class StarForm:
    """f* with the exponent vectors a(f) and t(f), so that sigma(1/f) = X^(a+t)/f*."""

    fstar: Polynomial
    a: Exponents
    t: Exponents

    @property
    def n(self) -> int:
        return self.fstar.n

    def sigma_reciprocal(self) -> RationalFunction:
        """The quotient X^(a+t)/f*."""
        shift = tuple(ai + ti for ai, ti in zip(self.a, self.t, strict=True))
        return RationalFunction(_monomial(self.n, shift), self.fstar)

    def reconstruct(self) -> Polynomial:
        """X^t * (f*)*, which gives back the original polynomial."""
        return star_transform(self.fstar).fstar.shift(self.t)


def star_transform(f: Polynomial) -> StarForm:
    """Compute the star form of a nonzero polynomial.

    With f = X^t * f0, the coefficient of f* at a - j is the coefficient of f0 at j.

    Raises:
        ZeroPolynomialError: If f is zero
    """
    if f.is_zero:
        raise ZeroPolynomialError("star_transform")
    profile = exponent_profile(f)
    # a - (e - t) = deg - e
    fstar, _ = _reverse(f)
    return StarForm(fstar=fstar, a=profile.a, t=profile.t)


def is_unit(alpha: RecipSum) -> tuple[bool, Fraction]:
    """Unit test through the constant residue Σ 1/c over constant denominators.

    Nonconstant reciprocals lie in the maximal ideal, so the residue alone
    decides whether the value is a unit.
    """
    residue = sum(
        (1 / f.constant_value() for f in alpha.denoms if f.is_constant),
        start=Fraction(0),
    )
    return residue != 0, residue


class _UnitInverter:
    """Inverse of 1 + Σ 1/x_i by the reverse recursion on H_k.

    H_m = 1/(∏x_i + Σ_i ∏_{j≠i} x_j), and for k = m-1 .. 0
    H_k = (∏_{i<=k} 1/x_i - H_{k+1}) * (1 + Σ_{i≠k+1} 1/x_i)^(-1),
    the last factor being a unit with one nonconstant term fewer. H_0 is the inverse.
    """

    def __init__(self, n: int, budget: int) -> None:
        self.n = n
        self.budget = budget
        self._memo: dict[tuple[Polynomial, ...], RecipSum] = {}

    def _check(self, required: int) -> None:
        if required > self.budget:
            raise TermBudgetExceededError(self.budget, required)

    def _add(self, alpha: RecipSum, beta: RecipSum) -> RecipSum:
        self._check(len(alpha) + len(beta))
        return recip_combine(RecipCombineKind.ADD, alpha, beta).collect()

    def _mul(self, alpha: RecipSum, beta: RecipSum) -> RecipSum:
        self._check(len(alpha) * len(beta))
        return recip_combine(RecipCombineKind.MUL, alpha, beta).collect()

    def inverse(self, xs: tuple[Polynomial, ...]) -> RecipSum:
        cached = self._memo.get(xs)
        if cached is not None:
            return cached

        one = Polynomial.one(self.n)
        if not xs:
            result = RecipSum(self.n, (one,))
        else:
            product = reduce(mul, xs, one)
            cofactors = sum(
                (reduce(mul, xs[:i] + xs[i + 1 :], one) for i in range(len(xs))),
                start=Polynomial.zero(self.n),
            )
            h = RecipSum(self.n, (product + cofactors,))
            for k in range(len(xs) - 1, -1, -1):
                head = RecipSum(self.n, (reduce(mul, xs[:k], one),))
                rest = self.inverse(xs[:k] + xs[k + 1 :])
                h = self._mul(self._add(head, recip_combine(RecipCombineKind.NEG, h)), rest)
            result = h

        self._memo[xs] = result
        return result


def invert_unit(alpha: RecipSum, budget: int | None = None, verify: bool = True) -> RecipSum:
    """Inverse of a unit of R as an explicit reciprocal sum.

    The constant residue u is factored out first: α = u(1 + Σ 1/(u f_i)) over
    the nonconstant f_i, and α^(-1) = (1/u) * (1 + Σ 1/x_i)^(-1).

    Args:
        alpha: Reciprocal sum with nonzero constant residue
        budget: Maximum number of denominators any intermediate step may produce
            (defaults to the configured term budget)
        verify: Re-check that the product of values is 1

    Raises:
        NotAUnitError: If the constant residue is zero
        TermBudgetExceededError: If an intermediate step would exceed the budget
        InternalContradictionError: If verification fails

    Returns:
        RecipSum whose value is the inverse of alpha's value
    """
    flag, residue = is_unit(alpha)
    if not flag:
        raise NotAUnitError(str(alpha))
    budget = get_settings().term_budget if budget is None else budget

    xs = tuple(f.scale(residue) for f in alpha.denoms if not f.is_constant)
    with TimedOperation("invert_unit", {"nonconstant_terms": len(xs), "budget": budget}):
        inverter = _UnitInverter(alpha.n, budget)
        core = inverter.inverse(xs)
        scale = RecipSum(alpha.n, (Polynomial.constant(alpha.n, residue),))
        result = recip_combine(RecipCombineKind.MUL, scale, core).collect()

    logger.debug(
        "Unit inverted",
        extra={"nonconstant_terms": len(xs), "inverse_terms": len(result)},
    )
    if verify and alpha.value * result.value != RationalFunction.one(alpha.n):
        raise InternalContradictionError(
            "Unit inverse does not multiply to 1",
            {"alpha": str(alpha), "inverse": str(result)},
        )
    return result
