"""Length machinery for reciprocal sums: cofactors, term removal, bounded search, restriction."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from math import gcd as int_gcd
from operator import mul

from sympy import Matrix, Rational

from .errors import (
    IndexOutOfRangeError,
    InternalContradictionError,
    PreconditionViolatedError,
    ValidationError,
    ZeroValueError,
)
from .observability import TimedOperation
from .poly import Exponents, Polynomial
from .rational import RationalFunction
from .recip import RecipSum

logger = logging.getLogger(__name__)


def cofactor_product(alpha: RecipSum) -> Polynomial:
    """Return F*alpha for F = ∏ f_i, that is Σ_i ∏_{j≠i} f_j.

    The identity 1/F = (1/(F*alpha)) * alpha is re-checked before returning.

    Raises:
        ZeroValueError: If alpha's value is zero
        InternalContradictionError: If the identity fails
    """
    value = alpha.value
    if value.is_zero:
        raise ZeroValueError("cofactor_product")

    one = Polynomial.one(alpha.n)
    denoms = alpha.denoms
    full = reduce(mul, denoms, one)
    cofactor = sum(
        (reduce(mul, denoms[:i] + denoms[i + 1 :], one) for i in range(len(denoms))),
        start=Polynomial.zero(alpha.n),
    )

    if RationalFunction(one, full) != RationalFunction(one, cofactor) * value:
        raise InternalContradictionError(
            "Cofactor identity failed", {"alpha": str(alpha), "cofactor": str(cofactor)}
        )
    return cofactor


def reduce_length_step(alpha: RecipSum, index: int) -> RecipSum:
    """Drop the denominator at a 1-based index.

    Raises:
        IndexOutOfRangeError: If index is outside 1..len(alpha)
    """
    if not 1 <= index <= len(alpha):
        raise IndexOutOfRangeError(index, len(alpha))
    denoms = alpha.denoms
    return RecipSum(alpha.n, denoms[: index - 1] + denoms[index:])


def _monomials_up_to(n: int, degree: int) -> list[Exponents]:
    """Exponent vectors of total degree <= degree, lowest degree first."""
    vectors = [e for e in product(range(degree + 1), repeat=n) if sum(e) <= degree]
    return sorted(vectors, key=lambda e: (sum(e), tuple(-x for x in e)))


def length_candidates(n: int, degree_bound: int, coeff_height_bound: int) -> list[Polynomial]:
    """Integral polynomials of content 1 (either sign) within the degree and height bounds.

    Smaller supports come first so short representations are found early.
    """
    monomials = _monomials_up_to(n, degree_bound)
    values = [c for c in range(-coeff_height_bound, coeff_height_bound + 1) if c]
    candidates = []
    for size in range(1, len(monomials) + 1):
        for support in combinations(monomials, size):
            for coeffs in product(values, repeat=size):
                if reduce(int_gcd, coeffs, 0) != 1:
                    continue
                candidates.append(Polynomial.from_terms(n, zip(support, coeffs, strict=True)))
    return candidates


def _within_bounds(f: Polynomial, degree_bound: int, coeff_height_bound: int) -> bool:
    return f.total_degree <= degree_bound and f.height() <= coeff_height_bound


def _rational(value: Fraction) -> Rational:
    return Rational(value.numerator, value.denominator)


def solve_scalars(r: RationalFunction, denominators: Sequence[Polynomial]) -> list[Fraction] | None:
    """Rationals c_i with r = Σ c_i/g_i for the given g_i, or None when none exist.

    Multiplying through by G = ∏ g_i turns the question into a linear system
    r*G = Σ c_i * (G/g_i) over the monomial coefficients. Free parameters of an
    underdetermined system are set to zero.
    """
    full = reduce(mul, denominators, Polynomial.one(r.n))
    if not r.den.divides(full):
        return None
    target = (r.num * full).exact_div(r.den)
    cofactors = [full.exact_div(g) for g in denominators]

    monomials = sorted(set(target.monomials()).union(*(h.monomials() for h in cofactors)))
    system = Matrix([[_rational(h.coefficient(m)) for h in cofactors] for m in monomials])
    rhs = Matrix([_rational(target.coefficient(m)) for m in monomials])
    try:
        solution, params = system.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    solution = solution.subs({param: 0 for param in params})
    return [Fraction(int(c.p), int(c.q)) for c in solution]


def brute_force_length(
    r: RationalFunction,
    degree_bound: int,
    coeff_height_bound: int,
    term_bound: int,
) -> int | None:
    """Smallest t <= term_bound with r = Σ_{i<=t} 1/f_i over the bounded candidate set.

    Each f_i is a rational multiple of a candidate from length_candidates, so
    2/X + 3/Y = 1/(X/2) + 1/(Y/3) has length 2. For every set of t distinct
    candidates g_i the scalars c_i in Σ c_i/g_i are solved for exactly. The search
    is exhaustive, so None means no representation exists within the bounds.

    Raises:
        ValidationError: If a bound is negative
        InternalContradictionError: If a minimal representation has a zero scalar
    """
    if min(degree_bound, coeff_height_bound, term_bound) < 0:
        raise ValidationError(
            "Length search bounds must be nonnegative",
            {"degree": degree_bound, "height": coeff_height_bound, "terms": term_bound},
        )
    if r.is_zero:
        return 0

    with TimedOperation(
        "brute_force_length",
        {"degree": degree_bound, "height": coeff_height_bound, "terms": term_bound},
    ):
        if (
            term_bound >= 1
            and r.num.is_constant
            and _within_bounds(r.den, degree_bound, coeff_height_bound)
        ):
            return 1
        if term_bound < 2 or coeff_height_bound == 0:
            return None

        # scalars are free, so one sign per candidate is enough
        candidates = [
            f
            for f in length_candidates(r.n, degree_bound, coeff_height_bound)
            if f.leading_coefficient > 0
        ]
        logger.debug("Length candidates built", extra={"candidates": len(candidates)})

        for t in range(2, term_bound + 1):
            for chosen in combinations(candidates, t):
                scalars = solve_scalars(r, chosen)
                if scalars is None:
                    continue
                # a zero scalar would be a shorter representation, already ruled out
                if 0 in scalars:
                    raise InternalContradictionError(
                        "Minimal representation has a vanishing term",
                        {"value": str(r), "denominators": [str(g) for g in chosen]},
                    )
                logger.debug(
                    "Length found",
                    extra={"length": t, "denominators": [str(g) for g in chosen]},
                )
                return t
    return None


def restrict_to_subring(alpha: RecipSum, j: int) -> RecipSum:
    """Keep the denominators lying in Q[X1..Xj] when alpha's value lies in Q(X1..Xj).

    The discarded reciprocals must sum to zero; the variable count is unchanged.

    Raises:
        IndexOutOfRangeError: If j is outside 1..n
        PreconditionViolatedError: If the value involves a variable beyond X_j
        InternalContradictionError: If the discarded terms do not cancel
    """
    if not 1 <= j <= alpha.n:
        raise IndexOutOfRangeError(j, alpha.n)
    if not alpha.value.involves_only(j):
        raise PreconditionViolatedError(
            f"Value involves variables beyond X{j}", {"alpha": str(alpha), "j": j}
        )

    kept = tuple(f for f in alpha.denoms if f.involves_only(j))
    discarded = RecipSum(alpha.n, tuple(f for f in alpha.denoms if not f.involves_only(j)))
    if not discarded.value.is_zero:
        raise InternalContradictionError(
            "Discarded reciprocals do not cancel",
            {"alpha": str(alpha), "discarded": str(discarded.value)},
        )
    logger.debug(
        "Restricted to subring",
        extra={"j": j, "kept": len(kept), "discarded": len(discarded)},
    )
    return RecipSum(alpha.n, kept)
