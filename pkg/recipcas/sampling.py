"""Seeded random samplers for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .poly import Exponents, Polynomial
from .rational import RationalFunction
from .recip import RecipSum


def _random_exponents(rng: random.Random, n: int, max_degree: int) -> Exponents:
    budget = rng.randint(0, max_degree)
    exps = [0] * n
    for _ in range(budget):
        exps[rng.randrange(n)] += 1
    return tuple(exps)


def random_polynomial(
    rng: random.Random,
    n: int,
    max_degree: int = 3,
    height: int = 5,
    max_terms: int = 4,
    nonconstant: bool = False,
) -> Polynomial:
    """Nonzero polynomial, integer coefficients in [-height, height], total degree <= max_degree."""
    while True:
        terms = [
            (_random_exponents(rng, n, max_degree), rng.choice([-1, 1]) * rng.randint(1, height))
            for _ in range(rng.randint(1, max_terms))
        ]
        f = Polynomial.from_terms(n, terms)
        if f.is_zero or (nonconstant and f.is_constant):
            continue
        return f


def random_rational(
    rng: random.Random, n: int, max_degree: int = 3, height: int = 5
) -> RationalFunction:
    return RationalFunction(
        random_polynomial(rng, n, max_degree, height),
        random_polynomial(rng, n, max_degree, height),
    )


def random_recip_sum(
    rng: random.Random,
    n: int,
    max_terms: int = 4,
    max_degree: int = 3,
    height: int = 5,
    nonconstant: bool = True,
) -> RecipSum:
    return RecipSum(
        n,
        tuple(
            random_polynomial(rng, n, max_degree, height, nonconstant=nonconstant)
            for _ in range(rng.randint(1, max_terms))
        ),
    )


def random_unit(
    rng: random.Random,
    n: int,
    max_nonconstant: int = 2,
    max_degree: int = 3,
    height: int = 5,
) -> RecipSum:
    """Reciprocal sum with one nonzero constant term and up to max_nonconstant others."""
    constant = Fraction(rng.choice([-1, 1]) * rng.randint(1, height), rng.randint(1, height))
    nonconstant = tuple(
        random_polynomial(rng, n, max_degree, height, max_terms=3, nonconstant=True)
        for _ in range(rng.randint(0, max_nonconstant))
    )
    return RecipSum(n, (Polynomial.constant(n, constant),) + nonconstant)
