"""Test configuration and fixtures."""

import random
from collections.abc import Callable, Generator

import pytest

from recipcas.config import init_settings, reset_settings
from recipcas.parser import parse_expression
from recipcas.poly import Polynomial
from recipcas.rational import RationalFunction
from recipcas.recip import RecipSum
from recipcas.sampling import random_polynomial

# Environment the suite runs under; settings are re-read for every test.
TEST_ENV = {
    "RECIPCAS_SEED": "20240917",
    "RECIPCAS_TERM_BUDGET": "100000",
    "RECIPCAS_VARS": "2",
    "RECIPCAS_WORKERS": "4",
    "LOG_LEVEL": "WARNING",
}


@pytest.fixture(autouse=True)
def setup_test_env(monkeypatch: pytest.MonkeyPatch) -> Generator[None, None, None]:
    """Setup test environment variables and fresh global settings."""
    for name, value in TEST_ENV.items():
        monkeypatch.setenv(name, value)
    reset_settings()
    init_settings()

    yield

    reset_settings()


# Algebra fixtures


@pytest.fixture
def xy() -> tuple[Polynomial, Polynomial]:
    """The variables X, Y of Q[X, Y]."""
    x, y = Polynomial.variables(2)
    return x, y


@pytest.fixture
def xyz() -> tuple[Polynomial, Polynomial, Polynomial]:
    """The variables X, Y, Z of Q[X, Y, Z]."""
    x, y, z = Polynomial.variables(3)
    return x, y, z


@pytest.fixture
def rng() -> random.Random:
    """Seeded random source for property tests."""
    return random.Random(1729)


@pytest.fixture
def poly_sampler(rng: random.Random) -> Callable[..., Polynomial]:
    """Draw random nonzero polynomials from the seeded source."""

    def sample(n: int = 2, **kwargs: int | bool) -> Polynomial:
        return random_polynomial(rng, n, **kwargs)  # type: ignore[arg-type]

    return sample


@pytest.fixture
def parse() -> Callable[[str], Polynomial | RationalFunction | RecipSum]:
    """Parse expressions over Q(X, Y)."""

    def _parse(text: str, n: int = 2) -> Polynomial | RationalFunction | RecipSum:
        return parse_expression(text, n)

    return _parse
