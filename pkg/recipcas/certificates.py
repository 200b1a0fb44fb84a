"""Executable certificates: exact re-derivations of identities and valuation inequalities.

Each certificate returns a CertificateReport listing the witnesses it computed
and every failed comparison. Certificates are registered by name with the
``@certificate`` decorator and can be run singly or all together.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Callable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from operator import mul
from typing import Any, TypeVar

from pydantic import BaseModel, ConfigDict, model_validator

from .config import get_settings
from .errors import (
    BaseError,
    InvalidPairError,
    PreconditionViolatedError,
    UnknownCertificateError,
    ValidationError,
    ZeroValueError,
)
from .observability import TimedOperation
from .poly import Polynomial, substitute
from .rational import RationalFunction
from .recip import (
    RecipCombineKind,
    RecipSum,
    invert_unit,
    is_unit,
    recip_combine,
    recip_normalize,
    sigma,
    star_transform,
)
from .sampling import random_polynomial, random_rational, random_recip_sum, random_unit
from .valuation import (
    GaussExt,
    LexComposite,
    Order,
    Sigma,
    ValueResult,
    WeightedSub,
    XAdic,
    beta,
    theta,
    validate_pair,
    value,
)

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., "CertificateReport"])


class Witness(BaseModel):
    """A computed value, printed in canonical form."""

    model_config = ConfigDict(frozen=True)

    label: str
    value: str


class Failure(BaseModel):
    """A comparison that did not hold."""

    model_config = ConfigDict(frozen=True)

    label: str
    expected: str
    actual: str


class CertificateReport(BaseModel):
    """Structured pass/fail record of one certificate run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    parameters: dict[str, Any]
    passed: bool
    witnesses: list[Witness]
    failures: list[Failure]
    seed: int | None = None

    @model_validator(mode="after")
    def validate_passed(self) -> "CertificateReport":
        """A report passes exactly when it records no failures."""
        if self.passed != (not self.failures):
            raise ValueError("passed must equal (failures is empty)")
        return self

    def to_text(self) -> str:
        """Aligned human-readable rendering."""
        params = ", ".join(f"{k}={v}" for k, v in self.parameters.items()) or "-"
        lines = [
            f"{'certificate':<12} {self.name}",
            f"{'parameters':<12} {params}",
            f"{'seed':<12} {'-' if self.seed is None else self.seed}",
            f"{'status':<12} {'PASSED' if self.passed else 'FAILED'}",
        ]
        if self.witnesses:
            width = max(len(w.label) for w in self.witnesses)
            lines.append("witnesses:")
            lines.extend(f"  {w.label:<{width}}  {w.value}" for w in self.witnesses)
        if self.failures:
            lines.append("failures:")
            lines.extend(
                f"  {f.label}: expected {f.expected}, got {f.actual}" for f in self.failures
            )
        return "\n".join(lines)


class SuiteReport(BaseModel):
    """Reports of a full certificate run, in name order."""

    model_config = ConfigDict(frozen=True)

    passed: bool
    reports: list[CertificateReport]

    @classmethod
    def of(cls, reports: list[CertificateReport]) -> "SuiteReport":
        return cls(passed=all(report.passed for report in reports), reports=reports)

    def to_text(self) -> str:
        failed = [report.name for report in self.reports if not report.passed]
        summary = f"{len(self.reports)} certificate(s), {len(failed)} failed"
        if failed:
            summary += ": " + ", ".join(failed)
        return "\n\n".join([*(report.to_text() for report in self.reports), summary])


class ReportBuilder:
    """Collects witnesses and failures while a certificate runs."""

    def __init__(self, name: str, parameters: dict[str, Any], seed: int | None = None) -> None:
        self.name = name
        self.parameters = parameters
        self.seed = seed
        self.witnesses: list[Witness] = []
        self.failures: list[Failure] = []

    def witness(self, label: str, value: object) -> None:
        self.witnesses.append(Witness(label=label, value=str(value)))

    def expect(self, label: str, expected: object, actual: object) -> bool:
        """Record a failure unless expected == actual (exact comparison)."""
        if expected == actual:
            return True
        self.failures.append(Failure(label=label, expected=str(expected), actual=str(actual)))
        return False

    def require(self, label: str, condition: bool, expected: str, actual: object) -> bool:
        """Record a failure unless condition holds."""
        if not condition:
            self.failures.append(Failure(label=label, expected=expected, actual=str(actual)))
        return condition

    def build(self) -> CertificateReport:
        return CertificateReport(
            name=self.name,
            parameters=self.parameters,
            passed=not self.failures,
            witnesses=self.witnesses,
            failures=self.failures,
            seed=self.seed,
        )


# Registry


class ParamKind(Enum):
    """How a certificate parameter is read from CLI tokens or JSON values."""

    INT = "int"
    SEED = "seed"
    PAIRS = "pairs"
    POLYNOMIAL = "polynomial"
    RATIONAL = "rational"
    RECIP = "recip"


@dataclass(frozen=True)
class CertificateParam:
    """Declared parameter; PAIRS parameters consume all remaining CLI tokens."""

    name: str
    kind: ParamKind
    default: Any = None


@dataclass(frozen=True)
class CertificateSpec:
    name: str
    handler: Callable[..., CertificateReport]
    params: tuple[CertificateParam, ...] = field(default=())
    description: str = ""


def _parse_pair(raw: Any) -> tuple[int, int]:
    try:
        if isinstance(raw, str):
            p, q = (int(part) for part in raw.strip("() ").split(","))
        else:
            p, q = (int(part) for part in raw)
    except (TypeError, ValueError):
        raise ValidationError(f"Expected a pair 'p,q', got '{raw}'") from None
    return p, q


def coerce_param(param: CertificateParam, raw: Any, n: int = 2) -> Any:
    """Convert a CLI token (or JSON value) to the parameter's Python value."""
    from .parser import parse_expression

    if param.kind in (ParamKind.INT, ParamKind.SEED):
        if raw is None and param.kind is ParamKind.SEED:
            return None
        try:
            return int(raw)
        except (TypeError, ValueError):
            raise ValidationError(
                f"Parameter '{param.name}' expects an integer, got '{raw}'",
                {"parameter": param.name},
            ) from None
    if param.kind is ParamKind.PAIRS:
        items = raw.split() if isinstance(raw, str) else raw
        return [_parse_pair(item) for item in items]

    parsed = parse_expression(raw, n) if isinstance(raw, str) else raw
    if param.kind is ParamKind.POLYNOMIAL:
        if isinstance(parsed, RationalFunction) and parsed.is_polynomial:
            return parsed.as_polynomial()
        if isinstance(parsed, Polynomial):
            return parsed
    elif param.kind is ParamKind.RATIONAL:
        if isinstance(parsed, Polynomial):
            return RationalFunction.from_polynomial(parsed)
        if isinstance(parsed, RecipSum):
            return parsed.value
        if isinstance(parsed, RationalFunction):
            return parsed
    elif param.kind is ParamKind.RECIP:
        if isinstance(parsed, RecipSum):
            return parsed
    raise ValidationError(
        f"Parameter '{param.name}' expects a {param.kind.value}, got '{raw}'",
        {"parameter": param.name},
    )


class CertificateRegistry:
    """Registry of named certificates."""

    def __init__(self) -> None:
        self._certificates: dict[str, CertificateSpec] = {}

    def register(self, spec: CertificateSpec) -> None:
        self._certificates[spec.name] = spec
        logger.debug("Registered certificate", extra={"certificate": spec.name})

    def get(self, name: str) -> CertificateSpec:
        """Look up a certificate.

        Raises:
            UnknownCertificateError: If no certificate has this name
        """
        spec = self._certificates.get(name)
        if spec is None:
            raise UnknownCertificateError(name, self.names())
        return spec

    def names(self) -> list[str]:
        return sorted(self._certificates)

    def bind(
        self,
        name: str,
        positional: Sequence[str] = (),
        named: Mapping[str, Any] | None = None,
        n: int = 2,
    ) -> dict[str, Any]:
        """Resolve parameters from CLI tokens and/or a mapping, filling defaults.

        Raises:
            ValidationError: On surplus, unknown or malformed parameters
        """
        spec = self.get(name)
        named = dict(named or {})
        unknown = set(named) - {p.name for p in spec.params}
        if unknown:
            raise ValidationError(
                f"Unknown parameter(s) for {name}: {', '.join(sorted(unknown))}",
                {"certificate": name, "parameters": sorted(unknown)},
            )

        tokens = list(positional)
        values: dict[str, Any] = {}
        for param in spec.params:
            if tokens:
                if param.kind is ParamKind.PAIRS:
                    raw: Any = tokens
                    tokens = []
                else:
                    raw = tokens.pop(0)
            else:
                raw = named.get(param.name, param.default)
            values[param.name] = coerce_param(param, raw, n)
        if tokens:
            raise ValidationError(
                f"Too many parameters for {name}: {' '.join(tokens)}",
                {"certificate": name, "expected": [p.name for p in spec.params]},
            )
        return values

    def run(
        self,
        name: str,
        positional: Sequence[str] = (),
        named: Mapping[str, Any] | None = None,
        n: int = 2,
    ) -> CertificateReport:
        """Run one certificate with bound parameters."""
        spec = self.get(name)
        kwargs = self.bind(name, positional, named, n)
        with TimedOperation("certificate", {"certificate": name}):
            report = spec.handler(**kwargs)
        logger.info(
            "Certificate finished",
            extra={"certificate": name, "passed": report.passed, "failures": len(report.failures)},
        )
        return report

    def run_all(self, workers: int | None = None) -> list[CertificateReport]:
        """Run every certificate with defaults in a thread pool; reports come back in name order."""
        workers = workers or get_settings().workers
        names = self.names()
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(self.run, names))
        return sorted(reports, key=lambda report: report.name)


certificate_registry = CertificateRegistry()


def certificate(
    name: str,
    params: Sequence[CertificateParam] = (),
    description: str = "",
) -> Callable[[F], F]:
    """Register a certificate function under name.

    Args:
        name: Registry name used by `check NAME`
        params: Declared parameters, in CLI positional order
        description: One-line summary shown in listings

    Returns:
        Decorator leaving the function unchanged
    """

    def decorator(func: F) -> F:
        certificate_registry.register(
            CertificateSpec(name=name, handler=func, params=tuple(params), description=description)
        )
        return func

    return decorator


def _sampling_params(trials: int) -> tuple[CertificateParam, CertificateParam]:
    return (
        CertificateParam("trials", ParamKind.INT, trials),
        CertificateParam("seed", ParamKind.SEED),
    )


def _resolve_seed(seed: int | None) -> int:
    return get_settings().seed if seed is None else seed


def _xy() -> tuple[Polynomial, Polynomial]:
    x, y = Polynomial.variables(2)
    return x, y


def _rf(f: Polynomial) -> RationalFunction:
    return RationalFunction.from_polynomial(f)


# Certificates


@certificate("non_ufd", description="s^2 = t*u in R* with s, t, u of order value 1")
def check_non_ufd(t: RationalFunction | None = None) -> CertificateReport:
    """Verify the factorization s^2 = t*u of s = sigma(1/(X+Y)).

    Args:
        t: Replacement for t = X - s, to exercise the failure path
    """
    x, y = _xy()
    report = ReportBuilder("non_ufd", {})
    s = sigma(RationalFunction(Polynomial.one(2), x + y))
    report.expect("s = sigma(1/(X + Y))", RationalFunction(x * y, x + y), s)

    computed_t = _rf(x) - s
    report.expect("X - s", RationalFunction(x**2, x + y), computed_t)
    t = computed_t if t is None else t
    report.expect("t = X - s", computed_t, t)

    u = _rf(y) - s
    report.expect("u = Y - s", RationalFunction(y**2, x + y), u)
    report.expect("s^2 = t*u", s**2, t * u)
    for label, element in (("s", s), ("t", t), ("u", u)):
        report.expect(f"order value of {label}", ValueResult.of(1), value(Order(), element))

    report.witness("s", s)
    report.witness("t", t)
    report.witness("u", u)
    report.witness("s^2", s**2)
    report.witness(
        "scope", "s, t, u are order-value-1 nonunits of R*; irreducibility follows from value 1"
    )
    return report.build()


@certificate(
    "beta_integrality",
    params=(CertificateParam("p", ParamKind.INT, 2), CertificateParam("q", ParamKind.INT, 3)),
    description="beta^p lies in R* and v(beta) = 1 at h = pq+1",
)
def check_beta_integrality(p: int, q: int) -> CertificateReport:
    """Verify beta^p = phi^d (phi + X^q)^(p-d) X with phi = -theta, and v_{p,q,pq+1}(beta) = 1.

    Raises:
        InvalidPairError: Unless gcd(p, q) = 1 and 1 < p < q
    """
    validate_pair(p, q, minimum_p=2)
    x, _ = _xy()
    report = ReportBuilder("beta_integrality", {"p": p, "q": q})
    b, c, d = beta(p, q)
    phi = -theta(p, q)

    report.expect("q*d - p*c", 1, q * d - p * c)
    lhs = b**p
    rhs = phi**d * (phi + x**q) ** (p - d) * _rf(x)
    report.expect("beta^p = phi^d * (phi + X^q)^(p-d) * X", lhs, rhs)
    report.expect(
        "v(beta)", ValueResult.of(1), value(WeightedSub(p, q, p * q + 1), b)
    )

    report.witness("c", c)
    report.witness("d", d)
    report.witness("beta", b)
    report.witness("phi", phi)
    report.witness("beta^p", lhs)
    report.witness(
        "scope",
        "beta^p is a product of elements of R*; beta itself is not decided to lie outside R*",
    )
    return report.build()


@certificate(
    "theta_values",
    params=(
        CertificateParam("p", ParamKind.INT, 2),
        CertificateParam("q", ParamKind.INT, 3),
        CertificateParam("h", ParamKind.INT, 7),
    ),
    description="v(X^q - Y^p) = h+pq-1 and v(theta) = pq+1-h",
)
def check_theta_values(p: int, q: int, h: int) -> CertificateReport:
    """Verify the weighted values of X^q - Y^p and theta_{p,q}.

    Raises:
        InvalidPairError: If (p, q, h) is not admissible
    """
    spec = WeightedSub(p, q, h)
    x, y = _xy()
    report = ReportBuilder("theta_values", {"p": p, "q": q, "h": h})

    binomial = value(spec, x**q - y**p)
    theta_value = value(spec, theta(p, q))
    report.expect("v(X^q - Y^p)", ValueResult.of(h + p * q - 1), binomial)
    report.expect("v(theta)", ValueResult.of(p * q + 1 - h), theta_value)
    report.witness("v(X^q - Y^p)", binomial)
    report.witness("v(theta)", theta_value)
    return report.build()


@certificate(
    "udiv_equivalence",
    params=(
        CertificateParam("p", ParamKind.INT, 2),
        CertificateParam("q", ParamKind.INT, 3),
        CertificateParam("g", ParamKind.POLYNOMIAL, "(X^3 - Y^2)*(X + Y)"),
    ),
    description="X^q - Y^p | g iff g(s^p, s^q) = 0",
)
def check_udiv_equivalence(p: int, q: int, g: Polynomial) -> CertificateReport:
    """Compare divisibility by X^q - Y^p with vanishing of g(s^p, s^q).

    Raises:
        InvalidPairError: Unless gcd(p, q) = 1 and 0 < p < q
    """
    validate_pair(p, q)
    if g.n != 2:
        raise ValidationError("udiv_equivalence needs a polynomial in two variables", {"n": g.n})
    x, y = _xy()
    report = ReportBuilder("udiv_equivalence", {"p": p, "q": q, "g": str(g)})

    binomial = x**q - y**p
    divisible = binomial.divides(g)
    s = Polynomial.variable(1, 1)
    curve_image = substitute(g, (s**p, s**q))
    vanishes = curve_image.is_zero

    report.expect("divisibility agrees with substitution", divisible, vanishes)
    report.witness("X^q - Y^p divides g", divisible)
    report.witness("g(s^p, s^q)", curve_image)
    if divisible:
        report.witness("quotient", g.exact_div(binomial))
    return report.build()


@certificate(
    "prime_separation",
    params=(
        CertificateParam(
            "pairs", ParamKind.PAIRS, [(1, 2), (2, 3), (3, 4), (2, 5), (3, 5)]
        ),
    ),
    description="v_{p,q,pq+1}(theta_{r,s}) is 0 on the diagonal, max{qr, ps} off it",
)
def check_prime_separation(pairs: Sequence[tuple[int, int]]) -> CertificateReport:
    """Build the theta separation matrix by direct evaluation and compare with the closed form.

    Raises:
        InvalidPairError: If a pair is not admissible or pairs repeat
    """
    pairs = [tuple(pair) for pair in pairs]
    for p, q in pairs:
        validate_pair(p, q)
    if len(set(pairs)) != len(pairs):
        raise InvalidPairError("Pairs must be pairwise distinct", {"pairs": pairs})

    report = ReportBuilder("prime_separation", {"pairs": [list(pair) for pair in pairs]})
    thetas = {pair: theta(*pair) for pair in pairs}
    for p, q in pairs:
        spec = WeightedSub(p, q, p * q + 1)
        row = []
        for r, s in pairs:
            direct = value(spec, thetas[(r, s)])
            formula = 0 if (r, s) == (p, q) else max(q * r, p * s)
            report.expect(f"M[({p},{q})][({r},{s})]", ValueResult.of(formula), direct)
            row.append(str(direct))
        report.witness(f"row ({p},{q})", "[" + ", ".join(row) + "]")
    return report.build()


@certificate(
    "finite_conductor_witness",
    params=(CertificateParam("q", ParamKind.INT, 3),),
    description="Y*theta = X^q*(theta + Y) and v(theta) = 0 for theta = theta_{1,q}",
)
def check_finite_conductor_witness(q: int) -> CertificateReport:
    """Verify the two computable ingredients of the finite-conductor obstruction.

    Raises:
        InvalidPairError: If q < 2
    """
    validate_pair(1, q)
    x, y = _xy()
    report = ReportBuilder("finite_conductor_witness", {"q": q})
    th = theta(1, q)

    lhs = th * y
    rhs = (th + y) * x**q
    report.expect("Y*theta = X^q*(theta + Y)", lhs, rhs)
    report.expect("v(theta)", ValueResult.of(0), value(WeightedSub(1, q, q + 1), th))
    report.witness("theta", th)
    report.witness("Y*theta", lhs)
    report.witness(
        "scope", "identity and value only; failure of the finite conductor property is not decided"
    )
    return report.build()


@certificate(
    "overring_growth",
    params=(
        CertificateParam("r", ParamKind.INT, 4),
        CertificateParam("pairs", ParamKind.PAIRS, [(2, 3), (3, 4), (2, 5), (3, 5)]),
    ),
    description="v_{r,r+1,r^2+r+1}(beta_{p,q}) >= 2r+1 for p < r, and v(beta_{r,r+1}) = 1",
)
def check_overring_growth(r: int, pairs: Sequence[tuple[int, int]]) -> CertificateReport:
    """Verify the valuation bounds separating beta_{r,r+1} from the smaller betas.

    Raises:
        InvalidPairError: If a pair is not admissible for beta
        PreconditionViolatedError: Unless r > 1 and r > p for every pair
    """
    pairs = [tuple(pair) for pair in pairs]
    for p, q in pairs:
        validate_pair(p, q, minimum_p=2)
    if r <= 1 or any(r <= p for p, _ in pairs):
        raise PreconditionViolatedError(
            "overring_growth needs r > 1 and r > p for every pair",
            {"r": r, "pairs": [list(pair) for pair in pairs]},
        )

    spec = WeightedSub(r, r + 1, r * r + r + 1)
    report = ReportBuilder(
        "overring_growth", {"r": r, "pairs": [list(pair) for pair in pairs]}
    )
    bound = 2 * r + 1
    for p, q in pairs:
        computed = value(spec, beta(p, q)[0])
        report.require(
            f"v(beta_{{{p},{q}}}) >= {bound}",
            computed >= ValueResult.of(bound),
            f">= {bound}",
            computed,
        )
        report.witness(f"v(beta_{{{p},{q}}})", computed)

    top = value(spec, beta(r, r + 1)[0])
    report.expect(f"v(beta_{{{r},{r + 1}}})", ValueResult.of(1), top)
    report.witness(f"v(beta_{{{r},{r + 1}}})", top)
    return report.build()


@certificate(
    "gdomain_identity",
    params=(CertificateParam("sample", ParamKind.RATIONAL, "(X^2 + Y)/(X - Y)"),),
    description="rebuild a fraction inside R[g] with g = X1*...*Xn",
)
def check_gdomain_identity(sample: RationalFunction) -> CertificateReport:
    """Re-express sample = u * (1/v) through g-multiples of reciprocal sums.

    Every monomial c*X^e of u equals g^|e| * 1/(D_e/c) with
    D_e = ∏_i (∏_{j≠i} X_j)^(e_i), from X_i = g * 1/∏_{j≠i} X_j.

    Raises:
        ZeroValueError: If sample is zero
    """
    if sample.is_zero:
        raise ZeroValueError("gdomain_identity")
    n = sample.n
    xs = Polynomial.variables(n)
    one = Polynomial.one(n)
    g = reduce(mul, xs, one)
    others = [reduce(mul, xs[:i] + xs[i + 1 :], one) for i in range(n)]

    report = ReportBuilder("gdomain_identity", {"sample": str(sample)})
    for i in range(n):
        report.expect(f"X{i + 1} = g * recip(...)", _rf(xs[i]), RationalFunction(g, others[i]))

    by_power: dict[int, list[Polynomial]] = {}
    for exps, coeff in sample.num.terms():
        d_e = reduce(mul, (others[i] ** e for i, e in enumerate(exps)), one)
        by_power.setdefault(sum(exps), []).append(d_e.scale(1 / coeff))

    inverse_den = RecipSum(n, (sample.den,))
    rebuilt = RationalFunction.zero(n)
    for power, denoms in sorted(by_power.items()):
        coefficient = recip_combine(RecipCombineKind.MUL, RecipSum(n, tuple(denoms)), inverse_den)
        report.witness(f"g^{power}", coefficient)
        rebuilt = rebuilt + coefficient.value * g**power

    report.witness("g", g)
    report.expect("sum of g^k * coefficient_k = sample", sample, rebuilt)
    return report.build()


@certificate(
    "irreducibility_witness",
    params=(CertificateParam("alpha", ParamKind.RECIP, "recip(X + Y)"),),
    description="order value 1 of sigma(alpha) certifies irreducibility in R*",
)
def check_irreducibility_witness(alpha: RecipSum) -> CertificateReport:
    """Read the order value of sigma(alpha): 1 irreducible, 0 unit, >= 2 no verdict.

    Raises:
        ZeroValueError: If alpha's value is zero
    """
    if alpha.value.is_zero:
        raise ZeroValueError("irreducibility_witness")
    report = ReportBuilder("irreducibility_witness", {"alpha": str(alpha)})
    image = sigma(alpha.value)
    w = value(Order(), image)

    report.require("order value on R*", w >= ValueResult.of(0), ">= 0", w)
    unit, _ = is_unit(alpha)
    report.expect("value 0 iff unit", unit, w == ValueResult.of(0))

    if w == ValueResult.of(1):
        verdict = "irreducible"
    elif w == ValueResult.of(0):
        verdict = "unit"
    else:
        verdict = "no verdict"
    report.witness("sigma(alpha)", image)
    report.witness("order value", w)
    report.witness("verdict", verdict)
    return report.build()


@certificate(
    "egyptian_obstruction",
    params=_sampling_params(500),
    description="reciprocal sums of nonconstant polynomials never give a nonconstant polynomial",
)
def check_egyptian_obstruction(
    trials: int,
    seed: int | None = None,
    normalizer: Callable[[RecipSum], RationalFunction] = recip_normalize,
) -> CertificateReport:
    """Sample all-nonconstant reciprocal sums and flag any with a nonconstant polynomial value.

    Args:
        trials: Number of random sums
        seed: Sampling seed (configured default when None)
        normalizer: Value function, replaceable to exercise the failure path
    """
    if trials < 1:
        raise ValidationError("trials must be at least 1", {"trials": trials})
    seed = _resolve_seed(seed)
    rng = random.Random(seed)
    report = ReportBuilder("egyptian_obstruction", {"trials": trials}, seed)

    constant_values = 0
    for trial in range(trials):
        alpha = random_recip_sum(rng, 2, max_terms=4, max_degree=3, height=5)
        normal = normalizer(alpha)
        if normal.is_constant:
            constant_values += 1
        report.require(
            f"trial {trial}: {alpha}",
            not (normal.is_polynomial and not normal.is_constant),
            "not a nonconstant polynomial",
            normal,
        )
    report.witness("samples", trials)
    report.witness("constant values", constant_values)
    return report.build()


@certificate(
    "weighted_overring",
    params=(
        CertificateParam("p", ParamKind.INT, 2),
        CertificateParam("q", ParamKind.INT, 3),
        CertificateParam("h", ParamKind.INT, 7),
        CertificateParam("trials", ParamKind.INT, 200),
        CertificateParam("seed", ParamKind.SEED),
    ),
    description="v_{p,q,h} is nonnegative on R*, positive on its maximal ideal below h = pq+1",
)
def check_weighted_overring(
    p: int, q: int, h: int, trials: int, seed: int | None = None
) -> CertificateReport:
    """Sample sigma(1/f) and check the value pattern of v_{p,q,h}.

    Below h = pq+1 every nonconstant f gives a positive value; at h = pq+1 values
    are 0 or at least p.
    """
    spec = WeightedSub(p, q, h)
    seed = _resolve_seed(seed)
    rng = random.Random(seed)
    report = ReportBuilder("weighted_overring", {"p": p, "q": q, "h": h, "trials": trials}, seed)
    one = Polynomial.one(2)
    top = p * q + 1

    report.expect("v(theta)", ValueResult.of(top - h), value(spec, theta(p, q)))
    for trial in range(trials):
        f = random_polynomial(rng, 2, max_degree=3, height=5, nonconstant=True)
        v = value(spec, sigma(RationalFunction(one, f)))
        if h < top:
            report.require(f"trial {trial}: v(sigma(1/({f})))", v >= ValueResult.of(1), ">= 1", v)
        else:
            report.require(
                f"trial {trial}: v(sigma(1/({f})))",
                v == ValueResult.of(0) or v >= ValueResult.of(p),
                f"0 or >= {p}",
                v,
            )
    report.witness("samples", trials)
    return report.build()


@certificate(
    "involution_suite",
    params=_sampling_params(500),
    description="sigma is an involution and the star transform is bi-dual",
)
def check_involution_suite(trials: int, seed: int | None = None) -> CertificateReport:
    """Random polynomials in 2 or 3 variables, degree <= 6, height <= 20."""
    seed = _resolve_seed(seed)
    rng = random.Random(seed)
    report = ReportBuilder("involution_suite", {"trials": trials}, seed)

    for trial in range(trials):
        n = rng.choice((2, 3))
        f = random_polynomial(rng, n, max_degree=6, height=20, max_terms=6)
        r = random_rational(rng, n, max_degree=6, height=20)
        form = star_transform(f)

        report.expect(f"trial {trial}: sigma(sigma(r))", r, sigma(sigma(r)))
        report.expect(f"trial {trial}: X^t (f*)*", f, form.reconstruct())
        report.expect(f"trial {trial}: a(f*)", form.a, star_transform(form.fstar).a)
        report.expect(
            f"trial {trial}: X^(a+t)/f*",
            sigma(RationalFunction(Polynomial.one(n), f)),
            form.sigma_reciprocal(),
        )
    report.witness("samples", trials)
    return report.build()


@certificate(
    "overring_containment",
    params=_sampling_params(500),
    description="sigma(1/f) has X_i-adic value >= 0 and order value >= 1",
)
def check_overring_containment(trials: int, seed: int | None = None) -> CertificateReport:
    """Random nonconstant f in 2 or 3 variables."""
    seed = _resolve_seed(seed)
    rng = random.Random(seed)
    report = ReportBuilder("overring_containment", {"trials": trials}, seed)

    for trial in range(trials):
        n = rng.choice((2, 3))
        f = random_polynomial(rng, n, max_degree=4, height=10, nonconstant=True)
        image = sigma(RationalFunction(Polynomial.one(n), f))
        for i in range(1, n + 1):
            v = value(XAdic(i), image)
            report.require(f"trial {trial}: X{i}-adic", v >= ValueResult.of(0), ">= 0", v)
        w = value(Order(), image)
        report.require(f"trial {trial}: order", w >= ValueResult.of(1), ">= 1", w)
    report.witness("samples", trials)
    return report.build()


@certificate(
    "unit_inversion",
    params=(
        CertificateParam("trials", ParamKind.INT, 100),
        CertificateParam("seed", ParamKind.SEED),
        CertificateParam("max_terms", ParamKind.INT, 2),
    ),
    description=(
        "invert random units (default: up to 2 nonconstant terms) and check the product is 1"
    ),
)
def check_unit_inversion(
    trials: int, seed: int | None = None, max_terms: int = 2
) -> CertificateReport:
    """Units with up to max_terms nonconstant denominators of degree <= 3.

    Inverses of 4-term units run to millions of denominators, so max_terms
    above the default of 2 needs a larger RECIPCAS_TERM_BUDGET.
    """
    seed = _resolve_seed(seed)
    rng = random.Random(seed)
    report = ReportBuilder(
        "unit_inversion", {"trials": trials, "max_terms": max_terms}, seed
    )

    largest = 0
    for trial in range(trials):
        alpha = random_unit(rng, 2, max_nonconstant=max_terms, max_degree=3)
        try:
            inverse = invert_unit(alpha, verify=False)
        except BaseError as e:
            report.require(f"trial {trial}: {alpha}", False, "inverse", e.message)
            continue
        largest = max(largest, len(inverse))
        report.expect(
            f"trial {trial}: {alpha}", RationalFunction.one(2), alpha.value * inverse.value
        )
    report.witness("samples", trials)
    report.witness("largest inverse", largest)
    return report.build()


@certificate(
    "pullback_nonnegativity",
    params=_sampling_params(200),
    description="Gauss and lex extensions of an overring of R_1 contain R_2",
)
def check_pullback_nonnegativity(trials: int, seed: int | None = None) -> CertificateReport:
    """Check value(ext, 1/phi) >= 0 for both extensions of sigma-order along Y."""
    seed = _resolve_seed(seed)
    rng = random.Random(seed)
    report = ReportBuilder("pullback_nonnegativity", {"trials": trials}, seed)
    inner = Sigma(Order())
    gauss = GaussExt(inner, 2)
    lex = LexComposite(inner, 2)
    one = Polynomial.one(2)

    for trial in range(trials):
        phi = random_polynomial(rng, 2, max_degree=4, height=10)
        recip = RationalFunction(one, phi)
        g = value(gauss, recip)
        w = value(lex, recip)
        report.require(f"trial {trial}: gauss", g >= ValueResult.of(0), ">= 0", g)
        report.require(f"trial {trial}: lex", w >= ValueResult.of(0, 0), ">= (0, 0)", w)
    report.witness("samples", trials)
    return report.build()


def run_certificate(
    name: str,
    positional: Sequence[str] = (),
    named: Mapping[str, Any] | None = None,
    n: int = 2,
) -> CertificateReport:
    return certificate_registry.run(name, positional, named, n)


def run_all(workers: int | None = None) -> list[CertificateReport]:
    return certificate_registry.run_all(workers)
