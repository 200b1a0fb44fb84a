"""HTTP surface over the library, served by ``recipcas serve``."""

import logging
from typing import Any

from fastapi import APIRouter, FastAPI
from pydantic import BaseModel, Field

from . import __version__
from .certificates import CertificateReport, certificate_registry, run_certificate
from .cli import as_polynomial, as_recip_sum
from .config import get_settings
from .errors import setup_error_handlers
from .length import brute_force_length
from .observability import RequestTrackingMiddleware, log_startup
from .parser import Value, as_rational, collapse, format_value, parse_expression
from .recip import invert_unit, sigma, star_transform
from .valuation import parse_valuation_spec, value

logger = logging.getLogger(__name__)

router = APIRouter()


class ExpressionRequest(BaseModel):
    """Expression text over Q(X1..Xn)."""

    expr: str = Field(..., min_length=1)
    n: int | None = Field(default=None, ge=1, description="Variable count (default from settings)")

    def parse(self) -> Value:
        return parse_expression(self.expr, self.n or get_settings().default_vars)


class ValueRequest(ExpressionRequest):
    spec: str = Field(..., min_length=1, description="Valuation SPEC, e.g. 'wsub:2,3,7'")


class InvertRequest(ExpressionRequest):
    budget: int | None = Field(default=None, ge=1)


class LengthRequest(ExpressionRequest):
    deg: int = Field(..., ge=0)
    height: int = Field(..., ge=0)
    terms: int = Field(..., ge=0)


class CertificateRequest(BaseModel):
    """Named certificate parameters; omitted ones take their defaults."""

    params: dict[str, Any] = Field(default_factory=dict)
    n: int = Field(default=2, ge=1)


class ExpressionResponse(BaseModel):
    value: str
    kind: str


class StarResponse(BaseModel):
    fstar: str
    a: list[int]
    t: list[int]


class ValuationResponse(BaseModel):
    spec: str
    value: int | list[int] | str


class InvertResponse(BaseModel):
    inverse: str
    terms: int
    product: str


class LengthResponse(BaseModel):
    length: int | None


class CertificateInfo(BaseModel):
    name: str
    description: str
    parameters: list[str]


class HealthResponse(BaseModel):
    status: str
    version: str


def _expression_response(result: Value) -> ExpressionResponse:
    return ExpressionResponse(value=format_value(result), kind=type(result).__name__)


@router.get("/healthz", response_model=HealthResponse)
def healthz() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@router.post("/eval", response_model=ExpressionResponse)
def evaluate(request: ExpressionRequest) -> ExpressionResponse:
    """Normalize an expression to its canonical form."""
    return _expression_response(collapse(as_rational(request.parse())))


@router.post("/sigma", response_model=ExpressionResponse)
def apply_sigma(request: ExpressionRequest) -> ExpressionResponse:
    return _expression_response(collapse(sigma(as_rational(request.parse()))))


@router.post("/star", response_model=StarResponse)
def star(request: ExpressionRequest) -> StarResponse:
    form = star_transform(as_polynomial(request.parse(), "star"))
    return StarResponse(fstar=str(form.fstar), a=list(form.a), t=list(form.t))


@router.post("/value", response_model=ValuationResponse)
def valuation(request: ValueRequest) -> ValuationResponse:
    parsed = request.parse()
    spec = parse_valuation_spec(request.spec, parsed.n)
    return ValuationResponse(spec=str(spec), value=value(spec, as_rational(parsed)).to_json())


@router.post("/invert", response_model=InvertResponse)
def invert(request: InvertRequest) -> InvertResponse:
    alpha = as_recip_sum(request.parse(), "invert")
    inverse = invert_unit(alpha, budget=request.budget)
    product = collapse(alpha.value * inverse.value)
    return InvertResponse(inverse=str(inverse), terms=len(inverse), product=format_value(product))


@router.post("/length", response_model=LengthResponse)
def length(request: LengthRequest) -> LengthResponse:
    r = as_rational(request.parse())
    return LengthResponse(
        length=brute_force_length(r, request.deg, request.height, request.terms)
    )


@router.get("/certificates", response_model=list[CertificateInfo])
def list_certificates() -> list[CertificateInfo]:
    infos = []
    for name in certificate_registry.names():
        spec = certificate_registry.get(name)
        infos.append(
            CertificateInfo(
                name=name,
                description=spec.description,
                parameters=[param.name for param in spec.params],
            )
        )
    return infos


@router.post("/certificates/{name}", response_model=CertificateReport)
def run(name: str, request: CertificateRequest | None = None) -> CertificateReport:
    """Run one certificate; a failing report is still a 200 response."""
    request = request or CertificateRequest()
    return run_certificate(name, named=request.params, n=request.n)


def create_app() -> FastAPI:
    """Build the FastAPI application with request tracking and error handlers.

    Returns:
        Configured FastAPI app
    """
    app = FastAPI(title="recipcas", version=__version__)
    app.add_middleware(RequestTrackingMiddleware)
    setup_error_handlers(app)
    app.include_router(router)
    log_startup(__version__, get_settings())
    return app
