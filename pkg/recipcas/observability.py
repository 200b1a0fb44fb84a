"""Structured logging, operation timing and request tracking."""

import logging
import sys
import time
import uuid
from collections.abc import Awaitable, Callable, Mapping
from typing import TYPE_CHECKING, Any

from fastapi import Request
from starlette.middleware.base import BaseHTTPMiddleware
from starlette.responses import Response as StarletteResponse

if TYPE_CHECKING:
    from .config import Settings

logger = logging.getLogger(__name__)

# Attributes every LogRecord has; anything else came in through `extra`.
_RECORD_ATTRS = frozenset(
    logging.LogRecord("", 0, "", 0, "", (), None).__dict__.keys() | {"message", "asctime"}
)


class StructuredFormatter(logging.Formatter):
    """Formatter appending `extra` fields as key=value pairs."""

    def format(self, record: logging.LogRecord) -> str:
        base = super().format(record)
        fields = {k: v for k, v in record.__dict__.items() if k not in _RECORD_ATTRS}
        if not fields:
            return base
        rendered = " ".join(f"{key}={value!r}" for key, value in sorted(fields.items()))
        return f"{base} | {rendered}"


def configure_logging(level: str = "WARNING") -> None:
    """Install the structured formatter on the root logger, writing to stderr.

    Args:
        level: Log level name
    """
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(StructuredFormatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))

    root = logging.getLogger()
    for existing in list(root.handlers):
        if isinstance(existing.formatter, StructuredFormatter):
            root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(level)


class RequestTrackingMiddleware(BaseHTTPMiddleware):
    """Attach a request ID to every call and log one line per request."""

    def __init__(self, app: Any, header: str = "X-Request-ID") -> None:
        super().__init__(app)
        self.header = header

    async def dispatch(
        self,
        request: Request,
        call_next: Callable[[Request], Awaitable[StarletteResponse]],
    ) -> StarletteResponse:
        request_id = request.headers.get(self.header) or uuid.uuid4().hex
        request.state.request_id = request_id
        fields: dict[str, Any] = {
            "request_id": request_id,
            "route": f"{request.method} {request.url.path}",
        }

        started = time.perf_counter()
        try:
            response = await call_next(request)
        except Exception:
            fields["elapsed_ms"] = _millis(started)
            logger.exception("Unhandled error in %s", fields["route"], extra=fields)
            raise

        response.headers[self.header] = request_id
        fields.update(status=response.status_code, elapsed_ms=_millis(started))
        logger.info("Handled %s", fields["route"], extra=fields)
        return response


def get_request_id(request: Request) -> str | None:
    """Request ID set by RequestTrackingMiddleware, if the request went through it."""
    return getattr(request.state, "request_id", None)


def log_startup(version: str, settings: "Settings") -> None:
    """Log the version and the settings that shape computation results.

    Args:
        version: Package version
        settings: Active settings
    """
    logger.info(
        "recipcas %s ready",
        version,
        extra={
            "seed": settings.seed,
            "term_budget": settings.term_budget,
            "default_vars": settings.default_vars,
            "workers": settings.workers,
        },
    )


def _millis(started: float) -> float:
    return round((time.perf_counter() - started) * 1000, 3)


class TimedOperation:
    """Time a block of algebra and log its outcome at DEBUG.

    The record carries the operation name, elapsed milliseconds, the outcome
    (``ok`` or the exception class name) and any context fields.

    Example:
        with TimedOperation("invert_unit", {"nonconstant_terms": 3}) as timer:
            ...
        timer.elapsed_ms
    """

    def __init__(self, operation: str, context: Mapping[str, Any] | None = None) -> None:
        self.operation = operation
        self.context = dict(context or {})
        self._started: float | None = None
        self.elapsed_ms: float | None = None

    def __enter__(self) -> "TimedOperation":
        self._started = time.perf_counter()
        return self

    def __exit__(self, exc_type: type[BaseException] | None, exc: Any, tb: Any) -> None:
        if self._started is None:
            return
        self.elapsed_ms = _millis(self._started)
        logger.debug(
            "%s finished",
            self.operation,
            extra={
                **self.context,
                "operation": self.operation,
                "elapsed_ms": self.elapsed_ms,
                "outcome": "ok" if exc_type is None else exc_type.__name__,
            },
        )
