"""Error hierarchy with HTTP status and CLI exit code mapping."""

import logging
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.status import (
    HTTP_400_BAD_REQUEST,
    HTTP_404_NOT_FOUND,
    HTTP_422_UNPROCESSABLE_ENTITY,
    HTTP_500_INTERNAL_SERVER_ERROR,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class BaseError(Exception):
    """Base exception for recipcas errors."""

    def __init__(
        self,
        message: str,
        details: dict[str, Any] | None = None,
        status_code: int = HTTP_500_INTERNAL_SERVER_ERROR,
    ) -> None:
        self.message = message
        self.details = details or {}
        self.status_code = status_code
        super().__init__(message)

    @property
    def exit_code(self) -> int:
        """CLI exit status for this error: client mistakes are usage errors."""
        return EXIT_USAGE if self.status_code < 500 else EXIT_FAILURE

    def to_dict(self) -> dict[str, Any]:
        """Convert error to dictionary."""
        error_dict: dict[str, Any] = {
            "error": self.__class__.__name__,
            "message": self.message,
            "status_code": self.status_code,
        }

        if self.details:
            error_dict["details"] = self.details

        return error_dict


class ValidationError(BaseError):
    """Malformed input (400 Bad Request)."""

    def __init__(
        self,
        message: str = "Validation failed",
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details, HTTP_400_BAD_REQUEST)


class NotFoundError(BaseError):
    """Unknown named resource (404 Not Found)."""

    def __init__(
        self,
        message: str = "Resource not found",
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details, HTTP_404_NOT_FOUND)


class BusinessRuleError(BaseError):
    """Well-formed input outside an operation's domain (422 Unprocessable Entity)."""

    def __init__(
        self,
        message: str = "Precondition not met",
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details, HTTP_422_UNPROCESSABLE_ENTITY)


class InternalError(BaseError):
    """Internal consistency failure (500 Internal Server Error)."""

    def __init__(
        self,
        message: str = "Internal error",
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details, HTTP_500_INTERNAL_SERVER_ERROR)


# Input errors


class ExpressionSyntaxError(ValidationError):
    """Expression text could not be parsed."""

    def __init__(self, message: str, position: int, text: str = "") -> None:
        self.position = position
        super().__init__(
            f"{message} at position {position}",
            details={"position": position, "text": text},
        )


class UnknownVariableError(ValidationError):
    """Variable name outside X1..Xn (or its aliases)."""

    def __init__(self, name: str, n: int, position: int | None = None) -> None:
        self.name = name
        super().__init__(
            f"Unknown variable '{name}' for {n} variable(s)",
            details={"variable": name, "n": n, "position": position},
        )


class VariableCountMismatchError(ValidationError):
    """Operands live in polynomial rings with different variable counts."""

    def __init__(self, left: int, right: int) -> None:
        super().__init__(
            f"Mismatched variable count: {left} vs {right}",
            details={"left": left, "right": right},
        )


class ArityMismatchError(ValidationError):
    """Wrong number of substitution images."""

    def __init__(self, expected: int, got: int) -> None:
        super().__init__(
            f"Expected {expected} image(s), got {got}",
            details={"expected": expected, "got": got},
        )


class IndexOutOfRangeError(ValidationError):
    """Term index outside a reciprocal sum."""

    def __init__(self, index: int, size: int) -> None:
        super().__init__(
            f"Index {index} out of range for {size} term(s)",
            details={"index": index, "size": size},
        )


class InvalidSpecError(ValidationError):
    """Valuation SPEC text could not be parsed."""


# Domain errors


class ZeroDenominatorError(BusinessRuleError):
    """Division by the zero polynomial."""

    def __init__(self, message: str = "Division by zero polynomial") -> None:
        super().__init__(message)


class ZeroPolynomialError(BusinessRuleError):
    """Operation requires a nonzero polynomial."""

    def __init__(self, operation: str) -> None:
        super().__init__(
            f"{operation} requires a nonzero polynomial", details={"operation": operation}
        )


class ZeroValueError(BusinessRuleError):
    """Operation requires an element with nonzero value."""

    def __init__(self, operation: str) -> None:
        super().__init__(f"{operation} requires a nonzero value", details={"operation": operation})


class NotAUnitError(BusinessRuleError):
    """Reciprocal sum has zero constant residue."""

    def __init__(self, expression: str) -> None:
        super().__init__(
            "Element is not a unit: constant residue is zero",
            details={"expression": expression},
        )


class InvalidPairError(BusinessRuleError):
    """Exponent pair (p, q) or weight h outside the allowed range."""


class PreconditionViolatedError(BusinessRuleError):
    """Operation precondition does not hold for the given input."""


class UnsupportedArityError(BusinessRuleError):
    """Valuation is defined for a different number of variables."""

    def __init__(self, valuation: str, required: int, got: int) -> None:
        super().__init__(
            f"{valuation} requires n = {required}, got n = {got}",
            details={"valuation": valuation, "required": required, "n": got},
        )


class TermBudgetExceededError(BusinessRuleError):
    """Unit inversion would exceed the configured denominator budget."""

    def __init__(self, budget: int, required: int) -> None:
        super().__init__(
            f"Term budget of {budget} denominators exceeded ({required} needed)",
            details={"budget": budget, "required": required},
        )


class NotDivisibleError(BusinessRuleError):
    """Exact division left a remainder."""


class UnknownCertificateError(NotFoundError):
    """No certificate registered under the requested name."""

    def __init__(self, name: str, available: list[str]) -> None:
        super().__init__(
            f"Unknown certificate '{name}'",
            details={"certificate": name, "available": available},
        )


class InternalContradictionError(InternalError):
    """An identity guaranteed by construction failed to hold."""


# HTTP mapping


def _error_response(request: Request, exc: BaseError) -> JSONResponse:
    from .observability import get_request_id

    body = exc.to_dict()
    fields: dict[str, Any] = {"error": body["error"], "status": exc.status_code}
    request_id = get_request_id(request)
    if request_id:
        body["request_id"] = fields["request_id"] = request_id

    if exc.status_code >= 500:
        logger.error("Request ended in %s", body["error"], extra=fields)
    else:
        logger.warning("Rejected request: %s", exc.message, extra=fields)
    return JSONResponse(status_code=exc.status_code, content=body)


async def base_error_handler(request: Request, exc: BaseError) -> JSONResponse:
    """Render a recipcas error with its own status code."""
    return _error_response(request, exc)


async def validation_error_handler(request: Request, exc: Exception) -> JSONResponse:
    """Render a pydantic error raised inside a handler as a 400."""
    from pydantic import ValidationError as PydanticValidationError

    errors = exc.errors() if isinstance(exc, PydanticValidationError) else [str(exc)]
    return _error_response(
        request, ValidationError("Invalid parameters", {"validation_errors": errors})
    )


async def generic_exception_handler(request: Request, exc: Exception) -> JSONResponse:
    """Render anything else as a 500 without leaking its message."""
    logger.exception("Unexpected %s", type(exc).__name__)
    return _error_response(
        request, InternalError("Unexpected failure", {"exception_type": type(exc).__name__})
    )


def setup_error_handlers(app: FastAPI) -> None:
    """Register the handlers above on app.

    Args:
        app: FastAPI application instance
    """
    from pydantic import ValidationError as PydanticValidationError

    app.add_exception_handler(BaseError, base_error_handler)  # type: ignore[arg-type]
    app.add_exception_handler(PydanticValidationError, validation_error_handler)
    app.add_exception_handler(Exception, generic_exception_handler)


class ErrorContext:
    """Context manager translating third-party exceptions into BaseError subclasses."""

    def __init__(
        self,
        operation: str,
        error_mapping: dict[type[Exception], type[BaseError]] | None = None,
    ) -> None:
        self.operation = operation
        self.error_mapping = error_mapping or {}

    def __enter__(self) -> "ErrorContext":
        return self

    def __exit__(self, exc_type: type[BaseException] | None, exc_val: Any, exc_tb: Any) -> bool:
        if exc_type is None:
            return False

        for source, target in self.error_mapping.items():
            if issubclass(exc_type, source):
                raise target(
                    f"{self.operation} failed: {exc_val}",
                    {"original_error": str(exc_val)},
                ) from exc_val

        return False
