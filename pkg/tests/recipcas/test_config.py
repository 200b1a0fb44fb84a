"""Tests for configuration, error mapping and logging helpers."""

import logging

import pytest

from recipcas.config import Settings, get_settings, init_settings, reset_settings
from recipcas.errors import (
    EXIT_FAILURE,
    EXIT_USAGE,
    ErrorContext,
    InternalContradictionError,
    NotDivisibleError,
    UnknownCertificateError,
    ValidationError,
    ZeroDenominatorError,
)
from recipcas.observability import StructuredFormatter, TimedOperation


class TestSettings:
    """Test environment-driven settings."""

    def test_defaults(self):
        """Test values with an empty environment."""
        settings = Settings.from_env({})

        assert settings.seed == 42
        assert settings.term_budget == 100_000
        assert settings.default_vars == 2
        assert settings.log_level == "WARNING"

    def test_test_environment_applied(self):
        """Test that the suite's environment reaches the global settings."""
        settings = get_settings()

        assert settings.seed == 20240917
        assert settings.workers == 4

    def test_from_env(self):
        """Test parsing of each variable."""
        settings = Settings.from_env(
            {
                "RECIPCAS_SEED": "7",
                "RECIPCAS_TERM_BUDGET": "50",
                "RECIPCAS_VARS": "3",
                "LOG_LEVEL": "debug",
            }
        )

        assert settings.seed == 7
        assert settings.term_budget == 50
        assert settings.default_vars == 3
        assert settings.log_level == "DEBUG"

    def test_invalid_value_names_variable(self):
        """Test that errors point at the offending variable."""
        with pytest.raises(ValidationError) as exc_info:
            Settings.from_env({"RECIPCAS_TERM_BUDGET": "lots"})

        assert exc_info.value.details["variables"] == ["RECIPCAS_TERM_BUDGET"]
        assert "RECIPCAS_TERM_BUDGET" in exc_info.value.message

    def test_invalid_log_level(self):
        """Test an unknown log level name."""
        with pytest.raises(ValidationError):
            Settings.from_env({"LOG_LEVEL": "chatty"})

    def test_overrides(self):
        """Test explicit overrides on top of the environment."""
        settings = init_settings(term_budget=9)

        assert settings.term_budget == 9
        assert settings.seed == 20240917
        assert get_settings() is settings

    def test_reset(self, monkeypatch):
        """Test that reset re-reads the environment."""
        monkeypatch.setenv("RECIPCAS_SEED", "11")
        reset_settings()

        assert get_settings().seed == 11


class TestErrors:
    """Test status and exit code mapping."""

    def test_exit_codes(self):
        """Test usage errors versus internal failures."""
        assert ValidationError("bad").exit_code == EXIT_USAGE
        assert ZeroDenominatorError().exit_code == EXIT_USAGE
        assert UnknownCertificateError("x", ["a"]).exit_code == EXIT_USAGE
        assert InternalContradictionError("broken").exit_code == EXIT_FAILURE

    def test_to_dict(self):
        """Test the serialized error."""
        error = ValidationError("bad input", {"field": "expr"})

        assert error.to_dict() == {
            "error": "ValidationError",
            "message": "bad input",
            "status_code": 400,
            "details": {"field": "expr"},
        }

    def test_error_context_translates(self):
        """Test mapping of a foreign exception."""
        with pytest.raises(NotDivisibleError) as exc_info:
            with ErrorContext("Exact division", {ArithmeticError: NotDivisibleError}):
                raise ArithmeticError("remainder")

        assert "Exact division failed" in exc_info.value.message
        assert isinstance(exc_info.value.__cause__, ArithmeticError)

    def test_error_context_passes_others(self):
        """Test that unmapped exceptions propagate unchanged."""
        with pytest.raises(KeyError):
            with ErrorContext("lookup", {ArithmeticError: NotDivisibleError}):
                raise KeyError("k")


class TestObservability:
    """Test the log formatter and operation timer."""

    def test_formatter_appends_extra(self):
        """Test that extra fields are rendered as key=value."""
        record = logging.LogRecord("recipcas", logging.INFO, __file__, 1, "done", (), None)
        record.certificate = "non_ufd"

        text = StructuredFormatter("%(message)s").format(record)

        assert text == "done | certificate='non_ufd'"

    def test_formatter_without_extra(self):
        """Test plain messages."""
        record = logging.LogRecord("recipcas", logging.INFO, __file__, 1, "plain", (), None)

        assert StructuredFormatter("%(message)s").format(record) == "plain"

    def test_timed_operation(self, caplog):
        """Test that elapsed time and outcome are recorded."""
        with caplog.at_level(logging.DEBUG, logger="recipcas.observability"):
            with TimedOperation("demo", {"k": 1}) as timer:
                pass

        assert timer.elapsed_ms is not None
        assert timer.elapsed_ms >= 0
        record = caplog.records[-1]
        assert record.operation == "demo"
        assert record.outcome == "ok"
        assert record.k == 1

    def test_timed_operation_failure(self, caplog):
        """Test that a raised exception is reported as the outcome."""
        with caplog.at_level(logging.DEBUG, logger="recipcas.observability"):
            with pytest.raises(ZeroDenominatorError):
                with TimedOperation("demo"):
                    raise ZeroDenominatorError()

        assert caplog.records[-1].outcome == "ZeroDenominatorError"
