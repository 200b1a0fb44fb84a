"""Runtime settings read from the environment."""

import logging
import os
from collections.abc import Mapping

from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic import ValidationError as PydanticValidationError

from .errors import ValidationError

logger = logging.getLogger(__name__)

# Environment variable -> Settings field
ENV_FIELDS: dict[str, str] = {
    "RECIPCAS_SEED": "seed",
    "RECIPCAS_TERM_BUDGET": "term_budget",
    "RECIPCAS_VARS": "default_vars",
    "RECIPCAS_WORKERS": "workers",
    "LOG_LEVEL": "log_level",
    "RECIPCAS_HOST": "host",
    "RECIPCAS_PORT": "port",
}


class Settings(BaseModel):
    """Process-wide configuration."""

    model_config = ConfigDict(frozen=True, extra="forbid", str_strip_whitespace=True)

    seed: int = Field(default=42, ge=0, description="Default seed for sampling certificates")
    term_budget: int = Field(
        default=100_000, ge=1, description="Maximum denominators produced by unit inversion"
    )
    default_vars: int = Field(default=2, ge=1, description="Variable count when --vars is omitted")
    workers: int = Field(default=4, ge=1, description="Thread pool size for 'check all'")
    log_level: str = Field(default="WARNING", description="Root log level name")
    host: str = Field(default="127.0.0.1")
    port: int = Field(default=8000, ge=1, le=65535)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Accept standard logging level names in any case."""
        level = v.upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"unknown log level '{v}'")
        return level

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> "Settings":
        """Build settings from environment variables.

        Args:
            environ: Mapping to read instead of os.environ

        Raises:
            ValidationError: If a variable holds an invalid value

        Returns:
            Settings instance
        """
        source = os.environ if environ is None else environ
        values = {field: source[var] for var, field in ENV_FIELDS.items() if source.get(var)}
        try:
            return cls.model_validate(values)
        except PydanticValidationError as e:
            variables = {field: var for var, field in ENV_FIELDS.items()}
            offending = [
                variables.get(str(err["loc"][0]), str(err["loc"][0])) for err in e.errors()
            ]
            raise ValidationError(
                f"Invalid environment configuration: {', '.join(offending)}",
                details={"variables": offending},
            ) from e


# Global settings instance
settings: Settings | None = None


def init_settings(environ: Mapping[str, str] | None = None, **overrides: object) -> Settings:
    """Initialize global settings from the environment plus explicit overrides.

    Args:
        environ: Mapping to read instead of os.environ
        **overrides: Field values taking precedence over the environment

    Returns:
        Initialized Settings instance
    """
    global settings
    base = Settings.from_env(environ)
    settings = base.model_copy(update=overrides) if overrides else base
    logger.debug("Settings initialized", extra=settings.model_dump())
    return settings


def get_settings() -> Settings:
    """Get global settings, reading the environment on first use.

    Returns:
        Settings instance
    """
    if settings is None:
        return init_settings()
    return settings


def reset_settings() -> None:
    """Drop the global settings so the next access re-reads the environment."""
    global settings
    settings = None
