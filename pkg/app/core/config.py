import logging

from pydantic import field_validator, model_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """
    Centralized configuration with defaults sized for desk-scale runs
    (prefixes of a few thousand symbols, γ tables up to a few hundred rows).
    """

    model_config = {"env_file": ".env"}

    # Exact solver
    SOLVER_TIMEOUT_SECONDS: float = 60.0
    SOLVER_THREADS: int = 1

    # Sequence generation
    MAX_PREFIX_LENGTH: int = 2_000_000
    GREEDY_INITIAL_WINDOW: int = 64

    # Appearance / recurrence windows
    PROFILE_WINDOW: int = 4096
    PROFILE_MAX_LENGTH: int = 256
    RETIREMENT_C0: int = 0
    CLASSIFY_EXACT_MAX_N: int = 32
    NONRECURRENT_LENGTH_DIVISOR: int = 16

    # Output
    LOG_LEVEL: str = "WARNING"
    REPORT_DIR: str = "cache/reports"

    @field_validator("SOLVER_THREADS")
    @classmethod
    def validate_threads(cls, value: int) -> int:
        if value < 1:
            raise ValueError("SOLVER_THREADS must be at least 1.")
        return value

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, value: str) -> str:
        level = value.strip().upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"LOG_LEVEL must be a logging level name, got {value!r}.")
        return level

    @model_validator(mode="after")
    def validate_limits(self):
        if self.SOLVER_TIMEOUT_SECONDS <= 0:
            raise ValueError("SOLVER_TIMEOUT_SECONDS must be positive.")
        if self.MAX_PREFIX_LENGTH < 1:
            raise ValueError("MAX_PREFIX_LENGTH must be positive.")
        if self.PROFILE_WINDOW < 64:
            raise ValueError("PROFILE_WINDOW must be at least 64.")
        if self.PROFILE_MAX_LENGTH < 1:
            raise ValueError("PROFILE_MAX_LENGTH must be positive.")
        if self.GREEDY_INITIAL_WINDOW < 1:
            self.GREEDY_INITIAL_WINDOW = 1
        if self.NONRECURRENT_LENGTH_DIVISOR < 1:
            raise ValueError("NONRECURRENT_LENGTH_DIVISOR must be positive.")
        return self


# Instantiate settings once
settings = Settings()
