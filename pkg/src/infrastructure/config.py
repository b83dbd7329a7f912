"""Application configuration management using Pydantic settings."""

import os
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from CB_* environment variables.

    Attributes:
        threads: Worker cap for experiment pools (CB_THREADS)
        log_level: Logging level without -v flags (CB_LOG_LEVEL)
        exact_max_nodes: Largest n the exact simulator accepts
        ode_ceiling: Value of g_R at which solve_g declares blow-up
        budget: Max replications x sweep points in one plan
        audit: Recompute-from-scratch audits of the mark bookkeeping
    """

    model_config = SettingsConfigDict(
        env_prefix="CB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    threads: Optional[int] = Field(
        default=None,
        ge=1,
        description="Worker cap for experiment pools (default: logical cores)",
    )
    log_level: str = Field(
        default="WARNING",
        description="Logging level when no -v flag is given",
    )

    # Simulation limits
    exact_max_nodes: int = Field(
        default=20_000,
        gt=0,
        description="Memory guard for the explicit-graph simulator",
    )
    ode_ceiling: float = Field(
        default=1e8,
        gt=0,
        description="Blow-up ceiling for the red component of g",
    )
    budget: int = Field(
        default=2_000_000,
        gt=0,
        description="Max replications x sweep points per experiment plan",
    )
    audit: bool = Field(
        default=False,
        description="Audit incremental bookkeeping against full rescans",
    )

    def worker_count(self) -> int:
        """Number of pool workers to use."""
        return self.threads or os.cpu_count() or 1


# Singleton instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get application settings singleton.

    Returns:
        Settings instance loaded from environment

    Raises:
        ValidationError: If a setting is present but invalid
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next call re-reads the environment."""
    global _settings
    _settings = None
