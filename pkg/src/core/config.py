"""Shifted Waring Lab: Environment Settings.

Uses pydantic-settings to load process-wide defaults from environment variables and .env files.
Experiment parameters live in the TOML config handled by ``src.cli.config``; these settings
only supply the defaults that config omits (worker count, precision schedule, budgets).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Literal

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class LabSettings(BaseSettings):
    """Root settings for the lab."""

    model_config = SettingsConfigDict(
        env_prefix="SHIFTLAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    workers: int = Field(default=1, ge=1, le=256, description="Default worker processes")
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        default="INFO", description="Log level"
    )
    precision_start_bits: int = Field(
        default=128, ge=2, description="Initial working precision in bits"
    )
    precision_cap_bits: int = Field(
        default=4096, ge=2, description="Precision cap; past it comparisons stay undecided"
    )
    max_candidates: int = Field(
        default=10**8, ge=1, description="Refuse searches whose window holds more candidates"
    )
    max_grid_cells: int = Field(
        default=10**4, ge=1, description="Refuse scans with more grid points or phase cells"
    )

    @model_validator(mode="after")
    def _check_precision(self) -> LabSettings:
        if self.precision_cap_bits < self.precision_start_bits:
            raise ValueError("precision_cap_bits must be >= precision_start_bits")
        return self


@lru_cache(maxsize=1)
def get_settings() -> LabSettings:
    """Return cached singleton LabSettings instance."""
    return LabSettings()
