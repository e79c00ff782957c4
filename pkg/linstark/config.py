"""
Runtime configuration loaded from the environment (prefix LINSTARK_).
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Tolerances and limits shared by the CLI, the HTTP surface and the checks."""

    model_config = SettingsConfigDict(
        env_prefix="LINSTARK_",
        env_file=".env",
        extra="ignore",
    )

    tol: float = Field(1e-6, gt=0, description="Default relative pass/fail tolerance")
    zero_residual_tol: float = Field(1e-12, gt=0)
    max_expansion_order: int = Field(8, ge=1, le=12)
    delta_limit: float = Field(0.3, gt=0, lt=1)
    kmax: int = Field(2000, ge=10)
    grid_points: int = Field(20001, ge=3)
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"
    host: str = "0.0.0.0"
    port: int = 8000
    cors_origins: str = "*"


@lru_cache
def get_settings() -> Settings:
    """Return the process-wide settings instance."""
    return Settings()
