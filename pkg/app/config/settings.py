"""
Configuration settings for the periodic orbit solver.

This module handles environment variables and the numerical defaults shared
by the command-line front end and the HTTP service.
"""

from functools import lru_cache
import math

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables.

    These settings configure the discretization, the solver tolerances,
    logging and the API server.
    """

    # API Server Configuration
    app_name: str = "Cone Periodic Orbits"
    app_version: str = "1.0.0"
    debug: bool = False
    host: str = "0.0.0.0"
    port: int = 8000

    # Logging
    log_level: str = "INFO"
    log_json: bool = False
    log_file: str | None = None

    # Kernel discretization
    grid_size: int = 512
    quadrature_order: int = 8
    cumulative_panels: int = 256

    # Shooting
    rtol: float = 1e-10
    atol: float = 1e-12
    final_rtol: float = 1e-13
    final_atol: float = 1e-15
    newton_tol: float = 1e-12

    # Operator iteration
    operator_tol: float = 1e-10
    damping: float = 0.5
    max_iter: int = 500

    # Proof-step sampling
    seed: int = 20240611

    # Export
    export_horizon: float = 10.0 * math.pi
    export_samples: int = 2048
    output_dir: str = "out"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="allow",
    )


@lru_cache
def get_settings() -> Settings:
    """
    Get cached settings instance.

    Returns:
        Settings: The application settings instance
    """
    return Settings()
