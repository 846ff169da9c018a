"""
Base schemas - common models used across the application.

This module contains foundational Pydantic models that are shared
across the computational services, the CLI and the HTTP endpoints.
"""

from datetime import UTC, datetime
from enum import StrEnum
from typing import Any

from pydantic import BaseModel, Field


class SystemVariant(StrEnum):
    """Functional response shape of the predator-prey system."""

    S1 = "S1"  # Leslie-Gower, p(x) = mu x
    S2 = "S2"  # Holling-Tanner, p(x) = mu x / (alpha + x)
    S3 = "S3"  # type 3, p(x) = mu x^2 / ((alpha + x)(beta + x))


class HealthResponse(BaseModel):
    """
    Response model for health check endpoint.

    Attributes:
        status: Health status
        app_name: Application name
        version: Application version
        timestamp: Health check timestamp
    """

    status: str = Field(..., description="Health status", examples=["healthy"])
    app_name: str = Field(..., description="Application name")
    version: str = Field(..., description="Application version")
    timestamp: datetime = Field(
        default_factory=lambda: datetime.now(UTC), description="Health check timestamp"
    )


class ErrorResponse(BaseModel):
    """
    Response model for error responses.

    Attributes:
        error: Error type or code
        message: Error message
        detail: Optional detailed error information
        timestamp: Error timestamp
    """

    error: str = Field(..., description="Error type or code", examples=["HypothesisError"])
    message: str = Field(
        ..., description="Error message", examples=["hypotheses violated: sigma is identically zero"]
    )
    detail: Any | None = Field(None, description="Detailed error information")
    timestamp: datetime = Field(
        default_factory=lambda: datetime.now(UTC), description="Error timestamp"
    )
