"""
System routes - Health check and API information.

This module contains system-level endpoints for health checks,
API information, and the list of built-in systems.
"""

from datetime import UTC, datetime
import logging

from fastapi import APIRouter

from ..config.demos import DEMO_SPECS
from ..config.settings import get_settings
from ..models.base_schemas import HealthResponse

logger = logging.getLogger(__name__)

# Create API router
router = APIRouter()


@router.get(
    "/health",
    response_model=HealthResponse,
    summary="Health Check",
    description="Check if the API is running and healthy",
    tags=["System"],
)
async def health_check():
    """Health check endpoint."""
    settings = get_settings()
    return HealthResponse(
        status="healthy",
        app_name=settings.app_name,
        version=settings.app_version,
        timestamp=datetime.now(UTC),
    )


@router.get(
    "/",
    tags=["System"],
    summary="API Information",
    description="Get API information and the numerical defaults",
)
async def api_info():
    """Root endpoint with API information."""
    settings = get_settings()

    return {
        "message": f"Welcome to {settings.app_name} API",
        "version": settings.app_version,
        "description": "Positive periodic solutions of periodic predator-prey systems",
        "status": "healthy",
        "endpoints": {
            "check": "/check",
            "bounds": "/bounds",
            "solve": {
                "shooting": "/solve/shooting",
                "operator": "/solve/operator",
            },
            "verify": "/verify",
            "demos": "/demos",
            "health_check": "/health",
        },
        "defaults": {
            "grid_size": settings.grid_size,
            "rtol": settings.rtol,
            "atol": settings.atol,
            "operator_tol": settings.operator_tol,
            "damping": settings.damping,
        },
        "documentation": "/docs",
    }


@router.get(
    "/demos",
    summary="Built-in Systems",
    description="Spec-file text of every built-in system",
    tags=["System"],
)
async def list_demos() -> dict[str, str]:
    return {str(demo): text for demo, text in DEMO_SPECS.items()}
