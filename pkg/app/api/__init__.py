"""
API module for the periodic orbit solver.

This module contains FastAPI route definitions and endpoint handlers,
organized by domain.

Domain route modules:
    - system_routes: Health check, API information and built-in systems
    - solve_routes: Hypothesis checks, radii, solvers and cross-verification
"""

from fastapi import APIRouter

from .solve_routes import router as solve_router
from .system_routes import router as system_router

# Create main router and include all sub-routers
router = APIRouter()

router.include_router(system_router)
router.include_router(solve_router)

__all__ = ["router"]
