"""
Solve routes - hypothesis checks, cone radii and both solvers.

Every endpoint takes a SystemRequest naming the system by spec text or demo id.
Domain errors propagate to the handlers registered in ``app.main``.
"""

import logging

from fastapi import APIRouter, Depends, HTTPException, status

from ..errors import PeriodicOrbitError
from ..models.coeff_schemas import CoefficientSet, HypothesisReport
from ..models.run_schemas import (
    BoundsSummary,
    OperatorSummary,
    ShootingSummary,
    SystemRequest,
    VerifySummary,
)
from ..services.orbit_service import OrbitService, get_orbit_service

logger = logging.getLogger(__name__)

# Create API router
router = APIRouter()


def _load(service: OrbitService, request: SystemRequest) -> CoefficientSet:
    return service.load(demo=request.demo, spec_text=request.spec_text)


def _internal_error(action: str, e: Exception) -> HTTPException:
    logger.error(f"{action} error: {e!s}")
    return HTTPException(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        detail=f"{action} failed: {e!s}",
    )


@router.post(
    "/check",
    response_model=HypothesisReport,
    summary="Check Hypotheses",
    description="Nonnegativity, nonvanishing and positivity checks of the coefficients",
    tags=["Solve"],
)
def check_system(request: SystemRequest, service: OrbitService = Depends(get_orbit_service)):
    """Return the hypothesis report; a failed report is not an error here."""
    try:
        return service.check(_load(service, request))
    except PeriodicOrbitError:
        raise
    except Exception as e:
        raise _internal_error("Hypothesis check", e) from e


@router.post(
    "/bounds",
    response_model=BoundsSummary,
    summary="Cone Radii",
    description="Cone constant gamma and the radii r < R of the fixed-point annulus",
    tags=["Solve"],
)
def compute_bounds(request: SystemRequest, service: OrbitService = Depends(get_orbit_service)):
    try:
        return service.bounds(_load(service, request), request)
    except PeriodicOrbitError:
        raise
    except Exception as e:
        raise _internal_error("Bounds", e) from e


@router.post(
    "/solve/shooting",
    response_model=ShootingSummary,
    summary="Shooting Solver",
    description="Periodic orbit by Newton iteration on the period map",
    tags=["Solve"],
)
def solve_shooting(request: SystemRequest, service: OrbitService = Depends(get_orbit_service)):
    try:
        orbit = service.solve_shooting(_load(service, request), request)
        return service.shooting_summary(orbit, request.demo)
    except PeriodicOrbitError:
        raise
    except Exception as e:
        raise _internal_error("Shooting", e) from e


@router.post(
    "/solve/operator",
    response_model=OperatorSummary,
    summary="Operator Solver",
    description="Periodic orbit as the fixed point of the resolving operator",
    tags=["Solve"],
)
def solve_operator(request: SystemRequest, service: OrbitService = Depends(get_orbit_service)):
    try:
        return service.solve_operator(_load(service, request), request).summary()
    except PeriodicOrbitError:
        raise
    except Exception as e:
        raise _internal_error("Operator solve", e) from e


@router.post(
    "/verify",
    response_model=VerifySummary,
    summary="Cross-verify",
    description="Run both solvers and compare their periodic orbits",
    tags=["Solve"],
)
def verify(request: SystemRequest, service: OrbitService = Depends(get_orbit_service)):
    try:
        return service.verify(_load(service, request), request)
    except PeriodicOrbitError:
        raise
    except Exception as e:
        raise _internal_error("Verification", e) from e
