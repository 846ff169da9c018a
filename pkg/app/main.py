"""
Main FastAPI application for the periodic orbit solver.

The application exposes the same pipeline as the command-line front end:
- Hypothesis checks of a coefficient set
- Cone constant and radii of the fixed-point annulus
- Periodic orbits by Poincare shooting and by operator iteration
- Cross-verification of the two solution routes
"""

from contextlib import asynccontextmanager
import logging
import time

from fastapi import FastAPI, Request, status
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .api import router
from .config.logging import configure_logging
from .config.settings import get_settings
from .errors import HypothesisError, PeriodicOrbitError, SolverError

settings = get_settings()
configure_logging(settings)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Lifespan context manager for application startup and shutdown.
    """
    logger.info(f"Starting {settings.app_name} {settings.app_version}")
    yield
    logger.info(f"Stopping {settings.app_name}")


app = FastAPI(
    title=settings.app_name,
    description="""
    ## Periodic predator-prey systems

    Positive omega-periodic solutions of

    - **S1** (Leslie-Gower): p(x) = mu x
    - **S2** (Holling-Tanner): p(x) = mu x / (alpha + x), optionally with delays
    - **S3** (type 3): p(x) = mu x^2 / ((alpha + x)(beta + x))

    Coefficients are expression strings in `t` (see `GET /api/v1/demos`).

    ## Getting Started

    1. **Check the hypotheses**:
       ```
       POST /api/v1/check
       ```

    2. **Solve**:
       ```
       POST /api/v1/solve/shooting
       POST /api/v1/solve/operator
       ```

    3. **Cross-verify**:
       ```
       POST /api/v1/verify
       ```
    """,
    version=settings.app_version,
    lifespan=lifespan,
    docs_url="/docs",
    redoc_url="/redoc",
    openapi_url="/openapi.json",
)


# Global exception handlers


def _error_response(status_code: int, exc: Exception, detail=None) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content={
            "error": type(exc).__name__,
            "message": str(exc),
            "detail": detail,
        },
    )


@app.exception_handler(RequestValidationError)
async def validation_exception_handler(request: Request, exc: RequestValidationError):
    """
    Handle request validation errors.

    Returns a structured error response with validation details.
    """
    logger.error(f"Validation error: {exc.errors()}")

    return JSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content={
            "error": "ValidationError",
            "message": "Invalid request parameters",
            "detail": jsonable_encoder(exc.errors()),
            "body": jsonable_encoder(exc.body),
        },
    )


@app.exception_handler(HypothesisError)
async def hypothesis_exception_handler(request: Request, exc: HypothesisError):
    logger.warning(f"Hypotheses violated: {exc.failures}")
    return _error_response(status.HTTP_422_UNPROCESSABLE_ENTITY, exc, exc.failures)


@app.exception_handler(SolverError)
async def solver_exception_handler(request: Request, exc: SolverError):
    logger.error(f"Solver failure: {exc!s}")
    return _error_response(status.HTTP_500_INTERNAL_SERVER_ERROR, exc)


@app.exception_handler(PeriodicOrbitError)
async def input_exception_handler(request: Request, exc: PeriodicOrbitError):
    """Malformed expressions, spec text and operator inputs."""
    logger.error(f"Input error: {exc!s}")
    return _error_response(status.HTTP_422_UNPROCESSABLE_ENTITY, exc)


@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    """
    Handle all uncaught exceptions.

    Logs the error and returns a generic error response.
    """
    logger.error(f"Unhandled exception: {exc!s}", exc_info=True)

    return JSONResponse(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        content={
            "error": "InternalServerError",
            "message": "An unexpected error occurred",
            "detail": str(exc) if settings.debug else "Please contact support",
        },
    )


# Request logging middleware


@app.middleware("http")
async def log_requests(request: Request, call_next):
    """
    Log all incoming requests and their processing time.
    """
    logger.info(f" {request.method} {request.url.path}")

    start_time = time.time()
    response = await call_next(request)
    process_time = time.time() - start_time

    logger.info(
        f" {request.method} {request.url.path} "
        f"[{response.status_code}] {process_time:.3f}s"
    )

    # Add processing time header
    response.headers["X-Process-Time"] = str(process_time)

    return response


# Include API routes
app.include_router(router, prefix="/api/v1")


@app.get(
    "/",
    tags=["Root"],
    summary="Root Endpoint",
    description="Get basic API information and links",
)
async def root():
    """
    Root endpoint providing API information.

    Returns:
        Dict with API info and useful links
    """
    return {
        "message": settings.app_name,
        "version": settings.app_version,
        "description": "Positive periodic solutions of periodic predator-prey systems",
        "documentation": "/docs",
        "health_check": "/api/v1/health",
        "variants": ["S1", "S2", "S3"],
        "endpoints": {
            "demos": "GET /api/v1/demos",
            "check": "POST /api/v1/check",
            "bounds": "POST /api/v1/bounds",
            "solve_shooting": "POST /api/v1/solve/shooting",
            "solve_operator": "POST /api/v1/solve/operator",
            "verify": "POST /api/v1/verify",
        },
    }


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "app.main:app",
        host=settings.host,
        port=settings.port,
        reload=settings.debug,
        log_level=settings.log_level.lower(),
    )
