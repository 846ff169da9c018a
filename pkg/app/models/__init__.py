"""
Data models module for the periodic orbit solver.

This module contains Pydantic models for the domain objects and for
request/response validation, organized by domain.

Domain modules:
    - base_schemas: Common models (SystemVariant, Health, Error)
    - expression: Expression trees and PeriodicExpr coefficients
    - coeff_schemas: Coefficient sets and hypothesis reports
    - grid_schemas: Grid functions and discretization settings
    - bounds_schemas: Cone domain and proof-step reports
    - operator_schemas: Picard iteration traces
    - orbit_schemas: States, trajectories and shooting results
    - run_schemas: Command configuration and result summaries
"""

from .base_schemas import ErrorResponse, HealthResponse, SystemVariant
from .bounds_schemas import ConeDomain, ProofStepReport
from .coeff_schemas import CoefficientCheck, CoefficientSet, HypothesisReport
from .expression import PeriodicExpr
from .grid_schemas import Discretization, GridFunction
from .operator_schemas import IterationTrace
from .orbit_schemas import OrbitResult, State, Trajectory
from .run_schemas import (
    BoundsSummary,
    Command,
    ExportSummary,
    OperatorSummary,
    PublishedValues,
    RunConfig,
    ShootingSummary,
    SolverOptions,
    SystemRequest,
    VerifySummary,
)

__all__ = [
    "BoundsSummary",
    "CoefficientCheck",
    "CoefficientSet",
    "Command",
    "ConeDomain",
    "Discretization",
    "ErrorResponse",
    "ExportSummary",
    "GridFunction",
    "HealthResponse",
    "HypothesisReport",
    "IterationTrace",
    "OperatorSummary",
    "OrbitResult",
    "PeriodicExpr",
    "ProofStepReport",
    "PublishedValues",
    "RunConfig",
    "ShootingSummary",
    "SolverOptions",
    "State",
    "SystemRequest",
    "Trajectory",
    "VerifySummary",
]
