"""
Orbit schemas - states, trajectories and certified periodic solutions.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer

from .base_schemas import SystemVariant


class State(BaseModel):
    """
    Point of the open positive quadrant.

    Attributes:
        x: Prey amount
        y: Predator amount
    """

    model_config = ConfigDict(frozen=True)

    x: float = Field(..., gt=0, description="Prey amount")
    y: float = Field(..., gt=0, description="Predator amount")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])

    @classmethod
    def from_array(cls, u) -> "State":
        return cls(x=float(u[0]), y=float(u[1]))


class Trajectory(BaseModel):
    """Samples of a solution: times with the matching prey and predator values."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray

    @field_serializer("t", "x", "y")
    def _to_list(self, v: np.ndarray) -> list[float]:
        return v.tolist()


class OrbitResult(BaseModel):
    """
    Periodic orbit found by shooting.

    Attributes:
        variant: System variant
        omega: Period
        initial: State at t = 0
        defect: |x(0) - x(omega)| + |y(0) - y(omega)| at the final tolerance
        trajectory: Dense-output samples over one period
        newton_steps: Newton iterations, polish steps included
        integrator_tolerance: Relative tolerance of the final integration
        operator_residual: Fixed-point residual of the reciprocal orbit, when measured
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    variant: SystemVariant
    omega: float
    initial: State
    defect: float = Field(..., ge=0)
    trajectory: Trajectory
    newton_steps: int = Field(..., ge=0)
    integrator_tolerance: float
    operator_residual: float | None = None
