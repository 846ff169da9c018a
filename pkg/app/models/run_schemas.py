"""
Run schemas - command configuration and result summaries.

These models are shared by the command-line front end and the HTTP service:
a ``RunConfig`` describes one command invocation and the summaries are what
both surfaces print or return.
"""

from enum import StrEnum
from pathlib import Path

from pydantic import BaseModel, Field, field_validator, model_validator

from ..config.demos import DemoId
from .bounds_schemas import ProofStepReport


class Command(StrEnum):
    CHECK = "check"
    BOUNDS = "bounds"
    SOLVE_SHOOTING = "solve-shooting"
    SOLVE_OPERATOR = "solve-operator"
    VERIFY = "verify"
    EXPORT = "export"
    DEMO = "demo"


class SolverOptions(BaseModel):
    """
    Numerical knobs of a run; unset values fall back to the settings.

    Attributes:
        grid: Grid size N of operator iterates
        rtol: Relative tolerance of the Newton integrations
        atol: Absolute tolerance of the Newton integrations
        operator_tol: Residual tolerance of the Picard iteration
        damping: Picard averaging weight
        seed: Seed of the proof-step sampler
        proof_steps: Trials per shell for the proof-step checks (bounds only)
    """

    grid: int | None = Field(None, ge=64, description="Grid size N (power of two)")
    rtol: float | None = Field(None, gt=0)
    atol: float | None = Field(None, gt=0)
    operator_tol: float | None = Field(None, gt=0)
    damping: float | None = Field(None, gt=0, le=1)
    seed: int | None = None
    proof_steps: int | None = Field(None, ge=1)

    @field_validator("grid")
    @classmethod
    def _power_of_two(cls, v: int | None) -> int | None:
        if v is not None and v & (v - 1):
            raise ValueError(f"grid size must be a power of two, got {v}")
        return v


class SystemRequest(SolverOptions):
    """
    Request body naming a system by spec-file text or by demo id.

    Attributes:
        spec_text: Contents of a system spec file
        demo: Built-in system id
    """

    spec_text: str | None = Field(None, description="System spec file contents")
    demo: DemoId | None = Field(None, description="Built-in system", examples=["example1"])

    @model_validator(mode="after")
    def _one_source(self) -> "SystemRequest":
        if (self.spec_text is None) == (self.demo is None):
            raise ValueError("give exactly one of spec_text and demo")
        return self


class RunConfig(SolverOptions):
    """
    One command-line invocation.

    Attributes:
        command: Command to run
        spec: Path of a system spec file
        demo: Built-in system id
        out: Output directory of exported files
    """

    command: Command
    spec: Path | None = None
    demo: DemoId | None = None
    out: Path | None = None

    @model_validator(mode="after")
    def _one_source(self) -> "RunConfig":
        if (self.spec is None) == (self.demo is None):
            raise ValueError("give exactly one of a spec file and a demo id")
        if self.command is Command.DEMO and self.demo is None:
            raise ValueError("demo needs a demo id")
        return self


class BoundsSummary(BaseModel):
    """Cone constant and radii of the fixed-point annulus."""

    gamma: float
    r: float
    R: float
    baseline_max: float
    R_lower: float
    denominator_min: float
    proof_steps: ProofStepReport | None = None


class PublishedValues(BaseModel):
    """Published initial values and defect bound of a built-in system."""

    x0: float
    y0: float
    defect_bound: float


class ShootingSummary(BaseModel):
    """Periodic orbit found by shooting."""

    x0: float
    y0: float
    defect: float
    newton_steps: int
    integrator_tolerance: float
    published: PublishedValues | None = None


class OperatorSummary(BaseModel):
    """Fixed point of the resolving operator and its reconstruction."""

    converged: bool
    steps: int
    residual: float
    damping: float
    x0: float
    y0: float
    ode_residual: float
    delays: tuple[float, float] | None = None


class VerifySummary(BaseModel):
    """
    Agreement of the two solution routes.

    Attributes:
        shooting: Shooting result
        operator: Operator result
        cross_distance: Sup-norm distance of the two (x, y) on the grid
        fixed_point_residual: ||X - T(X)|| for X the reciprocal of the shooting orbit
        ode_residual: Residual of the operator reconstruction in the original system
    """

    shooting: ShootingSummary
    operator: OperatorSummary
    cross_distance: float
    fixed_point_residual: float
    ode_residual: float


class ExportSummary(BaseModel):
    csv_path: str
    plot_path: str
    samples: int
    horizon: float
