"""
Operator schemas - fixed-point iteration history.
"""

from pydantic import BaseModel, Field, computed_field, model_validator


class IterationTrace(BaseModel):
    """
    Residual history of a damped Picard run.

    Attributes:
        residuals: Sup-norm ||X_k - T(X_k)|| per step
        damping: Averaging weight lambda
        tol: Requested residual tolerance
        converged: Whether the last residual met the tolerance
    """

    residuals: list[float] = Field(default_factory=list)
    damping: float = Field(..., gt=0, le=1)
    tol: float = Field(..., gt=0)
    converged: bool = False

    @model_validator(mode="after")
    def _check_converged(self) -> "IterationTrace":
        if self.converged and not (self.residuals and self.residuals[-1] <= self.tol):
            raise ValueError("a converged trace must end with a residual within tolerance")
        return self

    @computed_field
    @property
    def steps(self) -> int:
        return len(self.residuals)

    @property
    def final_residual(self) -> float:
        return self.residuals[-1] if self.residuals else float("inf")
