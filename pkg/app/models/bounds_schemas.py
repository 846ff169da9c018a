"""
Bounds schemas - the cone domain of the fixed-point argument and proof-step reports.
"""

import math

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from .grid_schemas import GridFunction


class ConeDomain(BaseModel):
    """
    Annulus ``{X in K_gamma : r <= ||X|| <= R}`` of the min-max cone.

    Attributes:
        gamma: Cone constant of the rho kernel
        r: Inner radius
        R: Outer radius, inf when it is not representable
        omega: Period
        baseline: b(t) = int_t^{t+omega} H(t,s;rho) rho(s)/kappa(s) ds on the grid
        r_upper: max_t b(t), the strict upper limit for r
        R_lower: Outer-radius threshold (the fixed-point root for S3)
        denominator_min: Minimum over the grid of the sigma*eta kernel integral
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    gamma: float = Field(..., ge=0, lt=1)
    r: float = Field(..., gt=0)
    R: float = Field(..., gt=0)
    omega: float = Field(..., gt=0)
    baseline: GridFunction
    r_upper: float
    R_lower: float
    denominator_min: float

    @model_validator(mode="after")
    def _check_radii(self) -> "ConeDomain":
        if not self.r < self.R:
            raise ValueError(f"inner radius {self.r:.6g} must be below outer radius {self.R:.6g}")
        if not self.r < self.r_upper:
            raise ValueError(f"inner radius {self.r:.6g} must be below max baseline {self.r_upper:.6g}")
        return self

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.R) and self.gamma > 0.0

    def contains(self, X: GridFunction, atol: float = 1e-12) -> bool:
        norm = X.sup_norm()
        return X.in_cone(self.gamma, atol) and self.r - atol <= norm <= self.R + atol


class ProofStepReport(BaseModel):
    """
    Sampled check of the norm inequalities on the two shells of the cone domain.

    Attributes:
        trials: Random cone elements drawn per shell
        seed: Seed of the generator
        inner_failures: Elements on ||X|| = r with ||T X|| below max baseline
        outer_failures: Elements on ||X|| = R with ||T X|| >= R
        cone_failures: Images T X outside the cone
        inner_margin: Smallest ||T X|| - max baseline on the inner shell
        outer_margin: Smallest R - ||T X|| on the outer shell
        cone_margin: Smallest min T X - gamma * max T X
    """

    trials: int
    seed: int
    inner_failures: int = 0
    outer_failures: int = 0
    cone_failures: int = 0
    inner_margin: float = float("inf")
    outer_margin: float = float("inf")
    cone_margin: float = float("inf")

    @computed_field
    @property
    def passed(self) -> bool:
        return self.inner_failures == 0 and self.outer_failures == 0 and self.cone_failures == 0
