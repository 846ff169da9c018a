"""
Coefficient schemas - system specifications and hypothesis reports.

This module contains the Pydantic models describing one periodic predator-prey
system (its variant and coefficient functions) and the outcome of checking the
positivity hypotheses against it.
"""

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from .base_schemas import SystemVariant
from .expression import PeriodicExpr

COEFFICIENT_NAMES: dict[SystemVariant, tuple[str, ...]] = {
    SystemVariant.S1: ("rho", "kappa", "mu", "sigma", "eta"),
    SystemVariant.S2: ("rho", "kappa", "mu", "alpha", "sigma", "eta"),
    SystemVariant.S3: ("rho", "kappa", "mu", "alpha", "beta", "sigma", "eta"),
}

# Factors of the strict-positivity product condition per variant.
PRODUCT_FACTORS: dict[SystemVariant, tuple[str, ...]] = {
    SystemVariant.S1: ("kappa",),
    SystemVariant.S2: ("alpha", "kappa"),
    SystemVariant.S3: ("alpha", "beta", "kappa"),
}


class CoefficientSet(BaseModel):
    """
    Coefficients of one system variant.

    Attributes:
        variant: S1, S2 or S3
        omega: Period shared by every coefficient
        rho, kappa, mu, sigma, eta: Coefficients present in every variant
        alpha: Half-saturation of the response (S2, S3 only)
        beta: Second saturation constant (S3 only)
        delays: Optional (tau_x, tau_y), S2 only
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    variant: SystemVariant
    omega: float = Field(..., gt=0, description="Shared period")
    rho: PeriodicExpr
    kappa: PeriodicExpr
    mu: PeriodicExpr
    sigma: PeriodicExpr
    eta: PeriodicExpr
    alpha: PeriodicExpr | None = None
    beta: PeriodicExpr | None = None
    delays: tuple[float, float] | None = Field(
        None, description="Delays (tau_x, tau_y) of the delayed Holling-Tanner system"
    )

    @model_validator(mode="after")
    def _check_consistency(self) -> "CoefficientSet":
        needs_alpha = self.variant in (SystemVariant.S2, SystemVariant.S3)
        needs_beta = self.variant is SystemVariant.S3
        if needs_alpha != (self.alpha is not None):
            raise ValueError(
                f"alpha is {'required' if needs_alpha else 'not allowed'} for {self.variant}"
            )
        if needs_beta != (self.beta is not None):
            raise ValueError(
                f"beta is {'required' if needs_beta else 'not allowed'} for {self.variant}"
            )
        for name, expr in self.items():
            if expr.omega != self.omega:
                raise ValueError(
                    f"{name} declares period {expr.omega!r}, expected {self.omega!r}"
                )
        if self.delays is not None:
            if self.variant is not SystemVariant.S2:
                raise ValueError("delays are only supported for S2")
            if min(self.delays) < 0:
                raise ValueError("delays must be nonnegative")
        return self

    def items(self) -> list[tuple[str, PeriodicExpr]]:
        """(name, expression) pairs of the coefficients this variant uses."""
        return [(name, getattr(self, name)) for name in COEFFICIENT_NAMES[self.variant]]

    @property
    def is_delayed(self) -> bool:
        return self.delays is not None and any(d > 0 for d in self.delays)


class CoefficientCheck(BaseModel):
    """Sign checks of a single coefficient on the sampling grid."""

    name: str
    nonnegative: bool
    not_identically_zero: bool
    minimum: float = Field(..., description="Grid minimum")
    worst_t: float = Field(..., description="Time of the grid minimum")
    integral: float = Field(..., description="Integral over one period")


class HypothesisReport(BaseModel):
    """
    Outcome of checking the positivity hypotheses.

    Attributes:
        variant: System variant checked
        coefficients: Per-coefficient sign checks
        product_name: The strictly positive product required (kappa, alpha*kappa, ...)
        product_minimum: Grid minimum of that product
        product_worst_t: Where the minimum is attained
        sigma_eta_integral: Integral of sigma*eta over one period
    """

    variant: SystemVariant
    coefficients: list[CoefficientCheck]
    product_name: str
    product_minimum: float
    product_worst_t: float
    sigma_eta_integral: float
    zero_threshold: float = 1e-9

    @computed_field
    @property
    def product_positive(self) -> bool:
        return self.product_minimum > 0.0

    @computed_field
    @property
    def sigma_eta_nonzero(self) -> bool:
        return self.sigma_eta_integral > self.zero_threshold

    @computed_field
    @property
    def passed(self) -> bool:
        return (
            all(c.nonnegative and c.not_identically_zero for c in self.coefficients)
            and self.product_positive
            and self.sigma_eta_nonzero
        )

    def failures(self) -> list[str]:
        """Human-readable diagnosis for every failed check."""
        out: list[str] = []
        for c in self.coefficients:
            if not c.nonnegative:
                out.append(f"{c.name} is negative (min {c.minimum:.6g} at t = {c.worst_t:.6g})")
            if not c.not_identically_zero:
                out.append(f"{c.name} is identically zero (integral {c.integral:.3e})")
        if not self.product_positive:
            out.append(
                f"{self.product_name} is not strictly positive "
                f"(min {self.product_minimum:.6g} at t = {self.product_worst_t:.6g})"
            )
        if not self.sigma_eta_nonzero:
            out.append(f"sigma*eta is identically zero (integral {self.sigma_eta_integral:.3e})")
        return out
