"""
Resolving operator of the reciprocal system and its fixed-point iteration.

With X = 1/x and Y = 1/y the periodic systems become

    X' = -rho X + rho/kappa + mu X^2 / ((alpha X + 1) Y)      (S2; S1 and S3 alike)
    Y' = -sigma Y + sigma eta X

so Y is the sigma-kernel integral of sigma*eta*X and a fixed point of

    T(X)(t) = int_t^{t+omega} H(t,s;rho) [rho(s)/kappa(s) + response(s, X(s), Y(s))] ds

gives a positive periodic solution (1/X, 1/Y). In the delayed Holling-Tanner
system Y integrates sigma*eta*X(. - tau_x) and is read at s - tau_y.
"""

from functools import cached_property
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..errors import OperatorError, SolverError
from ..models.base_schemas import SystemVariant
from ..models.bounds_schemas import ConeDomain
from ..models.coeff_schemas import CoefficientSet
from ..models.grid_schemas import Discretization, GridFunction
from ..models.operator_schemas import IterationTrace
from .bounds import DEFAULT_DISCRETIZATION, choose_radii, kernel_quadratures
from .kernel import CumulativeIntegral, GridQuadrature
from .shooting import vector_field

logger = logging.getLogger(__name__)

CONE_ATOL = 1e-10
DIVERGENCE_FACTOR = 10.0


class OperatorContext(BaseModel):
    """
    Everything the operator needs for one coefficient set on one grid.

    Attributes:
        coeffs: System coefficients
        quad_rho: Grid quadrature of the rho kernel
        quad_sigma: Grid quadrature of the sigma kernel
        dom: Cone annulus with its radii
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coeffs: CoefficientSet
    quad_rho: GridQuadrature
    quad_sigma: GridQuadrature
    dom: ConeDomain

    @property
    def ca_rho(self) -> CumulativeIntegral:
        return self.quad_rho.ca

    @property
    def ca_sigma(self) -> CumulativeIntegral:
        return self.quad_sigma.ca

    @property
    def size(self) -> int:
        return self.quad_rho.size

    @property
    def delays(self) -> tuple[float, float]:
        return self.coeffs.delays or (0.0, 0.0)

    def _at_points(self, name: str) -> np.ndarray | None:
        expr = getattr(self.coeffs, name)
        return None if expr is None else expr(self.quad_rho.points)

    @cached_property
    def rho_over_kappa(self) -> np.ndarray:
        return self._at_points("rho") / self._at_points("kappa")

    @cached_property
    def sigma_eta(self) -> np.ndarray:
        return self._at_points("sigma") * self._at_points("eta")

    @cached_property
    def response_coefficients(self) -> tuple[np.ndarray, np.ndarray | None, np.ndarray | None]:
        return self._at_points("mu"), self._at_points("alpha"), self._at_points("beta")


def build_context(
    coeffs: CoefficientSet, disc: Discretization = DEFAULT_DISCRETIZATION, strict: bool = True
) -> OperatorContext:
    """Quadratures and cone domain; ``strict=False`` tolerates an unrepresentable R."""
    quad_rho, quad_sigma = kernel_quadratures(coeffs, disc)
    return OperatorContext(
        coeffs=coeffs,
        quad_rho=quad_rho,
        quad_sigma=quad_sigma,
        dom=choose_radii(coeffs, disc, strict),
    )


def _reciprocal_response(variant: SystemVariant, mu, alpha, beta, X, Y):
    """Response term in reciprocal variables, for Y > 0."""
    match variant:
        case SystemVariant.S1:
            return mu * X / Y
        case SystemVariant.S2:
            return mu * X * X / ((alpha * X + 1.0) * Y)
        case SystemVariant.S3:
            return mu * X * X / ((alpha * X + 1.0) * (beta * X + 1.0) * Y)
    raise ValueError(f"unknown variant {variant!r}")


def response_term(coeffs: CoefficientSet, s, Xs, Ys):
    """
    mu X/Y (S1), mu X^2/((alpha X + 1) Y) (S2) or mu X^2/((alpha X + 1)(beta X + 1) Y) (S3)
    with coefficients evaluated at ``s``.
    """
    if np.any(np.asarray(Ys) <= 0.0):
        raise OperatorError("response term needs Y > 0")
    alpha = coeffs.alpha(s) if coeffs.alpha is not None else None
    beta = coeffs.beta(s) if coeffs.beta is not None else None
    return _reciprocal_response(coeffs.variant, coeffs.mu(s), alpha, beta, Xs, Ys)


def _check_iterate(ctx: OperatorContext, X: GridFunction) -> None:
    if X.size != ctx.size or X.omega != ctx.coeffs.omega:
        raise OperatorError(
            f"iterate on grid ({X.size}, {X.omega:.16g}) does not match the operator grid "
            f"({ctx.size}, {ctx.coeffs.omega:.16g})"
        )
    if X.maximum() <= 0.0:
        raise OperatorError("the operator is undefined at the zero element")
    if X.minimum() < -CONE_ATOL * X.sup_norm():
        raise OperatorError(f"iterate must be nonnegative, minimum is {X.minimum():.6g}")


def compute_Y(ctx: OperatorContext, X: GridFunction, tau_x: float = 0.0) -> GridFunction:
    """Y(t) = int_t^{t+omega} H(t,s;sigma) sigma(s) eta(s) X(s - tau_x) ds at every node."""
    _check_iterate(ctx, X)
    source = X.shifted(-tau_x) if tau_x else X
    values = ctx.quad_sigma.integrate(ctx.sigma_eta * ctx.quad_sigma.panel_values(source))
    Y = GridFunction(values=values, omega=ctx.coeffs.omega)
    if Y.minimum() <= 0.0:
        raise OperatorError(f"Y has nonpositive minimum {Y.minimum():.6g}")
    return Y


def _apply(ctx: OperatorContext, X: GridFunction, Y_points: np.ndarray) -> GridFunction:
    if np.any(Y_points <= 0.0):
        raise OperatorError("interpolated Y is nonpositive inside a quadrature panel")
    X_points = ctx.quad_rho.panel_values(X)
    mu, alpha, beta = ctx.response_coefficients
    bracket = ctx.rho_over_kappa + _reciprocal_response(
        ctx.coeffs.variant, mu, alpha, beta, X_points, Y_points
    )
    return GridFunction(values=ctx.quad_rho.integrate(bracket), omega=ctx.coeffs.omega)


def apply_T(ctx: OperatorContext, X: GridFunction) -> GridFunction:
    Y = compute_Y(ctx, X)
    return _apply(ctx, X, ctx.quad_rho.panel_values(Y))


def apply_T_delay(ctx: OperatorContext, X: GridFunction, tau_x: float, tau_y: float) -> GridFunction:
    """Delayed S2 operator: the inner integral starts at s - tau_y and reads X(theta - tau_x)."""
    if ctx.coeffs.variant is not SystemVariant.S2:
        raise OperatorError(f"delays are only supported for S2, not {ctx.coeffs.variant}")
    if tau_x < 0.0 or tau_y < 0.0:
        raise OperatorError(f"delays must be nonnegative, got ({tau_x!r}, {tau_y!r})")
    Y = compute_Y(ctx, X, tau_x)
    return _apply(ctx, X, Y.panel_samples(ctx.quad_rho.offsets - tau_y))


def operator_for(ctx: OperatorContext, delays: tuple[float, float] | None = None):
    """T or its delayed form, as a function of the iterate."""
    tau_x, tau_y = ctx.delays if delays is None else delays
    if tau_x or tau_y:
        return lambda X: apply_T_delay(ctx, X, tau_x, tau_y)
    return lambda X: apply_T(ctx, X)


def initial_iterate(ctx: OperatorContext) -> GridFunction:
    """Baseline b rescaled into the annulus r <= ||X|| <= R."""
    b = ctx.dom.baseline
    norm = b.sup_norm()
    target = min(max(norm, ctx.dom.r), ctx.dom.R)
    return b if target == norm else b.with_values(b.values * (target / norm))


def damped_picard(
    ctx: OperatorContext,
    X0: GridFunction,
    damping: float = 0.5,
    tol: float = 1e-10,
    max_iter: int = 500,
    delays: tuple[float, float] | None = None,
) -> tuple[GridFunction, IterationTrace]:
    """
    X_{k+1} = (1 - damping) X_k + damping T(X_k) until ||X_k - T(X_k)|| <= tol.

    Raises SolverError when an iterate leaves [r/10, 10R] in norm; an unbounded
    domain (R = inf) only guards the lower end.
    """
    if not 0.0 < damping <= 1.0:
        raise ValueError(f"damping must lie in (0, 1], got {damping!r}")
    _check_iterate(ctx, X0)
    dom = ctx.dom
    scale = dom.R if dom.bounded else X0.sup_norm()
    if not dom.contains(X0, atol=CONE_ATOL * max(1.0, scale)):
        raise OperatorError(
            f"initial iterate is outside the cone domain (norm {X0.sup_norm():.6g}, "
            f"r = {dom.r:.6g}, R = {dom.R:.6g})"
        )
    T = operator_for(ctx, delays)
    low, high = dom.r / DIVERGENCE_FACTOR, dom.R * DIVERGENCE_FACTOR

    X = X0
    residuals: list[float] = []
    converged = False
    for k in range(max_iter):
        TX = T(X)
        residual = X.distance(TX)
        residuals.append(residual)
        logger.debug(f"Picard step {k}: residual {residual:.3e}")
        if residual <= tol:
            converged = True
            break
        X = X.with_values((1.0 - damping) * X.values + damping * TX.values)
        norm = X.sup_norm()
        if norm == 0.0:
            raise OperatorError(f"iterate vanished at step {k + 1}")
        if not low <= norm <= high:
            raise SolverError(
                f"Picard iteration diverged at step {k + 1}: norm {norm:.6g} "
                f"outside [{low:.6g}, {high:.6g}]"
            )

    trace = IterationTrace(residuals=residuals, damping=damping, tol=tol, converged=converged)
    if converged:
        logger.info(f"Picard converged in {trace.steps} steps, residual {trace.final_residual:.3e}")
    else:
        logger.warning(
            f"Picard stopped after {trace.steps} steps at residual {trace.final_residual:.3e}"
        )
    return X, trace


def reconstruct_xy(
    ctx: OperatorContext, X: GridFunction, delays: tuple[float, float] | None = None
) -> tuple[GridFunction, GridFunction]:
    """x = 1/X and y = 1/Y."""
    if X.minimum() <= 0.0:
        raise OperatorError(f"X must be positive to invert, minimum is {X.minimum():.6g}")
    tau_x, _ = ctx.delays if delays is None else delays
    Y = compute_Y(ctx, X, tau_x)
    return X.reciprocal(), Y.reciprocal()


def ode_residual(
    ctx: OperatorContext,
    x: GridFunction,
    y: GridFunction,
    delays: tuple[float, float] | None = None,
) -> float:
    """Sup-norm of x' - f(t, x, y) and y' - g(t, x, y) with spectral derivatives."""
    tau_x, tau_y = ctx.delays if delays is None else delays
    t = x.nodes
    x_lagged = x.shifted(-tau_x).values if tau_x else None
    y_lagged = y.shifted(-tau_y).values if tau_y else None
    fx, fy = vector_field(ctx.coeffs, t, x.values, y.values, x_lagged, y_lagged)
    return max(
        float(np.max(np.abs(x.derivative().values - fx))),
        float(np.max(np.abs(y.derivative().values - fy))),
    )
