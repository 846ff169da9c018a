"""
Radii of the cone annulus on which the resolving operator has a fixed point.

The inner radius stays below the maximum of the baseline integral; the outer
radius dominates the operator norm on its shell. For S1 and S2 the outer
threshold is explicit. For S3 it is the root of ``R = A(R)``, where ``A`` is
decreasing in ``R``, so any radius above the root works.
"""

import logging
import math

import numpy as np
from scipy.optimize import bisect

from ..errors import HypothesisError, KernelError, SolverError
from ..models.base_schemas import SystemVariant
from ..models.bounds_schemas import ConeDomain
from ..models.coeff_schemas import CoefficientSet
from ..models.grid_schemas import Discretization, GridFunction
from .kernel import GridQuadrature, grid_quadrature, log_gamma_of

logger = logging.getLogger(__name__)

DEFAULT_DISCRETIZATION = Discretization()
BISECT_XTOL = 1e-13
MAX_BRACKET_DOUBLINGS = 200


def kernel_quadratures(
    coeffs: CoefficientSet, disc: Discretization = DEFAULT_DISCRETIZATION
) -> tuple[GridQuadrature, GridQuadrature]:
    """Grid quadratures for the rho and sigma kernels."""
    rho = grid_quadrature(coeffs.rho, disc.size, disc.panels, disc.order)
    sigma = grid_quadrature(coeffs.sigma, disc.size, disc.panels, disc.order)
    return rho, sigma


def baseline(coeffs: CoefficientSet, disc: Discretization = DEFAULT_DISCRETIZATION) -> GridFunction:
    """b(t) = int_t^{t+omega} H(t,s;rho) rho(s)/kappa(s) ds."""
    quad_rho, _ = kernel_quadratures(coeffs, disc)
    return quad_rho.solve(lambda s: coeffs.rho(s) / coeffs.kappa(s))


def denominator(coeffs: CoefficientSet, disc: Discretization = DEFAULT_DISCRETIZATION) -> GridFunction:
    """D(s) = int_s^{s+omega} H(s,theta;sigma) sigma(theta) eta(theta) dtheta."""
    _, quad_sigma = kernel_quadratures(coeffs, disc)
    return quad_sigma.solve(lambda s: coeffs.sigma(s) * coeffs.eta(s))


def r_upper(coeffs: CoefficientSet, disc: Discretization = DEFAULT_DISCRETIZATION) -> float:
    return baseline(coeffs, disc).maximum()


def denominator_min(coeffs: CoefficientSet, disc: Discretization = DEFAULT_DISCRETIZATION) -> float:
    value = denominator(coeffs, disc).minimum()
    if value <= 0.0:
        raise HypothesisError(
            [f"sigma*eta kernel integral has nonpositive minimum {value:.6g}"]
        )
    return value


RESPONSE_POWER = {SystemVariant.S1: 1, SystemVariant.S2: 2, SystemVariant.S3: 3}


def response_weight(
    coeffs: CoefficientSet,
    gamma: float,
    disc: Discretization = DEFAULT_DISCRETIZATION,
    log_gamma: float | None = None,
) -> GridFunction:
    """
    Kernel integral of the response bound on the outer shell.

    S1: mu/(gamma D), S2: mu/(alpha gamma^2 D), S3: mu/(alpha beta gamma^3 D); the
    S3 weight is divided by R in the shell map. The power of gamma is formed from
    ``log_gamma`` when given, so an underflowing gamma still has a finite weight
    whenever the weight itself fits in a double.
    """
    if log_gamma is None:
        if not gamma > 0.0:
            raise KernelError(f"cone constant must be positive, got {gamma!r}")
        log_gamma = math.log(gamma)
    power = RESPONSE_POWER[coeffs.variant]
    with np.errstate(over="ignore"):
        inverse = float(np.exp(-power * log_gamma))
    if not math.isfinite(inverse):
        raise KernelError(
            f"gamma^-{power} = exp({-power * log_gamma:.6g}) exceeds the double range; "
            "the outer radius is not representable"
        )
    quad_rho, _ = kernel_quadratures(coeffs, disc)
    pts = quad_rho.points
    D = quad_rho.panel_values(denominator(coeffs, disc))
    weight = coeffs.mu(pts) / D
    if coeffs.alpha is not None:
        weight = weight / coeffs.alpha(pts)
    if coeffs.beta is not None:
        weight = weight / coeffs.beta(pts)
    with np.errstate(over="ignore"):
        values = quad_rho.integrate(weight) * inverse
    if not np.all(np.isfinite(values)):
        raise KernelError("response weight exceeds the double range; the outer radius is not representable")
    return GridFunction(values=values, omega=coeffs.omega)


def shell_map(b: GridFunction, v: GridFunction, R: float) -> float:
    """A(R) = max_t (b(t) + v(t)/R) for the type-3 response."""
    return float(np.max(b.values + v.values / R))


def R_lower(
    coeffs: CoefficientSet,
    gamma: float,
    disc: Discretization = DEFAULT_DISCRETIZATION,
    log_gamma: float | None = None,
) -> float:
    """
    Outer-radius threshold.

    S1 and S2 return max_t int H(t,s;rho)[rho/kappa + weight] ds. S3 returns the
    root R0 of R = A(R) found by bisection.
    """
    if log_gamma is None and not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma!r}")
    b = baseline(coeffs, disc)
    v = response_weight(coeffs, gamma, disc, log_gamma)
    if coeffs.variant is not SystemVariant.S3:
        return float(np.max(b.values + v.values))

    def gap(R: float) -> float:
        return R - shell_map(b, v, R)

    low = b.maximum()
    high = 2.0 * low
    for _ in range(MAX_BRACKET_DOUBLINGS):
        if gap(high) > 0.0:
            break
        high *= 2.0
    else:
        raise SolverError(f"no bracket for R = A(R) below {high:.6g}")
    if not gap(low) < 0.0:
        raise SolverError(f"bracket [{low:.6g}, {high:.6g}] does not enclose R = A(R)")
    root = bisect(gap, low, high, xtol=BISECT_XTOL * high, maxiter=500)
    logger.debug(f"S3 outer radius root R0 = {root:.16g}, residual {gap(root):.3e}")
    return float(root)


def _outer_radius(
    coeffs: CoefficientSet, gamma: float, log_gamma: float, disc: Discretization
) -> float:
    if gamma == 0.0:
        raise KernelError(
            f"cone constant exp({log_gamma:.6g}) underflows; the cone is not representable"
        )
    lower = R_lower(coeffs, gamma, disc, log_gamma)
    if not math.isfinite(2.0 * lower):
        raise KernelError(f"outer radius 2 * {lower:.6g} exceeds the double range")
    return lower


def choose_radii(
    coeffs: CoefficientSet,
    disc: Discretization = DEFAULT_DISCRETIZATION,
    strict: bool = True,
) -> ConeDomain:
    """
    gamma from the rho kernel, r = max baseline / 2, R = 2 * R_lower.

    When gamma or R leaves the double range a KernelError is raised; with
    ``strict=False`` the domain is returned unbounded (R = inf) instead.
    """
    quad_rho, _ = kernel_quadratures(coeffs, disc)
    log_gamma = log_gamma_of(quad_rho.ca)
    gamma = math.exp(log_gamma)
    b = baseline(coeffs, disc)
    upper = b.maximum()
    try:
        lower = _outer_radius(coeffs, gamma, log_gamma, disc)
    except KernelError as e:
        if strict:
            raise
        logger.warning(f"{e}; continuing without an outer radius")
        lower = math.inf
    dom = ConeDomain(
        gamma=gamma,
        r=0.5 * upper,
        R=2.0 * lower,
        omega=coeffs.omega,
        baseline=b,
        r_upper=upper,
        R_lower=lower,
        denominator_min=denominator_min(coeffs, disc),
    )
    logger.info(
        f"Cone domain for {coeffs.variant}: gamma = {gamma:.6e}, "
        f"r = {dom.r:.16g}, R = {dom.R:.16g}"
    )
    return dom
