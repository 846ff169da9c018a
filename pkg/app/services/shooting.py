"""
Periodic orbits of the predator-prey systems by Poincare shooting.

    x' = rho x (1 - x/kappa) - y p(x)
    y' = sigma y (1 - eta y / x)

with p(x) = mu x (S1), mu x/(alpha + x) (S2) or mu x^2/((alpha + x)(beta + x)) (S3).
Periodic orbits are fixed points of the period map, located by Newton's method
with a finite-difference Jacobian.
"""

import logging
from typing import Sequence

import numpy as np
from scipy.optimize import bisect

from ..errors import SolverError
from ..models.base_schemas import SystemVariant
from ..models.coeff_schemas import CoefficientSet
from ..models.orbit_schemas import OrbitResult, State, Trajectory
from . import dopri
from .coefficients import period_mean

logger = logging.getLogger(__name__)

MAX_NEWTON_STEPS = 50
MAX_POLISH_STEPS = 10
FD_STEP = 1e-7
# Coarse Newton stops once updates fall below this relative size; the polish
# at the fine tolerance takes over from there.
COARSE_STEP_TOL = 1e-8
TRAJECTORY_SAMPLES = 512


def response(variant: SystemVariant, x, mu, alpha=None, beta=None):
    """Functional response p(x) of the variant."""
    match variant:
        case SystemVariant.S1:
            return mu * x
        case SystemVariant.S2:
            return mu * x / (alpha + x)
        case SystemVariant.S3:
            return mu * x * x / ((alpha + x) * (beta + x))
    raise ValueError(f"unknown variant {variant!r}")


def vector_field(
    coeffs: CoefficientSet, t, x, y, x_lagged=None, y_lagged=None
) -> tuple[np.ndarray, np.ndarray]:
    """
    Right-hand side at matching arrays of times and states.

    ``x_lagged`` and ``y_lagged`` are x(t - tau_x) and y(t - tau_y) for the
    delayed Holling-Tanner system; they default to the undelayed values.
    """
    x_lagged = x if x_lagged is None else x_lagged
    y_lagged = y if y_lagged is None else y_lagged
    alpha = coeffs.alpha(t) if coeffs.alpha is not None else None
    beta = coeffs.beta(t) if coeffs.beta is not None else None
    p = response(coeffs.variant, x, coeffs.mu(t), alpha, beta)
    dx = coeffs.rho(t) * x * (1.0 - x / coeffs.kappa(t)) - y_lagged * p
    dy = coeffs.sigma(t) * y * (1.0 - coeffs.eta(t) * y / x_lagged)
    return dx, dy


def rhs(coeffs: CoefficientSet, t: float, s: State | Sequence[float]) -> tuple[float, float]:
    x, y = (s.x, s.y) if isinstance(s, State) else (float(s[0]), float(s[1]))
    if x <= 0.0:
        raise SolverError(f"right-hand side undefined for x = {x!r} <= 0")
    dx, dy = vector_field(coeffs, float(t), x, y)
    return float(dx), float(dy)


def make_field(coeffs: CoefficientSet) -> dopri.VectorField:
    """Batched right-hand side for states shaped (B, 2)."""
    variant = coeffs.variant
    rho, kappa, mu, sigma, eta = coeffs.rho, coeffs.kappa, coeffs.mu, coeffs.sigma, coeffs.eta
    alpha, beta = coeffs.alpha, coeffs.beta

    def field(t: float, u: np.ndarray) -> np.ndarray:
        x = u[:, 0]
        y = u[:, 1]
        p = response(
            variant, x, mu(t),
            alpha(t) if alpha is not None else None,
            beta(t) if beta is not None else None,
        )
        out = np.empty_like(u)
        out[:, 0] = rho(t) * x * (1.0 - x / kappa(t)) - y * p
        out[:, 1] = sigma(t) * y * (1.0 - eta(t) * y / x)
        return out

    return field


def _require_undelayed(coeffs: CoefficientSet) -> None:
    if coeffs.is_delayed:
        raise SolverError("shooting does not handle delayed systems; use the operator solver")


def integrate(
    coeffs: CoefficientSet,
    s0: State,
    t0: float,
    t1: float,
    rtol: float,
    atol: float,
) -> dopri.DenseSolution:
    """Dense solution from ``s0`` at ``t0`` to ``t1`` (backward when t1 < t0)."""
    _require_undelayed(coeffs)
    return dopri.integrate(make_field(coeffs), t0, s0.as_array()[None, :], t1, rtol, atol, dense=True)


def sample(sol: dopri.DenseSolution, times: np.ndarray) -> Trajectory:
    states = sol(times)[:, 0, :]
    return Trajectory(t=np.asarray(times, dtype=float), x=states[:, 0], y=states[:, 1])


def period_map(
    coeffs: CoefficientSet, u: np.ndarray, rtol: float, atol: float, periods: int = 1
) -> np.ndarray:
    """States after ``periods`` periods, for a batch shaped (B, 2)."""
    _require_undelayed(coeffs)
    sol = dopri.integrate(make_field(coeffs), 0.0, u, periods * coeffs.omega, rtol, atol)
    return sol.y_final


def _defect(u: np.ndarray, end: np.ndarray) -> float:
    return float(np.sum(np.abs(end - u)))


def poincare_defect(coeffs: CoefficientSet, s0: State, rtol: float, atol: float) -> float:
    """|x(0) - x(omega)| + |y(0) - y(omega)| from one period integration."""
    u = s0.as_array()
    return _defect(u, period_map(coeffs, u[None, :], rtol, atol)[0])


def averaged_seed(coeffs: CoefficientSet) -> State:
    """
    Positive equilibrium of the system with every coefficient replaced by its mean.

    With y = x/eta the prey equation reduces to rho (1 - x/kappa) = p(x)/eta,
    solved by bisection on [0, kappa].
    """
    means = {name: period_mean(expr) for name, expr in coeffs.items()}
    rho, kappa, eta = means["rho"], means["kappa"], means["eta"]

    def balance(x: float) -> float:
        p = response(coeffs.variant, x, means["mu"], means.get("alpha"), means.get("beta"))
        return rho * (1.0 - x / kappa) - p / eta

    if not (balance(0.0) > 0.0 and balance(kappa) < 0.0):
        raise SolverError("averaged system has no positive equilibrium in (0, kappa]")
    x = bisect(balance, 0.0, kappa, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    seed = State(x=x, y=x / eta)
    logger.debug(f"Averaged seed ({seed.x:.16g}, {seed.y:.16g})")
    return seed


def _fd_batch(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    eps = np.maximum(FD_STEP, FD_STEP * np.abs(u))
    batch = np.tile(u, (5, 1))
    batch[1, 0] += eps[0]
    batch[2, 0] -= eps[0]
    batch[3, 1] += eps[1]
    batch[4, 1] -= eps[1]
    return batch, eps


def _newton_update(jacobian: np.ndarray, G: np.ndarray) -> np.ndarray:
    det = np.linalg.det(jacobian)
    if not np.isfinite(det) or abs(det) < 1e-14 * max(1.0, np.max(np.abs(jacobian)) ** 2):
        raise SolverError(f"singular Newton Jacobian (det = {det:.3e})")
    return np.linalg.solve(jacobian, G)


def _check_positive(u: np.ndarray, step: int) -> None:
    if not np.all(np.isfinite(u)) or np.any(u <= 0.0):
        raise SolverError(f"Newton iterate left the positive quadrant at step {step}: {u.tolist()}")


def find_periodic(
    coeffs: CoefficientSet,
    seed: State,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    newton_tol: float = 1e-12,
    final_rtol: float = 1e-13,
    final_atol: float = 1e-15,
    samples: int = TRAJECTORY_SAMPLES,
) -> OrbitResult:
    """
    Newton iteration on G(u) = Phi(u) - u.

    The Jacobian comes from central differences whose columns are integrated
    together with the base state. Iterates are refined at ``rtol`` first, then
    polished with the last Jacobian at ``final_rtol`` until ||G|| <= newton_tol;
    the final fine integration also yields the defect and the trajectory.
    """
    _require_undelayed(coeffs)
    omega = coeffs.omega
    field = make_field(coeffs)
    u = seed.as_array()
    steps = 0
    jacobian = None

    for steps in range(1, MAX_NEWTON_STEPS + 1):
        batch, eps = _fd_batch(u)
        end = dopri.integrate(field, 0.0, batch, omega, rtol, atol).y_final
        G = end[0] - u
        jac_phi = np.column_stack(
            ((end[1] - end[2]) / (2.0 * eps[0]), (end[3] - end[4]) / (2.0 * eps[1]))
        )
        jacobian = jac_phi - np.eye(2)
        delta = _newton_update(jacobian, G)
        u = u - delta
        _check_positive(u, steps)
        size = float(np.max(np.abs(delta)))
        logger.debug(f"Newton step {steps}: |G| = {np.max(np.abs(G)):.3e}, |du| = {size:.3e}")
        if size <= COARSE_STEP_TOL * (1.0 + float(np.max(np.abs(u)))):
            break
    else:
        raise SolverError(f"Newton did not converge in {MAX_NEWTON_STEPS} steps")

    sol = dopri.integrate(field, 0.0, u[None, :], omega, final_rtol, final_atol, dense=True)
    residual = float(np.max(np.abs(sol.y_final[0] - u)))
    polish = 0
    while residual > newton_tol and polish < MAX_POLISH_STEPS:
        polish += 1
        trial = u - _newton_update(jacobian, sol.y_final[0] - u)
        _check_positive(trial, steps + polish)
        trial_sol = dopri.integrate(field, 0.0, trial[None, :], omega, final_rtol, final_atol, dense=True)
        trial_residual = float(np.max(np.abs(trial_sol.y_final[0] - trial)))
        logger.debug(f"Polish step {polish}: |G| = {trial_residual:.3e}")
        if trial_residual >= residual:
            # integration noise floor reached
            break
        u, sol, residual = trial, trial_sol, trial_residual
    if residual > newton_tol:
        logger.warning(
            f"Newton polish stalled at |G| = {residual:.3e} above tolerance {newton_tol:.1e}"
        )

    defect = _defect(u, sol.y_final[0])
    result = OrbitResult(
        variant=coeffs.variant,
        omega=omega,
        initial=State.from_array(u),
        defect=defect,
        trajectory=sample(sol, np.linspace(0.0, omega, samples)),
        newton_steps=steps + polish,
        integrator_tolerance=final_rtol,
    )
    logger.info(
        f"Periodic orbit: x(0) = {u[0]:.16g}, y(0) = {u[1]:.16g}, defect = {defect:.3e} "
        f"after {result.newton_steps} Newton steps"
    )
    return result
