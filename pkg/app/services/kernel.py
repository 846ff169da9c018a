"""
Green kernel of the periodic linear problem x' = -a(t) x + f(t).

For a periodic ``a`` with positive period integral the unique periodic solution is

    x(t) = int_t^{t+omega} H(t, s; a) f(s) ds,
    H(t, s; a) = exp(A(s) - A(t)) / (exp(A(omega)) - 1),

with ``A`` the antiderivative of ``a`` from 0. ``CumulativeIntegral`` caches ``A`` on
a panel grid; ``GridQuadrature`` evaluates the kernel integral at every node of an
N-point grid at once using prefix and suffix sums over grid-aligned panels.
"""

from functools import cached_property, lru_cache
import logging
import math
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import minimize

from ..errors import KernelError
from ..models.expression import PeriodicExpr
from ..models.grid_schemas import GridFunction, grid_nodes
from . import quadrature

logger = logging.getLogger(__name__)

DEFAULT_PANELS = 256
DEFAULT_TOL = 1e-12
GAMMA_GRID = 256
SIGN_CHECK_SAMPLES = 4096
STRIP_SLACK = 1e-12
# exponent magnitude above which kernel sums switch to logarithms
EXP_LIMIT = 600.0

PeriodicFunction = Callable[[np.ndarray], np.ndarray] | GridFunction


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class CumulativeIntegral(BaseModel):
    """
    Antiderivative ``A(t) = int_0^t a`` tabulated at panel breakpoints.

    Attributes:
        source: Integrand a
        nodes: A at the M+1 breakpoints j*omega/M
        total: A(omega)
        order: Gauss-Legendre order used per panel
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    source: PeriodicExpr
    nodes: np.ndarray = Field(..., description="A(t_j) for j = 0..M")
    total: float = Field(..., gt=0)
    order: int = Field(quadrature.DEFAULT_ORDER, ge=1)

    @property
    def omega(self) -> float:
        return self.source.omega

    @property
    def panels(self) -> int:
        return self.nodes.size - 1

    @property
    def step(self) -> float:
        return self.omega / self.panels

    def __call__(self, t):
        """
        A at arbitrary times.

        Off-node values are re-integrated from the nearest breakpoint, and
        ``A(t + k*omega) = A(t) + k*total`` extends A beyond one period.
        """
        t_arr = np.asarray(t, dtype=float)
        flat = t_arr.reshape(-1)
        periods = np.floor(flat / self.omega)
        local = flat - periods * self.omega
        nearest = np.clip(np.rint(local / self.step), 0, self.panels).astype(int)
        anchor = nearest * self.step
        xi, w = quadrature.gauss_legendre(self.order)
        half = 0.5 * (local - anchor)
        points = anchor[:, None] + half[:, None] * (xi + 1.0)
        partial = (self.source(points) * w).sum(axis=1) * half
        out = periods * self.total + self.nodes[nearest] + partial
        if t_arr.ndim == 0:
            return float(out[0])
        return out.reshape(t_arr.shape)

    @cached_property
    def nonnegative(self) -> bool:
        """Whether the integrand is nonnegative on a dense sampling grid."""
        return bool(np.min(self.source(grid_nodes(SIGN_CHECK_SAMPLES, self.omega))) >= 0.0)


def cumulative(
    a: PeriodicExpr, panels: int = DEFAULT_PANELS, order: int = quadrature.DEFAULT_ORDER
) -> CumulativeIntegral:
    """Tabulate the antiderivative of ``a`` with one Gauss-Legendre rule per panel."""
    breaks = np.linspace(0.0, a.omega, panels + 1)
    points, weights = quadrature.panel_nodes(breaks, order)
    values = a(points)
    if not np.all(np.isfinite(values)):
        raise KernelError(f"non-finite values of {a.text}")
    nodes = np.concatenate(([0.0], np.cumsum((values * weights).sum(axis=1))))
    total = float(nodes[-1])
    if total <= 0.0:
        raise KernelError(
            f"period integral of {a.text} is {total:.6g}; the kernel needs a positive one"
        )
    return CumulativeIntegral(source=a, nodes=_frozen(nodes), total=total, order=order)


def kernel_H(ca: CumulativeIntegral, t: float, s: float) -> float:
    """H(t, s; a) on the strip t <= s <= t + omega."""
    slack = STRIP_SLACK * max(1.0, ca.omega)
    if s < t - slack or s > t + ca.omega + slack:
        raise KernelError(f"(t, s) = ({t:.16g}, {s:.16g}) outside the strip t <= s <= t+omega")
    return math.exp(ca(s) - ca(t) - ca.total) / -math.expm1(-ca.total)


def _evaluate(g: PeriodicFunction, s: np.ndarray) -> np.ndarray:
    return np.asarray(g(s), dtype=float)


def weighted_period_integral(
    ca: CumulativeIntegral,
    g: PeriodicFunction,
    t: float,
    tol: float = DEFAULT_TOL,
) -> float:
    """
    int_t^{t+omega} H(t, s; a) g(s) ds to absolute accuracy ``tol``.

    Panels follow the grid of ``g`` when it is a GridFunction (otherwise the
    cumulative grid of ``a``), with the first and last panels cut at ``t`` and
    ``t + omega``.
    """
    step = g.step if isinstance(g, GridFunction) else ca.step
    first = math.floor(t / step) + 1
    last = math.ceil((t + ca.omega) / step) - 1
    inner = np.arange(first, last + 1) * step
    inner = inner[(inner > t) & (inner < t + ca.omega)]
    breaks = np.concatenate(([t], inner, [t + ca.omega]))

    a_t = ca(t) + ca.total
    scale = -1.0 / math.expm1(-ca.total)

    def integrand(s: np.ndarray) -> np.ndarray:
        return np.exp(ca(s) - a_t) * scale * _evaluate(g, s)

    return quadrature.adaptive(integrand, breaks, tol, order=ca.order)


class GridQuadrature:
    """
    Kernel integrals at all N grid nodes for one coefficient ``a``.

    Each grid cell [t_k, t_{k+1}] carries a Gauss-Legendre rule. With
    ``S_k = sum_q W_q exp(A(s_kq) - A_omega) g(s_kq)`` the value at node i is

        (exp(-A(t_i)) * sum_{k>=i} S_k + exp(A_omega - A(t_i)) * sum_{k<i} S_k)
        / (1 - exp(-A_omega)).
    """

    def __init__(self, ca: CumulativeIntegral, size: int):
        self.ca = ca
        self.size = size
        self.omega = ca.omega
        xi, w = quadrature.gauss_legendre(ca.order)
        h = self.omega / size
        self.offsets = _frozen(0.5 * h * (xi + 1.0))
        self.weights = _frozen(0.5 * h * w)
        self.nodes = _frozen(grid_nodes(size, self.omega))
        self.points = _frozen(self.nodes[:, None] + self.offsets[None, :])
        a_nodes = ca(self.nodes)
        self._a_nodes = _frozen(a_nodes)
        self._log_growth = _frozen(ca(self.points) - ca.total)
        self._total = ca.total
        self._scale = -1.0 / math.expm1(-ca.total)
        spread = max(
            float(np.max(np.abs(self._log_growth))),
            float(np.max(np.abs(a_nodes))),
            float(np.max(np.abs(ca.total - a_nodes))),
        )
        self.log_domain = spread > EXP_LIMIT
        if self.log_domain:
            logger.debug(f"Kernel of {ca.source.text} summed in log domain (exponent spread {spread:.4g})")
        else:
            self._growth = _frozen(np.exp(self._log_growth))
            self._decay = _frozen(np.exp(-a_nodes))
            self._wrap = _frozen(np.exp(ca.total - a_nodes))

    def panel_values(self, g: PeriodicFunction) -> np.ndarray:
        """g at the quadrature points, shaped (N, order)."""
        if isinstance(g, GridFunction) and g.size == self.size:
            return g.panel_samples(self.offsets)
        return _evaluate(g, self.points)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Kernel integrals at every node from integrand values at ``points``."""
        if self.log_domain:
            return self._integrate_logs(values)
        panel = (self._growth * values) @ self.weights
        suffix = np.cumsum(panel[::-1])[::-1]
        prefix = np.concatenate(([0.0], np.cumsum(panel[:-1])))
        return self._scale * (self._decay * suffix + self._wrap * prefix)

    def _integrate_logs(self, values: np.ndarray) -> np.ndarray:
        """The same prefix and suffix sums, accumulated as signed logarithms."""
        shift = self._log_growth.max(axis=1)
        panel = (np.exp(self._log_growth - shift[:, None]) * values) @ self.weights
        with np.errstate(divide="ignore"):
            log_panel = shift + np.log(np.abs(panel))
        out = np.zeros(self.size)
        for sign in (1.0, -1.0):
            logs = np.where(np.sign(panel) == sign, log_panel, -np.inf)
            suffix = np.logaddexp.accumulate(logs[::-1])[::-1]
            prefix = np.concatenate(([-np.inf], np.logaddexp.accumulate(logs[:-1])))
            out += sign * (
                np.exp(suffix - self._a_nodes) + np.exp(prefix + self._total - self._a_nodes)
            )
        return self._scale * out

    def solve(self, f: PeriodicFunction) -> GridFunction:
        return GridFunction(values=self.integrate(self.panel_values(f)), omega=self.omega)


@lru_cache(maxsize=32)
def grid_quadrature(
    a: PeriodicExpr,
    size: int,
    panels: int = DEFAULT_PANELS,
    order: int = quadrature.DEFAULT_ORDER,
) -> GridQuadrature:
    """Cached ``GridQuadrature`` for a coefficient on an N-point grid."""
    return GridQuadrature(cumulative(a, panels, order), size)


def periodic_linear_solve(
    a: PeriodicExpr,
    f: PeriodicFunction,
    size: int,
    panels: int = DEFAULT_PANELS,
    order: int = quadrature.DEFAULT_ORDER,
) -> GridFunction:
    """Periodic solution of x' = -a x + f sampled at the N grid nodes."""
    return grid_quadrature(a, size, panels, order).solve(f)


def _strip_exponent(ca: CumulativeIntegral, tu: np.ndarray) -> float:
    return float(ca(tu[0] + tu[1]) - ca(tu[0]))


def _strip_gradient(ca: CumulativeIntegral, tu: np.ndarray) -> np.ndarray:
    a = ca.source
    upper = a(float(tu[0] + tu[1]))
    return np.array([upper - a(float(tu[0])), upper])


def _polish(ca: CumulativeIntegral, start: np.ndarray, sign: float) -> float:
    """Local extremum of A(t+u) - A(t) over the box [0, omega]^2 (sign -1 maximizes)."""
    result = minimize(
        lambda tu: sign * _strip_exponent(ca, tu),
        start,
        jac=lambda tu: sign * _strip_gradient(ca, tu),
        method="L-BFGS-B",
        bounds=[(0.0, ca.omega), (0.0, ca.omega)],
        options={"ftol": 1e-15, "gtol": 1e-13, "maxiter": 200},
    )
    return sign * float(result.fun)


def strip_exponent_range(ca: CumulativeIntegral, grid: int = GAMMA_GRID) -> tuple[float, float]:
    """
    Min and max of A(s) - A(t) over 0 <= t <= omega, t <= s <= t + omega.

    Grid search over (t, u = s - t) followed by an L-BFGS-B polish of the best
    grid candidates.
    """
    t = np.linspace(0.0, ca.omega, grid)
    tt, uu = np.meshgrid(t, t, indexing="ij")
    exponent = ca(tt + uu) - ca(tt)
    order = np.argsort(exponent, axis=None)

    def start(idx: int) -> np.ndarray:
        i, j = np.unravel_index(idx, exponent.shape)
        return np.array([t[i], t[j]])

    low = min([float(exponent.min())] + [_polish(ca, start(k), 1.0) for k in order[:4]])
    high = max([float(exponent.max())] + [_polish(ca, start(k), -1.0) for k in order[-4:]])
    return low, high


def log_gamma_of(ca: CumulativeIntegral, grid: int = GAMMA_GRID) -> float:
    """
    Logarithm of the ratio min H / max H over the strip.

    For a nonnegative integrand the exponent A(s) - A(t) runs over [0, A_omega],
    so the log ratio is -A_omega; otherwise the strip is searched.
    """
    if ca.nonnegative:
        return -ca.total
    low, high = strip_exponent_range(ca, grid)
    logger.debug(f"Strip exponent range for {ca.source.text}: [{low:.12g}, {high:.12g}]")
    return low - high


def gamma_of(ca: CumulativeIntegral, grid: int = GAMMA_GRID) -> float:
    """Cone constant exp(log_gamma_of); 0.0 when it underflows."""
    return math.exp(log_gamma_of(ca, grid))
