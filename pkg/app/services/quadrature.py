"""
Composite Gauss-Legendre quadrature.

Panels are given by explicit breakpoints so callers can align them with grids,
wrap points, or coefficient panels. Refinement halves every panel.
"""

from functools import lru_cache
import logging
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from ..errors import QuadratureError

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 8
MAX_REFINEMENTS = 8


@lru_cache(maxsize=32)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``order``-point rule on [-1, 1]."""
    if order < 1:
        raise ValueError(f"quadrature order must be positive, got {order}")
    nodes, weights = leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_nodes(
    breaks: np.ndarray, order: int = DEFAULT_ORDER
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights, each shaped (panels, order), for the given breakpoints."""
    xi, w = gauss_legendre(order)
    left = breaks[:-1, None]
    half = 0.5 * np.diff(breaks)[:, None]
    return left + half * (xi + 1.0), half * w


def composite(
    f: Callable[[np.ndarray], np.ndarray],
    breaks: np.ndarray,
    order: int = DEFAULT_ORDER,
) -> float:
    nodes, weights = panel_nodes(np.asarray(breaks, dtype=float), order)
    values = np.asarray(f(nodes), dtype=float)
    if not np.all(np.isfinite(values)):
        raise QuadratureError("non-finite integrand")
    return float(np.sum(values * weights))


def refine(breaks: np.ndarray) -> np.ndarray:
    """Split every panel in two."""
    mids = 0.5 * (breaks[:-1] + breaks[1:])
    out = np.empty(2 * len(breaks) - 1)
    out[0::2] = breaks
    out[1::2] = mids
    return out


def adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    breaks: np.ndarray,
    tol: float,
    order: int = DEFAULT_ORDER,
    max_refinements: int = MAX_REFINEMENTS,
) -> float:
    """
    Integrate to absolute accuracy ``tol`` by uniform panel halving.

    Two successive composite estimates agreeing within ``tol`` are accepted;
    the finer one is returned.
    """
    breaks = np.asarray(breaks, dtype=float)
    coarse = composite(f, breaks, order)
    change = float("inf")
    for _ in range(max_refinements):
        breaks = refine(breaks)
        fine = composite(f, breaks, order)
        change = abs(fine - coarse)
        if change <= tol:
            return fine
        coarse = fine
    raise QuadratureError(
        f"tolerance {tol:.1e} not reached with {len(breaks) - 1} panels "
        f"(last change {change:.3e})"
    )
