"""
Dormand-Prince 5(4) integrator for batches of positive planar states.

States have shape (B, 2): every row is integrated with the same step sequence,
which lets finite-difference Newton columns share the base trajectory's steps.
Stages that leave the open positive quadrant cause the step to be halved
before the vector field is evaluated there.

The tableau, the error estimator and the quartic dense-output matrix are the
ones of ``scipy.integrate.RK45``.
"""

import logging
from typing import Callable

import numpy as np
from scipy.integrate import RK45

from ..errors import SolverError

logger = logging.getLogger(__name__)

VectorField = Callable[[float, np.ndarray], np.ndarray]

ORDER = 5
SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0
MAX_STEPS = 1_000_000

_A = RK45.A
_B = RK45.B
_C = RK45.C
_E = RK45.E
_P = RK45.P
_STAGES = RK45.n_stages


def _rms(err: np.ndarray, scale: np.ndarray) -> float:
    """Largest per-row RMS of the scaled error."""
    return float(np.max(np.sqrt(np.mean((err / scale) ** 2, axis=-1))))


class DenseSolution:
    """Piecewise quartic interpolant over the accepted steps."""

    def __init__(
        self, ts: list[float], ys: list[np.ndarray], qs: list[np.ndarray], steps: int | None = None
    ):
        self.ts = np.asarray(ts)
        self._ys = np.stack(ys)
        self._qs = np.stack(qs) if qs else np.zeros((0,) + self._ys.shape[1:] + (4,))
        self.direction = 1.0 if self.ts[-1] >= self.ts[0] else -1.0
        self.steps = self.ts.size - 1 if steps is None else steps

    @property
    def t_final(self) -> float:
        return float(self.ts[-1])

    @property
    def y_final(self) -> np.ndarray:
        return self._ys[-1]

    def __call__(self, t) -> np.ndarray:
        """States at the given times, shaped (len(t), B, 2)."""
        if self._qs.shape[0] == 0 or self._qs.shape[0] != self.ts.size - 1:
            raise SolverError("no dense output: integrate with dense=True over a nonzero span")
        t = np.atleast_1d(np.asarray(t, dtype=float))
        keyed = self.direction * self.ts
        idx = np.searchsorted(keyed, self.direction * t, side="right") - 1
        idx = np.clip(idx, 0, self.ts.size - 2)
        t_old = self.ts[idx]
        h = self.ts[idx + 1] - t_old
        x = (t - t_old) / h
        powers = np.cumprod(np.repeat(x[:, None], 4, axis=1), axis=1)
        increment = np.einsum("nbkj,nj->nbk", self._qs[idx], powers)
        return self._ys[idx] + h[:, None, None] * increment


def _initial_step(
    fun: VectorField, t0: float, y0: np.ndarray, f0: np.ndarray,
    direction: float, rtol: float, atol: float,
) -> float:
    scale = atol + np.abs(y0) * rtol
    d0 = _rms(y0, scale)
    d1 = _rms(f0, scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * direction * f0
    if np.any(y1 <= 0.0):
        return h0
    f1 = fun(t0 + h0 * direction, y1)
    d2 = _rms(f1 - f0, scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / ORDER)
    return min(100.0 * h0, h1)


def integrate(
    fun: VectorField,
    t0: float,
    y0: np.ndarray,
    t1: float,
    rtol: float,
    atol: float,
    dense: bool = False,
) -> DenseSolution:
    """
    Integrate ``y' = fun(t, y)`` from ``t0`` to ``t1`` (either direction).

    ``y0`` has shape (B, 2) with positive entries. Raises SolverError on
    step-size underflow, on positivity loss at the minimum step, or when the
    step budget is exhausted.
    """
    y = np.array(y0, dtype=float, ndmin=2)
    if np.any(y <= 0.0):
        raise SolverError(f"initial state must be positive, got {y.tolist()}")
    t = float(t0)
    direction = 1.0 if t1 >= t0 else -1.0
    span = abs(t1 - t0)
    ts, ys, qs = [t], [y], []
    if span == 0.0:
        return DenseSolution(ts, ys, qs)

    f = fun(t, y)
    h_abs = min(_initial_step(fun, t, y, f, direction, rtol, atol), span)
    K = np.empty((_STAGES + 1,) + y.shape)
    rejected_positivity = 0

    for _ in range(MAX_STEPS):
        if direction * (t - t1) >= 0.0:
            break
        min_step = 10.0 * np.spacing(abs(t) + span)
        accepted = False
        while not accepted:
            if h_abs < min_step:
                reason = "positivity loss" if rejected_positivity else "step size underflow"
                raise SolverError(f"{reason} at t = {t:.16g} (step {h_abs:.3e})")
            h = direction * h_abs
            t_new = t + h
            if direction * (t_new - t1) > 0.0:
                t_new = t1
            h = t_new - t
            h_abs = abs(h)

            K[0] = f
            stage_ok = True
            for s in range(1, _STAGES):
                ys_stage = y + h * np.tensordot(_A[s, :s], K[:s], axes=1)
                if np.any(ys_stage <= 0.0):
                    stage_ok = False
                    break
                K[s] = fun(t + _C[s] * h, ys_stage)
            if stage_ok:
                y_new = y + h * np.tensordot(_B, K[:-1], axes=1)
                stage_ok = not np.any(y_new <= 0.0)
            if not stage_ok:
                rejected_positivity += 1
                h_abs *= 0.5
                continue

            f_new = fun(t_new, y_new)
            K[-1] = f_new
            scale = atol + np.maximum(np.abs(y), np.abs(y_new)) * rtol
            error = _rms(h * np.tensordot(_E, K, axes=1), scale)
            if error < 1.0:
                factor = MAX_FACTOR if error == 0.0 else min(
                    MAX_FACTOR, SAFETY * error ** (-1.0 / ORDER)
                )
                accepted = True
            else:
                factor = max(MIN_FACTOR, SAFETY * error ** (-1.0 / ORDER))
            h_abs *= factor

        if dense:
            qs.append(np.tensordot(K, _P, axes=(0, 0)))
        t, y, f = t_new, y_new, f_new
        ts.append(t)
        ys.append(y)
    else:
        raise SolverError(f"step budget of {MAX_STEPS} exhausted at t = {t:.16g}")

    if rejected_positivity:
        logger.debug(f"{rejected_positivity} steps halved to keep stages positive")
    steps = len(ts) - 1
    if not dense:
        ts, ys = [ts[0], ts[-1]], [ys[0], ys[-1]]
    return DenseSolution(ts, ys, qs, steps)
