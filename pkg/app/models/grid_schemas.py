"""
Grid function schema - omega-periodic functions sampled on a uniform grid.

Off-grid values come from trigonometric interpolation of the samples. For an
even number of samples the Nyquist mode is split symmetrically, which keeps the
interpolant real; shifting and node sampling use the same convention through
``numpy.fft.irfft``.
"""

from functools import cached_property
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

MIN_GRID_SIZE = 64


class GridFunction(BaseModel):
    """
    Samples ``values[j] = f(j * omega / N)`` of an omega-periodic function.

    Attributes:
        values: N finite samples, N a power of two and at least 64
        omega: Period
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray = Field(..., description="Samples at t_j = j*omega/N")
    omega: float = Field(..., description="Period", gt=0)

    @field_validator("values", mode="before")
    @classmethod
    def _check_values(cls, v):
        arr = np.array(v, dtype=float).reshape(-1)
        n = arr.size
        if n < MIN_GRID_SIZE or n & (n - 1):
            raise ValueError(f"grid size must be a power of two >= {MIN_GRID_SIZE}, got {n}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("grid function values must be finite")
        arr.setflags(write=False)
        return arr

    @classmethod
    def sample(
        cls, f: Callable[[np.ndarray], np.ndarray], size: int, omega: float
    ) -> "GridFunction":
        return cls(values=f(grid_nodes(size, omega)), omega=omega)

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def step(self) -> float:
        return self.omega / self.size

    @property
    def nodes(self) -> np.ndarray:
        return grid_nodes(self.size, self.omega)

    @cached_property
    def spectrum(self) -> np.ndarray:
        return np.fft.rfft(self.values)

    def _wavenumbers(self) -> np.ndarray:
        return np.arange(self.size // 2 + 1) * (2.0 * np.pi / self.omega)

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(values=values, omega=self.omega)

    def __call__(self, t):
        """Trigonometric interpolant at arbitrary times (scalar or array)."""
        t_arr = np.asarray(t, dtype=float)
        flat = t_arr.reshape(-1)
        n = self.size
        coeffs = self.spectrum.copy()
        coeffs[1 : n // 2] *= 2.0
        phase = np.exp(1j * np.outer(flat, self._wavenumbers()))
        out = (phase @ coeffs).real / n
        if t_arr.ndim == 0:
            return float(out[0])
        return out.reshape(t_arr.shape)

    def panel_samples(self, offsets: np.ndarray) -> np.ndarray:
        """Values at ``t_j + offsets[q]``, shaped (N, len(offsets))."""
        offsets = np.asarray(offsets, dtype=float)
        phases = np.exp(1j * np.outer(offsets, self._wavenumbers()))
        shifted = np.fft.irfft(self.spectrum[None, :] * phases, n=self.size, axis=-1)
        return shifted.T

    def shifted(self, delta: float) -> "GridFunction":
        """The function ``t -> f(t + delta)``, reduced modulo the period."""
        delta = float(np.fmod(delta, self.omega))
        if delta == 0.0:
            return self
        return self.with_values(self.panel_samples(np.array([delta]))[:, 0])

    def derivative(self) -> "GridFunction":
        """Spectral derivative with the Nyquist mode dropped."""
        coeffs = self.spectrum * (1j * self._wavenumbers())
        coeffs[-1] = 0.0
        return self.with_values(np.fft.irfft(coeffs, n=self.size))

    def reciprocal(self) -> "GridFunction":
        return self.with_values(1.0 / self.values)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def minimum(self) -> float:
        return float(np.min(self.values))

    def maximum(self) -> float:
        return float(np.max(self.values))

    def distance(self, other: "GridFunction") -> float:
        """Sup-norm distance on the grid nodes."""
        return float(np.max(np.abs(self.values - other.values)))

    def in_cone(self, gamma: float, atol: float = 0.0) -> bool:
        """Membership in the min-max cone: min f >= gamma * max f."""
        low = self.minimum()
        return low >= -atol and low >= gamma * self.maximum() - atol


class Discretization(BaseModel):
    """
    Grid and quadrature resolution shared by the kernel-based computations.

    Attributes:
        size: Nodes N of operator iterates
        panels: Panels M of the cumulative antiderivative
        order: Gauss-Legendre order per panel
    """

    model_config = ConfigDict(frozen=True)

    size: int = Field(512, ge=MIN_GRID_SIZE)
    panels: int = Field(256, ge=1)
    order: int = Field(8, ge=1, le=64)

    @field_validator("size")
    @classmethod
    def _power_of_two(cls, v: int) -> int:
        if v & (v - 1):
            raise ValueError(f"grid size must be a power of two, got {v}")
        return v


def grid_nodes(size: int, omega: float) -> np.ndarray:
    return np.arange(size) * (omega / size)
