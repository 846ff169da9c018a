"""
Coefficient service - system spec files, period integrals and hypothesis checks.

A system spec file is line-oriented text::

    # Holling-Tanner system
    variant = S2
    omega = 2*pi
    rho = 1+sin(5*t)
    ...
    tau_x = 0.5

``#`` starts a comment; unknown or repeated keys are errors.
"""

import logging
import math
from pathlib import Path

import numpy as np

from ..errors import PeriodicOrbitError, SpecFileError
from ..models.base_schemas import SystemVariant
from ..models.coeff_schemas import (
    COEFFICIENT_NAMES,
    PRODUCT_FACTORS,
    CoefficientCheck,
    CoefficientSet,
    HypothesisReport,
)
from ..models.expression import PeriodicExpr
from . import quadrature
from .parser import parse, parse_constant

logger = logging.getLogger(__name__)

HYPOTHESIS_GRID = 4096
ZERO_INTEGRAL = 1e-9
MEAN_INTEGRAL_TOL = 1e-12
_BASE_PANELS = 64

_ALL_COEFFICIENTS = ("rho", "kappa", "mu", "alpha", "beta", "sigma", "eta")
_KNOWN_KEYS = {"variant", "omega", "tau_x", "tau_y", *_ALL_COEFFICIENTS}


def period_integral(f, omega: float, tol: float = MEAN_INTEGRAL_TOL) -> float:
    """Integral of a vectorized omega-periodic callable over [0, omega]."""
    breaks = np.linspace(0.0, omega, _BASE_PANELS + 1)
    return quadrature.adaptive(f, breaks, tol)


def mean_integral(expr: PeriodicExpr) -> float:
    """Integral of a coefficient over one period, to absolute accuracy 1e-12."""
    return period_integral(expr, expr.omega)


def period_mean(expr: PeriodicExpr) -> float:
    return mean_integral(expr) / expr.omega


def build_coefficients(
    variant: SystemVariant | str,
    omega: float,
    texts: dict[str, str],
    delays: tuple[float, float] | None = None,
) -> CoefficientSet:
    """Parse coefficient texts with a shared period and assemble the set."""
    variant = SystemVariant(variant)
    exprs = {name: parse(text, omega) for name, text in texts.items()}
    return CoefficientSet(variant=variant, omega=omega, delays=delays, **exprs)


def loads_spec(text: str, source: str = "<spec>") -> CoefficientSet:
    """Parse system spec text into a coefficient set."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not sep or not key or not value:
            raise SpecFileError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        if key not in _KNOWN_KEYS:
            raise SpecFileError(f"{source}:{lineno}: unknown key {key!r}")
        if key in entries:
            raise SpecFileError(f"{source}:{lineno}: duplicate key {key!r}")
        entries[key] = value

    for required in ("variant", "omega"):
        if required not in entries:
            raise SpecFileError(f"{source}: missing required key {required!r}")
    try:
        variant = SystemVariant(entries.pop("variant").upper())
    except ValueError as e:
        raise SpecFileError(f"{source}: variant must be one of S1, S2, S3") from e

    try:
        omega = parse_constant(entries.pop("omega"))
        delays = None
        if "tau_x" in entries or "tau_y" in entries:
            delays = (
                parse_constant(entries.pop("tau_x", "0")),
                parse_constant(entries.pop("tau_y", "0")),
            )
        missing = [n for n in COEFFICIENT_NAMES[variant] if n not in entries]
        if missing:
            raise SpecFileError(
                f"{source}: missing coefficient(s) {', '.join(missing)} for {variant}"
            )
        extra = [n for n in entries if n not in COEFFICIENT_NAMES[variant]]
        if extra:
            raise SpecFileError(
                f"{source}: coefficient(s) {', '.join(extra)} not used by {variant}"
            )
        coeffs = build_coefficients(variant, omega, entries, delays)
    except PeriodicOrbitError:
        raise
    except ValueError as e:
        raise SpecFileError(f"{source}: {e}") from e

    logger.info(f"Loaded {variant} system from {source} (omega = {omega:.16g})")
    return coeffs


def load_spec(path: str | Path) -> CoefficientSet:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SpecFileError(f"cannot read spec file {path}: {e}") from e
    return loads_spec(text, source=str(path))


def _grid_minimum(values: np.ndarray, t: np.ndarray) -> tuple[float, float]:
    worst = int(np.argmin(values))
    return float(values[worst]), float(t[worst])


def verify_hypotheses(
    coeffs: CoefficientSet, grid: int = HYPOTHESIS_GRID
) -> HypothesisReport:
    """
    Check nonnegativity, non-vanishing, the product condition and sigma*eta.

    Failures are reported, never raised.
    """
    t = np.arange(grid) * (coeffs.omega / grid)
    checks: list[CoefficientCheck] = []
    samples: dict[str, np.ndarray] = {}
    for name, expr in coeffs.items():
        values = expr(t)
        samples[name] = values
        minimum, worst_t = _grid_minimum(values, t)
        integral = mean_integral(expr)
        checks.append(
            CoefficientCheck(
                name=name,
                nonnegative=minimum >= 0.0,
                not_identically_zero=integral > ZERO_INTEGRAL,
                minimum=minimum,
                worst_t=worst_t,
                integral=integral,
            )
        )

    factors = PRODUCT_FACTORS[coeffs.variant]
    product = math.prod((samples[f] for f in factors), start=np.ones_like(t))
    product_min, product_t = _grid_minimum(product, t)
    sigma_eta = period_integral(lambda s: coeffs.sigma(s) * coeffs.eta(s), coeffs.omega)

    report = HypothesisReport(
        variant=coeffs.variant,
        coefficients=checks,
        product_name="*".join(factors),
        product_minimum=product_min,
        product_worst_t=product_t,
        sigma_eta_integral=sigma_eta,
        zero_threshold=ZERO_INTEGRAL,
    )
    if report.passed:
        logger.info(f"Hypotheses hold for {coeffs.variant} system")
    else:
        logger.warning(f"Hypotheses violated: {'; '.join(report.failures())}")
    return report
