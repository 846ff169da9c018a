"""
Error types raised across the package.

Every error derives from PeriodicOrbitError so the CLI and the HTTP layer can
translate failures into exit codes and status codes in one place.
"""

from typing import Any


class PeriodicOrbitError(Exception):
    """Base class for all domain errors."""


class ExpressionSyntaxError(PeriodicOrbitError, ValueError):
    """Coefficient text does not conform to the expression grammar."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {pointer}")


class PeriodicityError(PeriodicOrbitError, ValueError):
    """Expression is not periodic with the declared period."""

    def __init__(self, text: str, omega: float, worst_t: float, deviation: float):
        self.text = text
        self.omega = omega
        self.worst_t = worst_t
        self.deviation = deviation
        super().__init__(
            f"'{text}' is not {omega:.16g}-periodic: "
            f"|f(t) - f(t+omega)| = {deviation:.3e} at t = {worst_t:.16g}"
        )


class EvaluationError(PeriodicOrbitError, ArithmeticError):
    """Division by zero or a non-finite value during evaluation."""


class SpecFileError(PeriodicOrbitError, ValueError):
    """System spec file is unreadable or malformed."""


class HypothesisError(PeriodicOrbitError, ValueError):
    """Coefficient set violates the positivity hypotheses of the solvers."""

    def __init__(self, failures: list[str], report: Any = None):
        self.failures = failures
        self.report = report
        super().__init__("hypotheses violated: " + "; ".join(failures))


class KernelError(PeriodicOrbitError, ValueError):
    """Green kernel cannot be formed or evaluated at the given arguments."""


class QuadratureError(PeriodicOrbitError, RuntimeError):
    """Requested quadrature tolerance was not reached."""


class OperatorError(PeriodicOrbitError, ValueError):
    """Operator input is outside its domain (zero or non-positive iterate)."""


class SolverError(PeriodicOrbitError, RuntimeError):
    """Iterative solver or integrator failed."""
