"""
Orbit Service - the command pipeline shared by the CLI and the HTTP API.

This module provides a single entry point for loading systems, checking
hypotheses, computing radii, running both solvers, cross-verifying them and
exporting trajectories.
"""

import logging
from pathlib import Path

import numpy as np

from ..config.demos import DEMO_SPECS, PUBLISHED_DEFECT_BOUNDS, PUBLISHED_INITIAL_VALUES, DemoId
from ..config.settings import Settings, get_settings
from ..errors import HypothesisError, SolverError, SpecFileError
from ..models.coeff_schemas import CoefficientSet, HypothesisReport
from ..models.grid_schemas import Discretization, GridFunction
from ..models.orbit_schemas import OrbitResult, State
from ..models.run_schemas import (
    BoundsSummary,
    ExportSummary,
    OperatorSummary,
    PublishedValues,
    ShootingSummary,
    SolverOptions,
    VerifySummary,
)
from . import coefficients, export, operator, shooting
from .proof_steps import check_proof_steps

logger = logging.getLogger(__name__)


class OperatorSolution:
    """Converged operator fixed point with its reconstruction."""

    def __init__(self, ctx, X, trace, x, y, residual):
        self.ctx = ctx
        self.X = X
        self.trace = trace
        self.x = x
        self.y = y
        self.ode_residual = residual

    def summary(self) -> OperatorSummary:
        return OperatorSummary(
            converged=self.trace.converged,
            steps=self.trace.steps,
            residual=self.trace.final_residual,
            damping=self.trace.damping,
            x0=float(self.x.values[0]),
            y0=float(self.y.values[0]),
            ode_residual=self.ode_residual,
            delays=self.ctx.coeffs.delays,
        )


class OrbitService:
    """
    Main service class for periodic orbit computations.

    This service acts as a unified interface for:
    - System loading from spec files, spec text or built-in demos
    - Hypothesis checks and cone radii
    - Shooting and operator solvers and their cross-verification
    - Trajectory export
    """

    def __init__(self, settings: Settings | None = None):
        self.settings = settings or get_settings()

    # System loading
    def load(
        self,
        spec: str | Path | None = None,
        demo: DemoId | str | None = None,
        spec_text: str | None = None,
    ) -> CoefficientSet:
        """Load a system from exactly one of a spec path, a demo id or spec text."""
        sources = [s is not None for s in (spec, demo, spec_text)]
        if sum(sources) != 1:
            raise SpecFileError("give exactly one of a spec file, a demo id or spec text")
        if spec is not None:
            return coefficients.load_spec(spec)
        if demo is not None:
            try:
                demo = DemoId(demo)
            except ValueError as e:
                raise SpecFileError(
                    f"unknown demo id {demo!r}; expected one of {', '.join(DemoId)}"
                ) from e
            return coefficients.loads_spec(DEMO_SPECS[demo], source=str(demo))
        return coefficients.loads_spec(spec_text, source="<request>")

    def discretization(self, opts: SolverOptions) -> Discretization:
        return Discretization(
            size=opts.grid or self.settings.grid_size,
            panels=self.settings.cumulative_panels,
            order=self.settings.quadrature_order,
        )

    # Hypotheses and bounds
    def check(self, coeffs: CoefficientSet) -> HypothesisReport:
        return coefficients.verify_hypotheses(coeffs)

    def require_hypotheses(self, coeffs: CoefficientSet) -> HypothesisReport:
        report = self.check(coeffs)
        if not report.passed:
            raise HypothesisError(report.failures(), report)
        return report

    def bounds(self, coeffs: CoefficientSet, opts: SolverOptions) -> BoundsSummary:
        self.require_hypotheses(coeffs)
        ctx = operator.build_context(coeffs, self.discretization(opts))
        dom = ctx.dom
        proof = None
        if opts.proof_steps:
            seed = self.settings.seed if opts.seed is None else opts.seed
            proof = check_proof_steps(ctx, opts.proof_steps, seed)
        return BoundsSummary(
            gamma=dom.gamma,
            r=dom.r,
            R=dom.R,
            baseline_max=dom.r_upper,
            R_lower=dom.R_lower,
            denominator_min=dom.denominator_min,
            proof_steps=proof,
        )

    # Shooting
    def solve_shooting(self, coeffs: CoefficientSet, opts: SolverOptions) -> OrbitResult:
        self.require_hypotheses(coeffs)
        if coeffs.is_delayed:
            raise SpecFileError("shooting does not handle delayed systems; use solve-operator")
        s = self.settings
        return shooting.find_periodic(
            coeffs,
            shooting.averaged_seed(coeffs),
            rtol=opts.rtol or s.rtol,
            atol=opts.atol or s.atol,
            newton_tol=s.newton_tol,
            final_rtol=s.final_rtol,
            final_atol=s.final_atol,
        )

    @staticmethod
    def shooting_summary(orbit: OrbitResult, demo: DemoId | str | None = None) -> ShootingSummary:
        published = None
        if demo is not None:
            demo = DemoId(demo)
            x0, y0 = PUBLISHED_INITIAL_VALUES[demo]
            published = PublishedValues(x0=x0, y0=y0, defect_bound=PUBLISHED_DEFECT_BOUNDS[demo])
        return ShootingSummary(
            x0=orbit.initial.x,
            y0=orbit.initial.y,
            defect=orbit.defect,
            newton_steps=orbit.newton_steps,
            integrator_tolerance=orbit.integrator_tolerance,
            published=published,
        )

    # Operator
    def solve_operator(self, coeffs: CoefficientSet, opts: SolverOptions) -> OperatorSolution:
        self.require_hypotheses(coeffs)
        s = self.settings
        ctx = operator.build_context(coeffs, self.discretization(opts), strict=False)
        X, trace = operator.damped_picard(
            ctx,
            operator.initial_iterate(ctx),
            damping=opts.damping or s.damping,
            tol=opts.operator_tol or s.operator_tol,
            max_iter=s.max_iter,
        )
        if not trace.converged:
            raise SolverError(
                f"Picard iteration did not reach {trace.tol:.1e} in {trace.steps} steps "
                f"(residual {trace.final_residual:.3e})"
            )
        x, y = operator.reconstruct_xy(ctx, X)
        return OperatorSolution(ctx, X, trace, x, y, operator.ode_residual(ctx, x, y))

    # Cross-verification
    def orbit_on_grid(
        self, coeffs: CoefficientSet, initial: State, nodes: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        s = self.settings
        sol = shooting.integrate(coeffs, initial, 0.0, coeffs.omega, s.final_rtol, s.final_atol)
        traj = shooting.sample(sol, nodes)
        return traj.x, traj.y

    def verify(self, coeffs: CoefficientSet, opts: SolverOptions) -> VerifySummary:
        orbit = self.solve_shooting(coeffs, opts)
        solution = self.solve_operator(coeffs, opts)
        ctx = solution.ctx
        x_sh, y_sh = self.orbit_on_grid(coeffs, orbit.initial, solution.x.nodes)
        X_sh = GridFunction(values=1.0 / x_sh, omega=coeffs.omega)
        fixed_point_residual = X_sh.distance(operator.apply_T(ctx, X_sh))
        cross = max(
            float(np.max(np.abs(solution.x.values - x_sh))),
            float(np.max(np.abs(solution.y.values - y_sh))),
        )
        logger.info(
            f"Cross-path distance {cross:.3e}, shooting fixed-point residual "
            f"{fixed_point_residual:.3e}"
        )
        orbit = orbit.model_copy(update={"operator_residual": fixed_point_residual})
        return VerifySummary(
            shooting=self.shooting_summary(orbit),
            operator=solution.summary(),
            cross_distance=cross,
            fixed_point_residual=fixed_point_residual,
            ode_residual=solution.ode_residual,
        )

    # Export
    def export(
        self,
        coeffs: CoefficientSet,
        opts: SolverOptions,
        out_dir: str | Path | None = None,
        orbit: OrbitResult | None = None,
        title: str = "",
    ) -> ExportSummary:
        """Integrate the periodic orbit over the export horizon and write CSV plus plot script."""
        s = self.settings
        orbit = orbit or self.solve_shooting(coeffs, opts)
        sol = shooting.integrate(coeffs, orbit.initial, 0.0, s.export_horizon, s.final_rtol, s.final_atol)
        times = np.linspace(0.0, s.export_horizon, s.export_samples)
        csv_path, plot_path = export.write_trajectory(
            shooting.sample(sol, times), out_dir or s.output_dir, title
        )
        return ExportSummary(
            csv_path=str(csv_path),
            plot_path=str(plot_path),
            samples=s.export_samples,
            horizon=s.export_horizon,
        )


def get_orbit_service() -> OrbitService:
    """Dependency provider for the HTTP routes."""
    return OrbitService()
