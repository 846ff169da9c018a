import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.integrate import quad

from app.errors import OperatorError, SolverError
from app.models.grid_schemas import Discretization, GridFunction
from app.models.operator_schemas import IterationTrace
from app.models.run_schemas import SolverOptions
from app.services.operator import (
    apply_T,
    apply_T_delay,
    build_context,
    compute_Y,
    damped_picard,
    initial_iterate,
    ode_residual,
    operator_for,
    reconstruct_xy,
    response_term,
)
from app.services.proof_steps import random_cone_element

GOLDEN = 0.5 * (1.0 + math.sqrt(5.0))
SMALL = Discretization(size=128)


def constant_grid(value, size=128):
    return GridFunction(values=np.full(size, value), omega=2.0 * math.pi)


@pytest.fixture(scope="module")
def ctx_s1(ones_s1):
    return build_context(ones_s1, SMALL)


@pytest.fixture(scope="module")
def ctx_s2(ones_s2):
    return build_context(ones_s2, SMALL)


def test_response_term_variants(ones_s1, ones_s2, ones_s3):
    assert response_term(ones_s1, 0.3, 2.0, 4.0) == pytest.approx(0.5)
    assert response_term(ones_s2, 0.3, 2.0, 4.0) == pytest.approx(4.0 / 12.0)
    assert response_term(ones_s3, 0.3, 2.0, 4.0) == pytest.approx(4.0 / 36.0)
    with pytest.raises(OperatorError):
        response_term(ones_s1, 0.3, 1.0, 0.0)


def test_constant_iterate_images(ctx_s1, ctx_s2):
    np.testing.assert_allclose(compute_Y(ctx_s2, constant_grid(3.0)).values, 3.0, atol=1e-12)
    np.testing.assert_allclose(apply_T(ctx_s2, constant_grid(1.0)).values, 1.5, atol=1e-12)
    np.testing.assert_allclose(apply_T(ctx_s1, constant_grid(5.0)).values, 2.0, atol=1e-12)


def test_operator_domain_errors(ctx_s2):
    with pytest.raises(OperatorError, match="zero element"):
        apply_T(ctx_s2, constant_grid(0.0))
    values = np.ones(128)
    values[5] = -0.1
    with pytest.raises(OperatorError, match="nonnegative"):
        apply_T(ctx_s2, constant_grid(1.0).with_values(values))
    with pytest.raises(OperatorError, match="does not match"):
        apply_T(ctx_s2, constant_grid(1.0, size=64))


def test_delayed_operator_on_constants(ctx_s2, ctx_s1):
    X = constant_grid(1.3)
    np.testing.assert_allclose(
        apply_T_delay(ctx_s2, X, 0.4, 0.7).values, apply_T(ctx_s2, X).values, atol=1e-12
    )
    with pytest.raises(OperatorError, match="only supported for S2"):
        apply_T_delay(ctx_s1, X, 0.1, 0.1)
    with pytest.raises(OperatorError):
        apply_T_delay(ctx_s2, X, -0.1, 0.0)


def test_zero_delays_reduce_to_plain_operator(example1):
    ctx = build_context(example1, SMALL)
    X = initial_iterate(ctx)
    np.testing.assert_allclose(
        apply_T_delay(ctx, X, 0.0, 0.0).values, apply_T(ctx, X).values, rtol=0, atol=1e-13
    )
    assert operator_for(ctx)(X).distance(apply_T(ctx, X)) == 0.0


def test_picard_holling_tanner_fixed_point(ctx_s2):
    X, trace = damped_picard(ctx_s2, initial_iterate(ctx_s2), damping=0.5, tol=1e-12)
    assert trace.converged
    assert trace.final_residual <= 1e-12
    np.testing.assert_allclose(X.values, GOLDEN, rtol=0, atol=1e-10)
    x, y = reconstruct_xy(ctx_s2, X)
    np.testing.assert_allclose(x.values, 1.0 / GOLDEN, atol=1e-10)
    np.testing.assert_allclose(y.values, 1.0 / GOLDEN, atol=1e-10)


def test_picard_leslie_gower_equilibrium(ctx_s1):
    X, trace = damped_picard(ctx_s1, initial_iterate(ctx_s1), damping=1.0)
    assert trace.converged
    x, y = reconstruct_xy(ctx_s1, X)
    np.testing.assert_allclose(x.values, 0.5, atol=1e-10)
    np.testing.assert_allclose(y.values, 0.5, atol=1e-10)
    assert ode_residual(ctx_s1, x, y) < 1e-9


def test_picard_rejects_start_outside_domain(ctx_s2):
    with pytest.raises(OperatorError, match="outside the cone domain"):
        damped_picard(ctx_s2, constant_grid(1e-3))
    with pytest.raises(ValueError):
        damped_picard(ctx_s2, initial_iterate(ctx_s2), damping=0.0)


def test_picard_budget_exhausted(ctx_s2):
    _, trace = damped_picard(ctx_s2, initial_iterate(ctx_s2), damping=0.1, tol=1e-14, max_iter=3)
    assert not trace.converged
    assert trace.steps == 3
    assert trace.residuals[0] > trace.residuals[-1]


def test_iteration_trace_validation():
    with pytest.raises(ValidationError):
        IterationTrace(residuals=[1.0, 0.1], damping=0.5, tol=1e-3, converged=True)


@pytest.mark.parametrize("name", ["example1", "example2", "example3"])
def test_operator_fixed_point_solves_system(name, request):
    ctx = build_context(request.getfixturevalue(name))
    X, trace = damped_picard(ctx, initial_iterate(ctx))
    assert trace.converged
    assert ctx.dom.contains(X, atol=1e-9)
    x, y = reconstruct_xy(ctx, X)
    assert x.minimum() > 0.0 and y.minimum() > 0.0
    assert ode_residual(ctx, x, y) < 1e-6


@pytest.mark.slow
def test_delayed_fixed_point_solves_delayed_system(example1):
    delays = (0.1, 0.05)
    ctx = build_context(example1.model_copy(update={"delays": delays}))
    X, trace = damped_picard(ctx, initial_iterate(ctx))
    assert trace.converged
    x, y = reconstruct_xy(ctx, X)
    assert ode_residual(ctx, x, y) < 1e-6
    # the undelayed residual of a delayed orbit is not small
    assert ode_residual(ctx, x, y, delays=(0.0, 0.0)) > 1e-4


def test_divergence_guard(ctx_s2, monkeypatch):
    import app.services.operator as operator

    # an empty admissible band makes the first update count as divergence
    monkeypatch.setattr(operator, "DIVERGENCE_FACTOR", 1e-6)
    with pytest.raises(SolverError, match="diverged at step 1"):
        damped_picard(ctx_s2, initial_iterate(ctx_s2))


def test_delayed_operator_against_nested_quad(example1):
    ctx = build_context(example1)
    tau_x = tau_y = 0.5
    TX = apply_T_delay(ctx, constant_grid(1.0, ctx.size), tau_x, tau_y)
    scale = 1.0 / math.expm1(2.0 * math.pi)
    c = example1

    def A_rho(t):
        return t + (1.0 - math.cos(5.0 * t)) / 5.0

    def A_sigma(t):
        return t - math.sin(7.0 * t) / 7.0

    def Y(u):
        # with X = 1 the lag tau_x drops out of the inner integral
        value, _ = quad(
            lambda th: math.exp(A_sigma(th) - A_sigma(u)) * scale * c.sigma(th) * c.eta(th),
            u, u + 2.0 * math.pi, epsabs=1e-14, epsrel=1e-13, limit=400,
        )
        return value

    def bracket(s):
        return c.rho(s) / c.kappa(s) + c.mu(s) / ((c.alpha(s) + 1.0) * Y(s - tau_y))

    for i in (0, 97, 300):
        t = float(TX.nodes[i])
        expected, _ = quad(
            lambda s, t=t: math.exp(A_rho(s) - A_rho(t)) * scale * bracket(s),
            t, t + 2.0 * math.pi, epsabs=1e-13, epsrel=1e-12, limit=400,
        )
        assert TX.values[i] == pytest.approx(expected, abs=1e-9)


@pytest.mark.slow
def test_picard_on_half_period_delays(example1):
    ctx = build_context(example1.model_copy(update={"delays": (0.5, 0.5)}))
    X, trace = damped_picard(ctx, initial_iterate(ctx), damping=0.5, max_iter=500)
    assert trace.converged
    assert trace.steps <= 500
    x, y = reconstruct_xy(ctx, X)
    assert ode_residual(ctx, x, y) < 1e-6


def test_operator_maps_into_cone(example1):
    ctx = build_context(example1, SMALL)
    dom = ctx.dom
    rng = np.random.default_rng(99)
    for _ in range(100):
        norm = math.exp(rng.uniform(math.log(dom.r), math.log(dom.R)))
        TX = apply_T(ctx, random_cone_element(rng, dom, norm))
        assert TX.minimum() >= dom.gamma * TX.maximum() - 1e-10 * max(1.0, TX.maximum())


def test_operator_converges_under_grid_refinement(example1):
    def X(t):
        return 1.5 + 0.3 * np.sin(t) + 0.1 * np.cos(4.0 * t)

    images = [
        apply_T(build_context(example1, Discretization(size=n)), GridFunction.sample(X, n, 2.0 * math.pi))
        for n in (256, 512)
    ]
    coarse, fine = images
    assert np.max(np.abs(fine.values[::2] - coarse.values)) <= 1e-8


@pytest.mark.slow
@pytest.mark.parametrize("name", ["example1", "example2", "example3"])
def test_shooting_orbit_is_operator_fixed_point(name, request, service):
    summary = service.verify(request.getfixturevalue(name), SolverOptions())
    assert summary.fixed_point_residual < 1e-6
    assert summary.cross_distance < 1e-6
    assert summary.operator.converged
