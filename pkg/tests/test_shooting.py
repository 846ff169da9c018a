import math

import numpy as np
import pytest

from app.config.demos import PUBLISHED_DEFECT_BOUNDS, PUBLISHED_INITIAL_VALUES, DemoId
from app.errors import SolverError
from app.models.orbit_schemas import State
from app.services import dopri
from app.services.shooting import (
    averaged_seed,
    find_periodic,
    integrate,
    period_map,
    poincare_defect,
    response,
    rhs,
    sample,
)

INV_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


def decay(t, u):
    rates = np.array([1.0, 0.5])
    return -u * rates


def test_dopri_matches_exponential_decay():
    sol = dopri.integrate(decay, 0.0, np.array([[1.0, 2.0], [3.0, 1.0]]), 2.0, 1e-10, 1e-12, dense=True)
    expected = np.array([[math.exp(-2.0), 2.0 * math.exp(-1.0)], [3.0 * math.exp(-2.0), math.exp(-1.0)]])
    np.testing.assert_allclose(sol.y_final, expected, rtol=1e-9)
    mid = sol(np.array([0.37, 1.5]))
    assert mid.shape == (2, 2, 2)
    np.testing.assert_allclose(mid[1, 0], [math.exp(-1.5), 2.0 * math.exp(-0.75)], rtol=1e-8)


def test_dopri_backward_integration():
    sol = dopri.integrate(decay, 2.0, np.array([[1.0, 1.0]]), 0.0, 1e-10, 1e-12, dense=True)
    np.testing.assert_allclose(sol.y_final[0], [math.exp(2.0), math.exp(1.0)], rtol=1e-9)
    np.testing.assert_allclose(sol(1.0)[0, 0], [math.e, math.exp(0.5)], rtol=1e-8)


def test_dopri_rejects_nonpositive_state():
    with pytest.raises(SolverError, match="positive"):
        dopri.integrate(decay, 0.0, np.array([[1.0, 0.0]]), 1.0, 1e-8, 1e-10)


def test_dopri_sparse_output_keeps_endpoints():
    sol = dopri.integrate(decay, 0.0, np.array([[1.0, 1.0]]), 1.0, 1e-8, 1e-10)
    assert sol.ts.tolist() == [0.0, 1.0]
    assert sol.steps > 1


def test_dopri_without_dense_output():
    sparse = dopri.integrate(decay, 0.0, np.array([[1.0, 1.0]]), 1.0, 1e-8, 1e-10)
    empty = dopri.integrate(decay, 0.5, np.array([[1.0, 1.0]]), 0.5, 1e-8, 1e-10, dense=True)
    for sol in (sparse, empty):
        with pytest.raises(SolverError, match="no dense output"):
            sol(0.5)
    np.testing.assert_allclose(empty.y_final, [[1.0, 1.0]])


def test_response_shapes():
    assert response("S1", 2.0, 3.0) == 6.0
    assert response("S2", 2.0, 3.0, alpha=1.0) == pytest.approx(2.0)
    assert response("S3", 2.0, 3.0, alpha=1.0, beta=2.0) == pytest.approx(1.0)


def test_equilibria_of_constant_systems(ones_s1, ones_s2):
    assert rhs(ones_s1, 0.4, State(x=0.5, y=0.5)) == pytest.approx((0.0, 0.0), abs=1e-16)
    assert rhs(ones_s2, 1.3, (INV_GOLDEN, INV_GOLDEN)) == pytest.approx((0.0, 0.0), abs=1e-15)
    with pytest.raises(SolverError):
        rhs(ones_s1, 0.0, (0.0, 1.0))


def test_averaged_seed_of_constant_systems(ones_s1, ones_s2):
    seed = averaged_seed(ones_s1)
    assert (seed.x, seed.y) == pytest.approx((0.5, 0.5), abs=1e-14)
    seed = averaged_seed(ones_s2)
    assert (seed.x, seed.y) == pytest.approx((INV_GOLDEN, INV_GOLDEN), abs=1e-14)


def test_period_map_batches_share_steps(ones_s2):
    u = np.array([[0.7, 0.5], [0.6, 0.6]])
    together = period_map(ones_s2, u, 1e-10, 1e-12)
    alone = period_map(ones_s2, u[1:], 1e-10, 1e-12)
    np.testing.assert_allclose(together[1], alone[0], rtol=1e-8)


def test_newton_finds_constant_orbit(ones_s2):
    orbit = find_periodic(ones_s2, State(x=0.7, y=0.5))
    assert (orbit.initial.x, orbit.initial.y) == pytest.approx((INV_GOLDEN, INV_GOLDEN), abs=1e-10)
    assert orbit.defect < 1e-11
    assert orbit.trajectory.t.size == 512
    np.testing.assert_allclose(orbit.trajectory.x, INV_GOLDEN, atol=1e-9)


def test_delayed_system_is_not_shot(example1):
    delayed = example1.model_copy(update={"delays": (0.2, 0.0)})
    with pytest.raises(SolverError, match="delayed"):
        find_periodic(delayed, State(x=1.0, y=1.0))


def test_time_reversal(example3):
    s0 = State(x=0.65, y=0.38)
    forward = integrate(example3, s0, 0.0, example3.omega, 1e-12, 1e-14)
    end = State.from_array(forward.y_final[0])
    back = integrate(example3, end, example3.omega, 0.0, 1e-12, 1e-14)
    np.testing.assert_allclose(back.y_final[0], s0.as_array(), rtol=0, atol=1e-9)
    traj = sample(forward, np.linspace(0.0, example3.omega, 9))
    assert traj.x[0] == pytest.approx(0.65, abs=1e-15)


@pytest.mark.slow
@pytest.mark.parametrize(
    ("name", "demo"),
    [("example1", DemoId.EXAMPLE1), ("example2", DemoId.EXAMPLE2), ("example3", DemoId.EXAMPLE3)],
)
def test_published_periodic_solutions(name, demo, request):
    coeffs = request.getfixturevalue(name)
    orbit = find_periodic(coeffs, averaged_seed(coeffs))
    x0, y0 = PUBLISHED_INITIAL_VALUES[demo]
    assert orbit.initial.x == pytest.approx(x0, abs=1e-6)
    assert orbit.initial.y == pytest.approx(y0, abs=1e-6)
    assert orbit.defect < PUBLISHED_DEFECT_BOUNDS[demo]
    assert orbit.defect < 1e-10
    assert poincare_defect(coeffs, orbit.initial, 1e-13, 1e-15) < 1e-10
    assert np.all(orbit.trajectory.x > 0.0) and np.all(orbit.trajectory.y > 0.0)


def test_newton_from_offset_seed(ones_s1):
    orbit = find_periodic(ones_s1, State(x=0.4, y=0.6))
    assert (orbit.initial.x, orbit.initial.y) == pytest.approx((0.5, 0.5), abs=1e-10)
    assert orbit.defect <= 1e-12


def test_two_periods_compose(example3):
    u = np.array([[0.65, 0.38], [0.5, 0.45]])
    twice = period_map(example3, period_map(example3, u, 1e-12, 1e-14), 1e-12, 1e-14)
    np.testing.assert_allclose(period_map(example3, u, 1e-12, 1e-14, periods=2), twice, rtol=1e-8)


def test_defect_shrinks_with_tolerance(example3):
    x0, y0 = PUBLISHED_INITIAL_VALUES[DemoId.EXAMPLE3]
    s0 = State(x=x0, y=y0)
    assert poincare_defect(example3, s0, 1e-13, 1e-15) <= poincare_defect(example3, s0, 1e-10, 1e-12)
