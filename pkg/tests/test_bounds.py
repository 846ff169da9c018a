import math

import numpy as np
import pytest

from app.errors import KernelError
from app.models.grid_schemas import Discretization
from app.services.bounds import (
    R_lower,
    baseline,
    choose_radii,
    denominator,
    denominator_min,
    r_upper,
    response_weight,
    shell_map,
)
from app.services.coefficients import build_coefficients
from app.services.operator import build_context
from app.services.proof_steps import check_proof_steps, random_cone_element

GAMMA_ONES = math.exp(-2.0 * math.pi)
SMALL = Discretization(size=128)


def fast_prey(rho):
    constants = {"kappa": "1", "mu": "1", "alpha": "1", "sigma": "1", "eta": "1"}
    return build_coefficients("S2", 2.0 * math.pi, {**constants, "rho": str(rho)})


def test_constant_system_baseline_and_denominator(ones_s1):
    np.testing.assert_allclose(baseline(ones_s1, SMALL).values, 1.0, rtol=0, atol=1e-13)
    np.testing.assert_allclose(denominator(ones_s1, SMALL).values, 1.0, rtol=0, atol=1e-13)
    assert r_upper(ones_s1, SMALL) == pytest.approx(1.0, abs=1e-13)
    assert denominator_min(ones_s1, SMALL) == pytest.approx(1.0, abs=1e-13)


def test_outer_threshold_leslie_gower(ones_s1):
    assert R_lower(ones_s1, GAMMA_ONES, SMALL) == pytest.approx(1.0 + math.exp(2.0 * math.pi), rel=1e-11)


def test_outer_threshold_holling_tanner(ones_s2):
    assert R_lower(ones_s2, GAMMA_ONES, SMALL) == pytest.approx(1.0 + math.exp(4.0 * math.pi), rel=1e-11)


def test_outer_threshold_type3_is_fixed_point(ones_s3):
    # R = 1 + e^{6 pi} / R
    v = math.exp(6.0 * math.pi)
    expected = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * v))
    root = R_lower(ones_s3, GAMMA_ONES, SMALL)
    assert root == pytest.approx(expected, rel=1e-9)
    b = baseline(ones_s3, SMALL)
    w = response_weight(ones_s3, GAMMA_ONES, SMALL)
    assert shell_map(b, w, root) == pytest.approx(root, rel=1e-9)
    assert shell_map(b, w, 2.0 * root) < shell_map(b, w, root)


def test_outer_threshold_rejects_bad_gamma(ones_s1):
    with pytest.raises(ValueError):
        R_lower(ones_s1, 1.0, SMALL)


def test_choose_radii_constant_system(ones_s2):
    dom = choose_radii(ones_s2, SMALL)
    assert dom.gamma == pytest.approx(GAMMA_ONES, rel=1e-13)
    assert dom.r == pytest.approx(0.5, abs=1e-13)
    assert dom.R == pytest.approx(2.0 * (1.0 + math.exp(4.0 * math.pi)), rel=1e-11)
    assert dom.r < dom.r_upper < dom.R_lower < dom.R


@pytest.mark.parametrize("name", ["example1", "example2", "example3"])
def test_choose_radii_examples(name, request):
    coeffs = request.getfixturevalue(name)
    dom = choose_radii(coeffs)
    assert 0.0 < dom.gamma < 1.0
    assert dom.gamma == pytest.approx(math.exp(-2.0 * math.pi), rel=1e-12)
    assert 0.0 < dom.r < dom.r_upper < dom.R
    assert dom.denominator_min > 0.0
    assert dom.baseline.in_cone(dom.gamma)


def test_random_cone_elements(example1):
    dom = choose_radii(example1, SMALL)
    rng = np.random.default_rng(7)
    for norm in (dom.r, dom.R):
        X = random_cone_element(rng, dom, norm)
        assert X.sup_norm() == pytest.approx(norm, rel=1e-14)
        assert X.in_cone(dom.gamma)


@pytest.mark.parametrize("name", ["example1", "example2", "example3", "ones_s3"])
def test_proof_steps_hold(name, request):
    ctx = build_context(request.getfixturevalue(name), SMALL)
    report = check_proof_steps(ctx, trials=5, seed=11)
    assert report.passed
    assert report.inner_margin > -1e-12
    assert report.outer_margin > 0.0
    assert report.trials == 5


def test_proof_steps_are_reproducible(example3):
    ctx = build_context(example3, SMALL)
    assert check_proof_steps(ctx, 3, 5) == check_proof_steps(ctx, 3, 5)


@pytest.mark.parametrize("rho", [60, 120])
def test_unrepresentable_outer_radius(rho):
    coeffs = fast_prey(rho)
    with pytest.raises(KernelError, match="not representable"):
        choose_radii(coeffs, SMALL)
    dom = choose_radii(coeffs, SMALL, strict=False)
    assert not dom.bounded
    assert math.isinf(dom.R)
    assert dom.r == pytest.approx(0.5, rel=1e-8)
    with pytest.raises(KernelError):
        check_proof_steps(build_context(coeffs, SMALL, strict=False), trials=1, seed=1)


def test_response_weight_from_log_gamma(ones_s2):
    # gamma = exp(-800) underflows but gamma^-2 does not fit either
    with pytest.raises(KernelError):
        response_weight(ones_s2, 0.0, SMALL, log_gamma=-800.0)
    w = response_weight(ones_s2, GAMMA_ONES, SMALL, log_gamma=-2.0 * math.pi)
    np.testing.assert_allclose(w.values, math.exp(4.0 * math.pi), rtol=1e-12)


def test_type3_outer_threshold_residual(example2):
    dom = choose_radii(example2)
    b = baseline(example2)
    v = response_weight(example2, dom.gamma)
    assert abs(dom.R_lower - shell_map(b, v, dom.R_lower)) < 1e-8
    assert dom.R == 2.0 * dom.R_lower


@pytest.mark.slow
@pytest.mark.parametrize("name", ["example1", "example2", "example3"])
def test_proof_steps_hold_on_default_grid(name, request):
    ctx = build_context(request.getfixturevalue(name))
    report = check_proof_steps(ctx, trials=100, seed=20240611)
    assert report.passed
    assert report.trials == 100
    assert report.cone_margin > -1e-10
