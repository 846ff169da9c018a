import math

import pytest

from app.errors import SpecFileError
from app.models.base_schemas import SystemVariant
from app.services.coefficients import (
    build_coefficients,
    load_spec,
    loads_spec,
    mean_integral,
    period_mean,
    verify_hypotheses,
)

TWO_PI = 2.0 * math.pi

S1_SPEC = """\
variant = S1
omega = 2*pi
rho = 1+sin(2*t)
kappa = 2+sin(5*t)
mu = 1+cos(3*t)
sigma = 1-cos(t)
eta = 1-sin(t)
"""


def test_example_specs_load(example1, example2, example3):
    assert example1.variant is SystemVariant.S2
    assert example2.variant is SystemVariant.S3
    assert example3.variant is SystemVariant.S1
    assert example1.omega == pytest.approx(TWO_PI, abs=0)
    assert example1.alpha is not None and example1.beta is None
    assert example2.beta is not None
    assert [name for name, _ in example3.items()] == ["rho", "kappa", "mu", "sigma", "eta"]


def test_comments_and_blank_lines():
    text = "# header\n\n" + S1_SPEC.replace("mu = 1+cos(3*t)", "mu = 1+cos(3*t)  # prey uptake")
    assert loads_spec(text).mu.text == "1+cos(3*t)"


@pytest.mark.parametrize(
    ("text", "message"),
    [
        (S1_SPEC + "gamma = 1\n", "unknown key"),
        (S1_SPEC + "rho = 1\n", "duplicate key"),
        (S1_SPEC.replace("eta = 1-sin(t)\n", ""), "missing coefficient"),
        (S1_SPEC + "alpha = 1\n", "not used by S1"),
        (S1_SPEC.replace("S1", "S4"), "variant"),
        (S1_SPEC.replace("omega = 2*pi\n", ""), "omega"),
        (S1_SPEC + "just words\n", "key = value"),
    ],
)
def test_malformed_specs(text, message):
    with pytest.raises(SpecFileError, match=message):
        loads_spec(text)


def test_delays_only_for_holling_tanner():
    with pytest.raises(SpecFileError):
        loads_spec(S1_SPEC + "tau_x = 0.5\n")


def test_delayed_spec(example1):
    from app.config.demos import DEMO_SPECS, DemoId

    coeffs = loads_spec(DEMO_SPECS[DemoId.EXAMPLE1] + "tau_x = 0.5\ntau_y = pi/4\n")
    assert coeffs.delays == pytest.approx((0.5, math.pi / 4))
    assert coeffs.is_delayed
    assert not example1.is_delayed


def test_unreadable_spec_file(tmp_path):
    with pytest.raises(SpecFileError, match="cannot read"):
        load_spec(tmp_path / "missing.txt")


def test_load_spec_file(tmp_path):
    path = tmp_path / "s1.txt"
    path.write_text(S1_SPEC, encoding="utf-8")
    assert load_spec(path).variant is SystemVariant.S1


def test_period_integrals(example1):
    assert mean_integral(example1.rho) == pytest.approx(TWO_PI, abs=1e-12)
    assert mean_integral(example1.kappa) == pytest.approx(2.0 * TWO_PI, abs=1e-12)
    assert period_mean(example1.alpha) == pytest.approx(2.0, abs=1e-12)


def test_hypotheses_hold_for_examples(example1, example2, example3):
    for coeffs in (example1, example2, example3):
        report = verify_hypotheses(coeffs)
        assert report.passed, report.failures()
        assert report.failures() == []


def test_sigma_identically_zero():
    coeffs = loads_spec(S1_SPEC.replace("sigma = 1-cos(t)", "sigma = 0"))
    report = verify_hypotheses(coeffs)
    assert not report.passed
    assert not report.sigma_eta_nonzero
    assert any(f.startswith("sigma is identically zero") for f in report.failures())


def test_sign_changing_alpha():
    coeffs = build_coefficients(
        "S2",
        TWO_PI,
        {"rho": "1", "kappa": "1", "mu": "1", "alpha": "cos(t)", "sigma": "1", "eta": "1"},
    )
    report = verify_hypotheses(coeffs)
    assert not report.passed
    assert not report.product_positive
    assert any(f.startswith("alpha is negative") for f in report.failures())


def test_kappa_with_a_zero():
    coeffs = loads_spec(S1_SPEC.replace("kappa = 2+sin(5*t)", "kappa = sin(t)*sin(t)"))
    report = verify_hypotheses(coeffs)
    assert not report.passed
    assert report.product_minimum == 0.0
    assert any("kappa is not strictly positive" in f for f in report.failures())
