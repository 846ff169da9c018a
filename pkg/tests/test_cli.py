from pathlib import Path

import pandas as pd
import pytest

import app
from app.cli import EXIT_FAILURE, EXIT_HYPOTHESIS, EXIT_OK, emit, main, parse_config
from app.config.demos import PUBLISHED_INITIAL_VALUES, DemoId
from app.config.settings import Settings
from app.models.run_schemas import BoundsSummary, Command

SIGMA_ZERO = """\
variant = S1
omega = 2*pi
rho = 1+sin(2*t)
kappa = 2+sin(5*t)
mu = 1+cos(3*t)
sigma = 0
eta = 1-sin(t)
"""

FAST_PREY = """\
variant = S2
omega = 2*pi
rho = {rho}
kappa = 1
mu = 1
alpha = 1
sigma = 1
eta = 1
"""


def output_values(text):
    rows = [line.split(" = ", 1) for line in text.strip().splitlines()]
    return dict(rows)


def test_parse_config_positional_demo():
    config, level = parse_config(["verify", "example3", "--grid", "256", "--op-tol", "1e-9"])
    assert config.command is Command.VERIFY
    assert config.demo is DemoId.EXAMPLE3
    assert config.grid == 256
    assert config.operator_tol == 1e-9
    assert level is None


def test_parse_config_rejects_two_sources(tmp_path):
    with pytest.raises(ValueError):
        parse_config(["check", "--demo", "example1", "--spec", str(tmp_path / "a.txt")])
    with pytest.raises(ValueError):
        parse_config(["check", "example1", "--demo", "example2"])


def test_unknown_command_exits_with_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["solve", "example1"])
    assert info.value.code == 2


def test_emit_uses_sixteen_digits(capsys):
    emit(BoundsSummary(gamma=1.0 / 3.0, r=0.5, R=2.0, baseline_max=1.0, R_lower=1.0, denominator_min=1.0))
    values = output_values(capsys.readouterr().out)
    assert values["gamma"] == "0.3333333333333333"
    assert "proof_steps" not in values


def test_check_passes(capsys):
    assert main(["check", "example1"]) == EXIT_OK
    values = output_values(capsys.readouterr().out)
    assert values["passed"] == "True"
    assert values["coefficients[alpha].nonnegative"] == "True"


def test_check_reports_violated_hypothesis(tmp_path, capsys):
    spec = tmp_path / "sigma_zero.txt"
    spec.write_text(SIGMA_ZERO, encoding="utf-8")
    assert main(["check", "--spec", str(spec)]) == EXIT_HYPOTHESIS
    captured = capsys.readouterr()
    assert output_values(captured.out)["passed"] == "False"
    assert "sigma is identically zero" in captured.err


def test_solver_commands_gate_on_hypotheses(tmp_path):
    spec = tmp_path / "sigma_zero.txt"
    spec.write_text(SIGMA_ZERO, encoding="utf-8")
    assert main(["solve-operator", "--spec", str(spec)]) == EXIT_HYPOTHESIS


def test_input_errors(tmp_path, capsys):
    assert main(["check", "--spec", str(tmp_path / "missing.txt")]) == EXIT_FAILURE
    bad = tmp_path / "bad.txt"
    bad.write_text(SIGMA_ZERO.replace("sigma = 0", "sigma = 1+"), encoding="utf-8")
    assert main(["check", "--spec", str(bad)]) == EXIT_FAILURE
    assert main(["bounds", "example1", "--grid", "300"]) == EXIT_FAILURE
    assert "error" in capsys.readouterr().err


def test_bounds(capsys):
    assert main(["bounds", "example3", "--proof-steps", "3", "--seed", "1"]) == EXIT_OK
    values = output_values(capsys.readouterr().out)
    assert 0.0 < float(values["r"]) < float(values["baseline_max"]) < float(values["R"])
    assert values["proof_steps.passed"] == "True"


def test_solve_operator(capsys):
    assert main(["solve-operator", "example3"]) == EXIT_OK
    values = output_values(capsys.readouterr().out)
    assert values["converged"] == "True"
    assert float(values["ode_residual"]) < 1e-6


@pytest.mark.slow
def test_demo_writes_artifacts(tmp_path, capsys):
    out = tmp_path / "example1"
    assert main(["demo", "example1", "--out", str(out)]) == EXIT_OK
    values = output_values(capsys.readouterr().out)
    x0, y0 = PUBLISHED_INITIAL_VALUES[DemoId.EXAMPLE1]
    assert float(values["x0"]) == pytest.approx(x0, abs=1e-6)
    assert float(values["y0"]) == pytest.approx(y0, abs=1e-6)
    assert float(values["defect"]) < 1e-10
    assert float(values["published.x0"]) == x0

    frame = pd.read_csv(out / "trajectory.csv")
    assert list(frame.columns) == ["t", "x", "y"]
    assert len(frame) == 2048
    assert frame["t"].iloc[-1] == pytest.approx(10.0 * 3.141592653589793)
    assert frame["t"].is_monotonic_increasing
    assert (frame[["x", "y"]] > 0).all().all()
    assert (out / "plot_trajectory.py").exists()


@pytest.mark.slow
def test_verify_agreement(capsys):
    assert main(["verify", "example3"]) == EXIT_OK
    values = output_values(capsys.readouterr().out)
    assert float(values["cross_distance"]) < 1e-6
    assert float(values["fixed_point_residual"]) < 1e-6
    assert float(values["ode_residual"]) < 1e-6


@pytest.mark.parametrize("rho", [60, 120])
def test_bounds_reports_unrepresentable_radius(tmp_path, capsys, rho):
    spec = tmp_path / "fast_prey.txt"
    spec.write_text(FAST_PREY.format(rho=rho), encoding="utf-8")
    assert main(["bounds", "--spec", str(spec)]) == EXIT_FAILURE
    assert "not representable" in capsys.readouterr().err


@pytest.mark.parametrize("rho", [60, 120])
def test_solve_operator_fast_prey(tmp_path, capsys, rho):
    spec = tmp_path / "fast_prey.txt"
    spec.write_text(FAST_PREY.format(rho=rho), encoding="utf-8")
    assert main(["solve-operator", "--spec", str(spec), "--grid", "256"]) == EXIT_OK
    values = output_values(capsys.readouterr().out)
    assert values["converged"] == "True"
    # y = x and rho (1 - x) = x / (1 + x)
    equilibrium = ((1.0 + 4.0 * rho * rho) ** 0.5 - 1.0) / (2.0 * rho)
    assert float(values["x0"]) == pytest.approx(equilibrium, rel=1e-7)
    assert float(values["y0"]) == pytest.approx(equilibrium, rel=1e-7)


def test_every_setting_is_read():
    package = Path(app.__file__).parent
    sources = "\n".join(
        path.read_text(encoding="utf-8") for path in package.rglob("*.py") if path.name != "settings.py"
    )
    unread = [name for name in Settings.model_fields if f".{name}" not in sources]
    assert unread == []
