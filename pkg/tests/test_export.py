import numpy as np
import pandas as pd
import pytest

from app.errors import SolverError
from app.models.orbit_schemas import Trajectory
from app.services.export import CSV_NAME, trajectory_frame, write_trajectory


def make_trajectory(t, x=None, y=None):
    x = np.full(t.size, 0.5) if x is None else x
    y = np.full(t.size, 0.25) if y is None else y
    return Trajectory(t=t, x=x, y=y)


def test_write_trajectory(tmp_path):
    t = np.linspace(0.0, 10.0 * np.pi, 64)
    traj = make_trajectory(t, x=1.0 + 0.5 * np.sin(t))
    csv_path, plot_path = write_trajectory(traj, tmp_path / "out", title="S2 periodic solution")

    frame = pd.read_csv(csv_path)
    assert list(frame.columns) == ["t", "x", "y"]
    assert len(frame) == 64
    np.testing.assert_array_equal(frame["t"].to_numpy(), t)
    np.testing.assert_array_equal(frame["x"].to_numpy(), traj.x)

    script = plot_path.read_text(encoding="utf-8")
    assert CSV_NAME in script
    assert "S2 periodic solution" in script


@pytest.mark.parametrize(
    "traj",
    [
        make_trajectory(np.array([0.0, 1.0, 1.0])),
        make_trajectory(np.array([0.0, 1.0]), x=np.array([0.5, -0.1])),
        make_trajectory(np.array([0.0, 1.0]), y=np.array([np.inf, 0.2])),
    ],
)
def test_invalid_trajectories(traj):
    with pytest.raises(SolverError):
        trajectory_frame(traj)
