"""
Trajectory export as CSV plus a standalone matplotlib script that plots it.
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from ..errors import SolverError
from ..models.orbit_schemas import Trajectory

logger = logging.getLogger(__name__)

CSV_NAME = "trajectory.csv"
PLOT_NAME = "plot_trajectory.py"

_PLOT_SCRIPT = '''\
"""Plot x(t) and y(t) from {csv_name}."""

from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd

data = pd.read_csv(Path(__file__).with_name("{csv_name}"))
fig, ax = plt.subplots(figsize=(12, 3))
ax.plot(data["t"], data["x"], label="x (prey)")
ax.plot(data["t"], data["y"], label="y (predator)")
ax.set_xlabel("t")
ax.set_title("{title}")
ax.legend()
fig.tight_layout()
fig.savefig(Path(__file__).with_name("trajectory.png"), dpi=150)
plt.show()
'''


def trajectory_frame(trajectory: Trajectory) -> pd.DataFrame:
    frame = pd.DataFrame({"t": trajectory.t, "x": trajectory.x, "y": trajectory.y})
    if not np.all(np.diff(frame["t"].to_numpy()) > 0):
        raise SolverError("exported times must be strictly increasing")
    values = frame[["x", "y"]].to_numpy()
    if not (np.all(np.isfinite(values)) and np.all(values > 0)):
        raise SolverError("exported states must be finite and positive")
    return frame


def write_trajectory(trajectory: Trajectory, out_dir: str | Path, title: str = "") -> tuple[Path, Path]:
    """Write ``t,x,y`` CSV and the plot script into ``out_dir``; return both paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / CSV_NAME
    trajectory_frame(trajectory).to_csv(csv_path, index=False, float_format="%.16g")
    plot_path = out / PLOT_NAME
    plot_path.write_text(
        _PLOT_SCRIPT.format(csv_name=CSV_NAME, title=title or "Periodic solution"),
        encoding="utf-8",
    )
    logger.info(f"Wrote {len(trajectory.t)} samples to {csv_path}")
    return csv_path, plot_path
