"""
Plain-text pulse files.

One multi-column file per pulse set::

    # tau=121.89...
    t_start,EJ1,EJ2,EJJ
    0,0.050000000000000003,...

Values are written with 17 significant digits, which round-trips IEEE doubles
exactly.
"""

from pathlib import Path

import numpy as np

from src.errors import InputError
from src.models.system import ControlId
from src.physics.dynamics import PulseSet, TimeGrid


def format_float(value: float) -> str:
    return format(float(value), ".17g")


def write_pulses(path: str | Path, pulses: PulseSet) -> Path:
    """Write a pulse set; returns the path written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ids = pulses.controls
    lines = [f"# tau={format_float(pulses.grid.tau)}", ",".join(["t_start"] + [c.value for c in ids])]
    t_start = pulses.grid.t_start
    for j in range(pulses.grid.n_steps):
        row = [format_float(t_start[j])] + [format_float(pulses.fields[c][j]) for c in ids]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_columns(path: str | Path, grid: TimeGrid, columns: dict[str, np.ndarray]) -> Path:
    """Same format for arbitrary named columns (noise trajectories)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    lines = [f"# tau={format_float(grid.tau)}", ",".join(["t_start"] + names)]
    t_start = grid.t_start
    for j in range(grid.n_steps):
        lines.append(",".join([format_float(t_start[j])] + [format_float(columns[n][j]) for n in names]))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_pulses(path: str | Path) -> PulseSet:
    """Read a pulse file written by write_pulses."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"Pulse file not found: {path}")

    tau = None
    header = None
    rows = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            if key.strip() == "tau":
                tau = float(value)
            continue
        if header is None:
            header = [h.strip() for h in line.split(",")]
            continue
        try:
            rows.append([float(x) for x in line.split(",")])
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: unparsable row ({exc})") from exc

    if header is None or header[0] != "t_start" or len(rows) < 2:
        raise InputError(f"{path}: expected a t_start header and at least two rows")
    try:
        ids = [ControlId(h) for h in header[1:]]
    except ValueError as exc:
        raise InputError(f"{path}: unknown control id in header ({exc})") from exc

    data = np.array(rows)
    if data.shape[1] != len(header):
        raise InputError(f"{path}: rows do not match the header width")
    n_steps = data.shape[0]
    if tau is None:
        tau = (data[1, 0] - data[0, 0]) * n_steps
    grid = TimeGrid(tau=tau, n_steps=n_steps)
    return PulseSet(grid=grid, fields={cid: data[:, i + 1] for i, cid in enumerate(ids)})
