"""
Run output files: record.json, curve.csv, cutoff.csv and psd.csv.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from src.models.output import CutoffSweep, PointResult, RunRecord
from src.utils.pulse_io import format_float

logger = logging.getLogger(__name__)

CURVE_COLUMNS = [
    "panel",
    "axis",
    "axis_value",
    "variant",
    "epsilon",
    "stderr",
    "leakage_max",
    "iterations",
    "terminated_by",
    "boundary_drift",
]


def _cell(value) -> str:
    if value is None:
        return ""
    if hasattr(value, "value"):
        return str(value.value)
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _atomic_write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)
    return path


def write_record(record: RunRecord, out_dir: str | Path) -> Path:
    """Write record.json."""
    path = Path(out_dir) / "record.json"
    return _atomic_write_text(path, record.model_dump_json(indent=2) + "\n")


def read_record(path: str | Path) -> RunRecord:
    return RunRecord.model_validate(json.loads(Path(path).read_text()))


def write_curve(points: Sequence[PointResult], out_dir: str | Path) -> Path:
    """Write curve.csv with the stable column set; absent values are empty cells."""
    path = Path(out_dir) / "curve.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CURVE_COLUMNS)
        for point in points:
            writer.writerow([_cell(getattr(point, column)) for column in CURVE_COLUMNS])
    logger.debug("Wrote %d rows to %s", len(points), path)
    return path


def write_cutoff_table(sweep: CutoffSweep, out_dir: str | Path, name: str = "cutoff.csv") -> Path:
    """omega_c,epsilon rows plus an inf row holding the unfiltered error."""
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        f.write("# omega_c: angular frequency, bin k at 2 pi k / tau; inf row is the unfiltered pulse\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["omega_c", "epsilon"])
        for omega_c, epsilon in zip(sweep.cutoffs, sweep.epsilons):
            writer.writerow([format_float(omega_c), format_float(epsilon)])
        writer.writerow(["inf", format_float(sweep.reference.epsilon)])
    return path


def write_psd(
    omega: np.ndarray,
    psd: np.ndarray,
    target: np.ndarray,
    out_dir: str | Path,
    header: Optional[str] = None,
) -> Path:
    """psd.csv with the averaged periodogram and the A / omega reference."""
    path = Path(out_dir) / "psd.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        if header:
            f.write(f"# {header}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["omega", "psd", "target"])
        for row in zip(omega, psd, target):
            writer.writerow([format_float(v) for v in row])
    return path
