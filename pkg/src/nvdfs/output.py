"""Deterministic run artifacts: trajectory CSV, summary JSON, plot data.

All floating-point output is printed with 17 significant digits, so two
runs with identical configs produce byte-identical files.  The CSV schema
is ``t_us`` first, then the named observable columns in declared order,
with a header row always present.  Each observable additionally gets a
two-column gnuplot-ready ``<name>.dat``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .master_equation import Trajectory
from .protocols import ProtocolResult

__all__ = ["format_float", "write_trajectory_csv", "write_plot_data", "write_summary"]


def format_float(x: float) -> str:
    return f"{float(x):.16e}"


def write_trajectory_csv(
    path: Path, times: np.ndarray, columns: dict[str, np.ndarray]
) -> None:
    names = list(columns)
    lines = ["t_us," + ",".join(names)]
    for i, t in enumerate(times):
        row = [format_float(t)] + [format_float(columns[n][i]) for n in names]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_plot_data(outdir: Path, times: np.ndarray, columns: dict[str, np.ndarray]) -> list[Path]:
    paths = []
    for name, series in columns.items():
        lines = [f"# t_us {name}"]
        for t, v in zip(times, series):
            lines.append(f"{format_float(t)} {format_float(v)}")
        p = outdir / f"{name}.dat"
        p.write_text("\n".join(lines) + "\n", encoding="utf-8")
        paths.append(p)
    return paths


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Trajectory):
        return "<trajectory>"
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def write_summary(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n",
        encoding="utf-8",
    )


def result_summary(result: ProtocolResult, run_id: str, effective_config: dict) -> dict:
    extras = {k: v for k, v in result.extras.items() if not isinstance(v, Trajectory)}
    return {
        "protocol": result.name,
        "run_id": run_id,
        "final_fidelity": result.final_fidelity,
        "peak_intermediate_population": result.peak_intermediate_population,
        "timing_us": result.timing,
        "flags": list(result.flags),
        "extras": extras,
        "parameters": result.parameters_echo,
        "effective_config": effective_config,
        "integration": result.trajectory.meta,
    }
