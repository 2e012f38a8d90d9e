"""CSV and metadata persistence for runs, sweeps, and analysis curves.

All floats are written with repr(), which round-trips exactly through
float(); files end with a trailing newline so identical inputs give
byte-identical outputs.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .analysis import (
    p_error,
    p_error_bit0,
    p_error_bit1,
    p_error_scaled,
    stability,
)
from .simulate import RunSummary, SweepResult, TraceRecord

TRACE_HEADER = ["t_min", "tip_position_um", "wire_length"]
STABILITY_HEADER = ["E", "M", "L", "stability"]
ERROR_CURVE_HEADER = ["x", "p_e0", "p_e1", "p_e"]
SWEEP_STATS_HEADER = [
    "parameter", "value", "n_seeds", "n_completed", "completion_rate",
    "mean_formation_time_min", "median_formation_time_min",
]
SWEEP_RUNS_HEADER = [
    "parameter", "value", "seed", "completed", "formation_time_min",
    "final_wire_length",
]


def fmt(x) -> str:
    """Full-precision decimal text for one cell."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_rows(path, header: Sequence[str], rows) -> None:
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _read_rows(path, header: Sequence[str]) -> List[List[str]]:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            rows = list(reader)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    if not rows or rows[0] != list(header):
        raise ValueError(f"{path}: expected header {','.join(header)}")
    return rows[1:]


# ---------------------------------------------------------------------------
# traces


def export_trace_csv(trace: Sequence[TraceRecord], path) -> None:
    _write_rows(
        path, TRACE_HEADER,
        ([fmt(r.t), fmt(r.tip_axial_position), fmt(r.wire_length)] for r in trace),
    )


def read_trace_csv(path) -> List[TraceRecord]:
    return [
        TraceRecord(t=float(t), tip_axial_position=float(x), wire_length=int(n))
        for t, x, n in _read_rows(path, TRACE_HEADER)
    ]


SUMMARY_HEADER = [
    "seed", "completed", "formation_time_min", "final_wire_length",
    "n_tip_collisions", "n_attachments",
    "rejected_angle", "rejected_progress", "rejected_field", "rejected_enzyme",
]


def export_summary_csv(summary: RunSummary, path) -> None:
    s = summary
    _write_rows(path, SUMMARY_HEADER, [[
        fmt(s.seed), fmt(s.completed),
        "" if s.formation_time is None else fmt(s.formation_time),
        fmt(s.final_wire_length), fmt(s.n_tip_collisions), fmt(s.n_attachments),
        fmt(s.gate_rejections.get("angle", 0)),
        fmt(s.gate_rejections.get("progress", 0)),
        fmt(s.gate_rejections.get("field", 0)),
        fmt(s.gate_rejections.get("enzyme", 0)),
    ]])


def read_summary_csv(path) -> RunSummary:
    rows = _read_rows(path, SUMMARY_HEADER)
    if len(rows) != 1:
        raise ValueError(f"{path}: expected exactly one summary row")
    (seed, completed, t_form, length, hits, attach, r_ang, r_prog, r_field,
     r_enz) = rows[0]
    return RunSummary(
        seed=int(seed),
        completed=completed == "true",
        formation_time=None if t_form == "" else float(t_form),
        final_wire_length=int(length),
        n_tip_collisions=int(hits),
        n_attachments=int(attach),
        gate_rejections={"angle": int(r_ang), "progress": int(r_prog),
                         "field": int(r_field), "enzyme": int(r_enz)},
    )


# ---------------------------------------------------------------------------
# sweeps


def export_sweep_csv(result: SweepResult, stats_path, runs_path) -> None:
    _write_rows(
        stats_path, SWEEP_STATS_HEADER,
        (
            [result.parameter, fmt(row.value), fmt(row.n_seeds), fmt(row.n_completed),
             fmt(row.completion_rate), fmt(row.mean_formation_time),
             fmt(row.median_formation_time)]
            for row in result.rows
        ),
    )
    runs_rows = []
    for row in result.rows:  # value-then-seed order, matching the sweep fold
        for s in result.runs[row.value]:
            runs_rows.append([
                result.parameter, fmt(row.value), fmt(s.seed), fmt(s.completed),
                "" if s.formation_time is None else fmt(s.formation_time),
                fmt(s.final_wire_length),
            ])
    _write_rows(runs_path, SWEEP_RUNS_HEADER, runs_rows)


def read_sweep_runs_csv(path) -> List[RunSummary]:
    out = []
    for _, _, seed, completed, t_form, length in _read_rows(path, SWEEP_RUNS_HEADER):
        out.append(RunSummary(
            seed=int(seed),
            completed=completed == "true",
            formation_time=None if t_form == "" else float(t_form),
            final_wire_length=int(length),
        ))
    return out


# ---------------------------------------------------------------------------
# analysis curves


def export_stability_csv(e_grid, m_grid, l_grid, k: float, path) -> None:
    """Long-format surface: E varies slowest, L fastest."""
    e_grid = np.asarray(e_grid, dtype=float)
    m_grid = np.asarray(m_grid, dtype=float)
    l_grid = np.asarray(l_grid, dtype=float)
    rows = (
        [fmt(e), fmt(m), fmt(length), fmt(stability(k, e, m, length))]
        for e in e_grid for m in m_grid for length in l_grid
    )
    _write_rows(path, STABILITY_HEADER, rows)


def read_stability_csv(path) -> List[List[float]]:
    return [[float(c) for c in row] for row in _read_rows(path, STABILITY_HEADER)]


def export_error_curve_csv(x_range, a: float, sd: Optional[float], path) -> None:
    """Bit-error densities over x; scaled by the trace spread when sd is given."""
    x_range = np.asarray(x_range, dtype=float)
    if x_range.size == 0:
        raise ValueError("x_range must be non-empty")
    rows = []
    for x in x_range:
        x = float(x)
        if sd is None:
            rows.append([fmt(x), fmt(p_error_bit0(x)), fmt(p_error_bit1(x, a)),
                         fmt(p_error(x, a))])
        else:
            rows.append([fmt(x), fmt(p_error_bit0(x / sd) / sd),
                         fmt(p_error_bit1(x / sd, a) / sd),
                         fmt(p_error_scaled(x, a, sd))])
    _write_rows(path, ERROR_CURVE_HEADER, rows)


def read_error_curve_csv(path) -> List[List[float]]:
    return [[float(c) for c in row] for row in _read_rows(path, ERROR_CURVE_HEADER)]


# ---------------------------------------------------------------------------
# run metadata


def write_run_meta(path, *, artifact_version: str, generator: str,
                   seed: Optional[int], config_sha256: str,
                   extra: Optional[Dict[str, str]] = None) -> None:
    lines = [
        f"artifact_version = {artifact_version}",
        f"generator = {generator}",
        f"seed = {'' if seed is None else seed}",
        f"config_sha256 = {config_sha256}",
    ]
    for key, value in (extra or {}).items():
        lines.append(f"{key} = {value}")
    path = Path(path)
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
