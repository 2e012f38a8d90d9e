"""Figure rendering for run traces, sweeps, and analysis curves.

Uses the Agg backend only; every function writes a PNG next to the CSV it
illustrates and returns the path it wrote.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .simulate import SweepResult, TraceRecord  # noqa: E402


def save_trace_figure(trace: Sequence[TraceRecord], path) -> Path:
    """Tip advance and member count against time for one run."""
    path = Path(path)
    t = [r.t for r in trace]
    tip = [r.tip_axial_position for r in trace]
    length = [r.wire_length for r in trace]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(t, tip, color="tab:blue", lw=1.5, label="tip axial position")
    ax.set_xlabel("time [min]")
    ax.set_ylabel("tip axial position [μm]", color="tab:blue")
    ax.tick_params(axis="y", labelcolor="tab:blue")
    ax2 = ax.twinx()
    ax2.step(t, length, where="post", color="tab:red", lw=1.0, alpha=0.7,
             label="members")
    ax2.set_ylabel("wire members", color="tab:red")
    ax2.tick_params(axis="y", labelcolor="tab:red")
    ax.set_title("Wire growth trace")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_sweep_figure(result: SweepResult, path) -> Path:
    """Formation-time scatter and means across the swept parameter."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    means = []
    for row in result.rows:
        times = [s.formation_time for s in result.runs[row.value] if s.completed]
        if times:
            ax.plot([row.value] * len(times), times, "o", color="tab:gray",
                    alpha=0.45, ms=4)
        means.append(row.mean_formation_time)
    values = [row.value for row in result.rows]
    ax.plot(values, means, "s-", color="tab:blue", lw=1.5, label="mean")
    ax.plot(values, [row.median_formation_time for row in result.rows],
            "^--", color="tab:orange", lw=1.2, label="median")
    ax.set_xlabel(result.parameter)
    ax.set_ylabel("formation time [min]")
    ax.set_title(f"Formation time vs {result.parameter}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_stability_figure(rows: Sequence[Sequence[float]], path) -> Path:
    """Stability against wire length, one curve per (E, M) pair in the export."""
    path = Path(path)
    data = np.asarray(rows, dtype=float)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if data.size:
        pairs = sorted({(e, m) for e, m in zip(data[:, 0], data[:, 1])})
        # keep the plot readable when the grid is dense
        shown = pairs[:: max(1, len(pairs) // 8)]
        for e, m in shown:
            mask = (data[:, 0] == e) & (data[:, 1] == m)
            sub = data[mask]
            order = np.argsort(sub[:, 2])
            ax.plot(sub[order, 2], sub[order, 3], lw=1.2,
                    label=f"E={e:g}, M={m:g}")
        ax.legend(fontsize=8)
    ax.set_xlabel("wire length L")
    ax.set_ylabel("stability")
    ax.set_title("Stability surface sections")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_error_curve_figure(rows: Sequence[Sequence[float]], path) -> Path:
    """Bit-error densities: bit-0, bit-1, and their mixture."""
    path = Path(path)
    data = np.asarray(rows, dtype=float)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if data.size:
        ax.plot(data[:, 0], data[:, 1], lw=1.2, label="bit 0")
        ax.plot(data[:, 0], data[:, 2], lw=1.2, label="bit 1")
        ax.plot(data[:, 0], data[:, 3], lw=1.8, color="black", label="mixture")
        ax.legend()
    ax.set_xlabel("x")
    ax.set_ylabel("error density")
    ax.set_title("Bit-error curves")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
