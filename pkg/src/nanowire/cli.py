"""Command-line harness: simulate, sweep, stability, error-curve.

Exit codes: 0 success, 2 invalid configuration or arguments, 3 I/O failure,
4 event-storm abort.  Every subcommand writes CSV output plus a run_meta
text file, and renders a matching PNG unless --no-figures is given.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .config import ConfigError, SimConfig
from .physics import EventStormError
from .reports import (
    export_error_curve_csv,
    export_stability_csv,
    export_summary_csv,
    export_sweep_csv,
    export_trace_csv,
    fmt,
    read_error_curve_csv,
    read_stability_csv,
    write_run_meta,
)
from .simulate import GENERATOR_ID, run_simulation, sweep

_PARAM_ALIASES = {
    "field": "field_intensity",
    "field_intensity": "field_intensity",
    "enzyme": "enzyme_concentration",
    "enzyme_concentration": "enzyme_concentration",
}


def parse_range(text: str) -> np.ndarray:
    """`a:b:n` -> n evenly spaced values from a to b inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must look like a:b:n, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f"range must look like a:b:n with numeric parts, got {text!r}") from None
    if n < 1:
        raise ValueError(f"range count must be >= 1, got {n}")
    return np.linspace(a, b, n)


def parse_values(text: str) -> List[float]:
    try:
        values = [float(p) for p in text.split(",") if p.strip() != ""]
    except ValueError:
        raise ValueError(f"--values must be comma-separated numbers, got {text!r}") from None
    if not values:
        raise ValueError("--values must contain at least one number")
    return values


def _meta_hash(parts: Sequence[str]) -> str:
    return hashlib.sha256("\n".join(parts).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# subcommands


def _cmd_simulate(args) -> int:
    config = SimConfig.from_file(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trace, summary = run_simulation(config)
    export_trace_csv(trace, out / "trace.csv")
    export_summary_csv(summary, out / "summary.csv")
    write_run_meta(
        out / "run_meta.txt",
        artifact_version=__version__,
        generator=GENERATOR_ID,
        seed=config.seed,
        config_sha256=config.sha256(),
    )
    if not args.no_figures:
        from .figures import save_trace_figure

        save_trace_figure(trace, out / "trace.png")
    status = (
        f"completed at t = {summary.formation_time:.4f} min"
        if summary.completed else "did not complete"
    )
    print(f"simulate: {status}; wire members = {summary.final_wire_length}; "
          f"outputs in {out}")
    return 0


def _cmd_sweep(args) -> int:
    config = SimConfig.from_file(args.config)
    parameter = _PARAM_ALIASES.get(args.param)
    if parameter is None:
        raise ConfigError([f"--param must be field or enzyme, got {args.param!r}"])
    values = parse_values(args.values)
    if args.seeds < 1:
        raise ConfigError(["--seeds must be >= 1"])
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = sweep(config, parameter, values, args.seeds)
    export_sweep_csv(result, out / "sweep_stats.csv", out / "sweep_runs.csv")
    write_run_meta(
        out / "run_meta.txt",
        artifact_version=__version__,
        generator=GENERATOR_ID,
        seed=config.seed,
        config_sha256=config.sha256(),
        extra={
            "sweep_parameter": parameter,
            "sweep_values": ",".join(fmt(v) for v in values),
            "sweep_seeds": str(args.seeds),
        },
    )
    if not args.no_figures:
        from .figures import save_sweep_figure

        save_sweep_figure(result, out / "sweep.png")
    for row in result.rows:
        print(f"sweep: {parameter} = {row.value:g}: "
              f"{row.n_completed}/{row.n_seeds} completed, "
              f"mean formation = {row.mean_formation_time:.4f} min")
    return 0


def _cmd_stability(args) -> int:
    e_grid = parse_range(args.e_range)
    m_grid = parse_range(args.m_range)
    l_grid = parse_range(args.l_range)
    if args.k <= 0:
        raise ConfigError(["--k must be positive"])
    bad = [name for name, grid in (("--e-range", e_grid), ("--m-range", m_grid),
                                   ("--l-range", l_grid)) if np.any(grid <= 0)]
    if bad:
        raise ConfigError([f"{name} values must all be positive" for name in bad])
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    export_stability_csv(e_grid, m_grid, l_grid, args.k, out)
    write_run_meta(
        out.with_name(out.stem + "_meta.txt"),
        artifact_version=__version__,
        generator="none",
        seed=None,
        config_sha256=_meta_hash([
            f"k = {fmt(args.k)}", f"e_range = {args.e_range}",
            f"m_range = {args.m_range}", f"l_range = {args.l_range}",
        ]),
    )
    if not args.no_figures:
        from .figures import save_stability_figure

        save_stability_figure(read_stability_csv(out), out.with_suffix(".png"))
    print(f"stability: wrote {e_grid.size * m_grid.size * l_grid.size} rows to {out}")
    return 0


def _cmd_error_curve(args) -> int:
    x_range = parse_range(args.x_range)
    if args.sd is not None and args.sd <= 0:
        raise ConfigError(["--sd must be positive when given"])
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    export_error_curve_csv(x_range, args.a, args.sd, out)
    write_run_meta(
        out.with_name(out.stem + "_meta.txt"),
        artifact_version=__version__,
        generator="none",
        seed=None,
        config_sha256=_meta_hash([
            f"a = {fmt(args.a)}",
            f"sd = {'' if args.sd is None else fmt(args.sd)}",
            f"x_range = {args.x_range}",
        ]),
    )
    if not args.no_figures:
        from .figures import save_error_curve_figure

        save_error_curve_figure(read_error_curve_csv(out), out.with_suffix(".png"))
    print(f"error-curve: wrote {x_range.size} rows to {out}")
    return 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nanowire",
        description="Simulate field-guided, enzyme-gated nanowire assembly "
                    "and export analysis curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one seeded simulation")
    p_sim.add_argument("--config", required=True, help="key = value config file")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument("--no-figures", action="store_true",
                       help="skip PNG rendering")
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="repeat runs over a parameter")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--param", required=True,
                         help="field | enzyme (or the full key name)")
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated parameter values")
    p_sweep.add_argument("--seeds", required=True, type=int,
                         help="independent seeds per value")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--no-figures", action="store_true")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_stab = sub.add_parser("stability", help="export the stability surface")
    p_stab.add_argument("--k", required=True, type=float)
    p_stab.add_argument("--e-range", required=True, help="a:b:n inclusive")
    p_stab.add_argument("--m-range", required=True)
    p_stab.add_argument("--l-range", required=True)
    p_stab.add_argument("--out", required=True, help="output CSV file")
    p_stab.add_argument("--no-figures", action="store_true")
    p_stab.set_defaults(func=_cmd_stability)

    p_err = sub.add_parser("error-curve", help="export bit-error densities")
    p_err.add_argument("--a", required=True, type=float,
                       help="location offset of the bit-1 density")
    p_err.add_argument("--sd", type=float, default=None,
                       help="optional spread rescaling the densities")
    p_err.add_argument("--x-range", required=True, help="a:b:n inclusive")
    p_err.add_argument("--out", required=True, help="output CSV file")
    p_err.add_argument("--no-figures", action="store_true")
    p_err.set_defaults(func=_cmd_error_curve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EventStormError as exc:
        print(f"error: event storm: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
