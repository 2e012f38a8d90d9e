"""Frame loop: molecules in a box assembling a wire between two anchors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .assembly import Wire, WireAssembler
from .config import SimConfig
from .physics import (
    Molecule,
    MoleculeState,
    SimState,
    sample_positions,
    sample_velocities,
    step_pic,
    step_pit,
)

TRANSMITTER_ID = 0
RECEIVER_ID = 1
FIRST_MOLECULE_ID = 2

#: algorithm identifier recorded in run metadata so a rerun can verify it is
#: using the same stream family
GENERATOR_ID = "numpy-pcg64"


@dataclass(frozen=True)
class TraceRecord:
    """One sampled point of wire growth."""

    t: float
    tip_axial_position: float
    wire_length: int


@dataclass
class RunSummary:
    """Outcome of a single run."""

    seed: int
    completed: bool
    formation_time: Optional[float]
    final_wire_length: int
    n_tip_collisions: int = 0
    n_attachments: int = 0
    gate_rejections: Dict[str, int] = field(default_factory=dict)


@dataclass
class RunResult:
    """Everything a finished run produced, including the final scene."""

    trace: List["TraceRecord"]
    summary: RunSummary
    state: SimState
    wire: Wire


def build_state(config: SimConfig, rng: np.random.Generator) -> Tuple[SimState, Wire]:
    """Place anchors and molecules; the draw order is positions then velocities."""
    box = config.box()
    tx = np.asarray(config.transmitter_center, dtype=float)
    rx = np.asarray(config.receiver_center, dtype=float)
    n = config.n_molecules
    positions = sample_positions(
        rng,
        box,
        radii=np.full(n, config.molecule_radius),
        fixed_positions=np.vstack([tx, rx]),
        fixed_radii=np.array([config.transmitter_radius, config.receiver_radius]),
    )
    velocities = sample_velocities(rng, config.sigma_v, n)
    molecules = [
        Molecule(TRANSMITTER_ID, tx, np.zeros(3), config.transmitter_radius,
                 state=MoleculeState.TRANSMITTER),
        Molecule(RECEIVER_ID, rx, np.zeros(3), config.receiver_radius,
                 state=MoleculeState.RECEIVER),
    ]
    for i in range(n):
        molecules.append(
            Molecule(FIRST_MOLECULE_ID + i, positions[i], velocities[i],
                     config.molecule_radius, config.molecule_mass)
        )
    state = SimState.from_molecules(box, molecules)
    wire = Wire(members=[TRANSMITTER_ID], axis_origin=tx, axis_direction=config.axis_direction())
    return state, wire


def run_simulation(config: SimConfig) -> Tuple[List[TraceRecord], RunSummary]:
    """Run one seeded realisation until the wire completes or t_max elapses."""
    result = run_simulation_full(config)
    return result.trace, result.summary


def run_simulation_full(config: SimConfig) -> RunResult:
    """Like run_simulation, but also hands back the final state and wire."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    state, wire = build_state(config, rng)
    assembler = WireAssembler(wire, config.assembly_params(), RECEIVER_ID, rng)
    step = step_pic if config.strategy == "PIC" else step_pit
    dt = config.dt
    tau = config.velocity_relaxation_time
    alpha = math.exp(-dt / tau) if tau > 0 else 1.0
    n_frames = int(math.ceil(config.t_max / dt - 1e-9))

    trace: List[TraceRecord] = [_record(0.0, state, wire)]
    next_sample = config.trace_interval
    formation_time: Optional[float] = None

    for k in range(n_frames):
        frame_start = k * dt
        if alpha < 1.0:
            state.thermal_refresh(rng, config.sigma_v, alpha)
        step(state, dt, handler=assembler)
        t_now = frame_start + dt
        if wire.complete:
            formation_time = frame_start + assembler.completion_offset
            trace.append(_record(formation_time, state, wire))
            break
        if t_now + 1e-9 >= next_sample:
            trace.append(_record(t_now, state, wire))
            next_sample += config.trace_interval

    summary = RunSummary(
        seed=config.seed,
        completed=wire.complete,
        formation_time=formation_time,
        final_wire_length=len(wire.members),
        n_tip_collisions=assembler.tip_collisions,
        n_attachments=assembler.attachments,
        gate_rejections=dict(assembler.gate_rejections),
    )
    return RunResult(trace=trace, summary=summary, state=state, wire=wire)


def _record(t: float, state: SimState, wire: Wire) -> TraceRecord:
    tip = float(wire.axial(state.pos[wire.tip_id]))
    return TraceRecord(t=t, tip_axial_position=tip, wire_length=len(wire.members))


# ---------------------------------------------------------------------------
# parameter sweeps


@dataclass(frozen=True)
class SweepRow:
    """Aggregate statistics for one parameter value."""

    value: float
    n_seeds: int
    n_completed: int
    completion_rate: float
    mean_formation_time: float
    median_formation_time: float


@dataclass
class SweepResult:
    parameter: str
    rows: List[SweepRow]
    runs: Dict[float, List[RunSummary]]


SWEEPABLE = ("field_intensity", "enzyme_concentration")


def sweep(
    config: SimConfig,
    parameter: str,
    values: Sequence[float],
    n_seeds: int,
) -> SweepResult:
    """Repeat the run over `values`, n_seeds independent seeds per value.

    Seeds are config.seed, config.seed + 1, ... for every value, so the
    per-value statistics do not depend on the order of `values`.
    """
    if parameter not in SWEEPABLE:
        raise ValueError(f"parameter must be one of {SWEEPABLE}, got {parameter!r}")
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    runs: Dict[float, List[RunSummary]] = {}
    for v in values:
        per_value: List[RunSummary] = []
        for i in range(n_seeds):
            cfg = config.with_updates(**{parameter: float(v), "seed": config.seed + i})
            _, summary = run_simulation(cfg)
            per_value.append(summary)
        runs[float(v)] = per_value
    rows = [_aggregate(float(v), runs[float(v)]) for v in values]
    return SweepResult(parameter=parameter, rows=rows, runs=runs)


def _aggregate(value: float, summaries: Sequence[RunSummary]) -> SweepRow:
    times = [s.formation_time for s in summaries if s.completed]
    n = len(summaries)
    done = len(times)
    return SweepRow(
        value=value,
        n_seeds=n,
        n_completed=done,
        completion_rate=done / n,
        mean_formation_time=float(np.mean(times)) if times else float("nan"),
        median_formation_time=float(np.median(times)) if times else float("nan"),
    )
