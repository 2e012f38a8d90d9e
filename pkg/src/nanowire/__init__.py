"""Stochastic simulator of field-guided, enzyme-gated nanowire self-assembly.

Free molecules diffuse in a closed box between two fixed anchor spheres; a
wire grows from the transmitting anchor one contact at a time, each candidate
filtered by orientation, forward progress, a field-confinement corridor, and
an enzyme-binding draw.  The analysis layer scores finished wires (stability
metric, skewed bit-error densities) and the CLI turns configs into CSV files
and figures.
"""

__version__ = "0.1.0"

from .analysis import (
    erfc,
    p_error,
    p_error_bit0,
    p_error_bit1,
    p_error_scaled,
    skew_delta,
    skew_variance,
    stability,
    stability_surface,
    std_deviation,
)
from .assembly import (
    AssemblyParams,
    GateCheck,
    Wire,
    WireAssembler,
    angle_gate,
    check_completion,
    enzyme_gate,
    field_gate,
    is_tip_collision,
    progress_gate,
    try_attach,
    wire_axials,
    wire_link_errors,
)
from .config import ConfigError, SimConfig
from .physics import (
    Box,
    CollisionEvent,
    EventStormError,
    FrameReport,
    Molecule,
    MoleculeState,
    SimState,
    approaching,
    interfere,
    max_pairwise_overlap,
    resolve_elastic,
    sample_positions,
    sample_velocities,
    step_pic,
    step_pit,
    time_to_collision,
)
from .simulate import (
    GENERATOR_ID,
    RunSummary,
    SweepResult,
    SweepRow,
    TraceRecord,
    build_state,
    run_simulation,
    sweep,
)

__all__ = [
    "__version__",
    # physics
    "Box", "CollisionEvent", "EventStormError", "FrameReport", "Molecule",
    "MoleculeState", "SimState", "approaching", "interfere",
    "max_pairwise_overlap", "resolve_elastic", "sample_positions",
    "sample_velocities", "step_pic", "step_pit", "time_to_collision",
    # assembly
    "AssemblyParams", "GateCheck", "Wire", "WireAssembler", "angle_gate",
    "check_completion", "enzyme_gate", "field_gate", "is_tip_collision",
    "progress_gate", "try_attach", "wire_axials", "wire_link_errors",
    # analysis
    "erfc", "p_error", "p_error_bit0", "p_error_bit1", "p_error_scaled",
    "skew_delta", "skew_variance", "stability", "stability_surface",
    "std_deviation",
    # configuration and runs
    "ConfigError", "SimConfig", "GENERATOR_ID", "RunSummary", "SweepResult",
    "SweepRow", "TraceRecord", "build_state", "run_simulation", "sweep",
]
