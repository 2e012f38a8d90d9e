"""Gated self-assembly of a molecular wire between two anchor spheres.

A wire grows from the transmitter anchor toward the receiver: free molecules
that strike the current tip are either frozen onto the chain or bounced away.
Attachment requires four conditions at the instant of contact: the arrival
direction stays within a cone of the current growth direction, the candidate
advances along the anchor axis, it sits inside the field-confined admission
cylinder, and a Bernoulli draw with the enzyme concentration succeeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .physics import (
    CollisionEvent,
    Molecule,
    MoleculeState,
    SimState,
    interfere,
)


@dataclass
class AssemblyParams:
    """Knobs of the attachment rules.

    field_intensity (M) >= 0 narrows the admission cylinder as it grows;
    enzyme_concentration (C) in [0, 1] is the per-contact binding
    probability; angle_range is the maximum turn per attachment in radians;
    field_gain (beta) scales how fast the cylinder shrinks with M;
    lateral_half_width (z0) is the half-width of the medium perpendicular
    to the anchor axis, the cylinder radius at zero field.
    """

    field_intensity: float = 10.0
    enzyme_concentration: float = 1.0
    angle_range: float = math.pi
    field_gain: float = 0.08
    lateral_half_width: float = 9.0
    require_progress: bool = True

    def __post_init__(self):
        if not (self.field_intensity >= 0 and math.isfinite(self.field_intensity)):
            raise ValueError("field_intensity must be >= 0 and finite")
        if not (0.0 <= self.enzyme_concentration <= 1.0):
            raise ValueError("enzyme_concentration must lie in [0, 1]")
        if not (0.0 < self.angle_range <= math.pi):
            raise ValueError("angle_range must lie in (0, pi]")
        if not (self.field_gain > 0 and math.isfinite(self.field_gain)):
            raise ValueError("field_gain must be positive and finite")
        if not (self.lateral_half_width > 0 and math.isfinite(self.lateral_half_width)):
            raise ValueError("lateral_half_width must be positive and finite")

    def admission_radius(self) -> float:
        """Radius of the admission cylinder: z0 / (1 + beta * M)."""
        return self.lateral_half_width / (1.0 + self.field_gain * self.field_intensity)


@dataclass
class Wire:
    """The growing chain, stored as molecule ids in attachment order.

    members[0] is the transmitter anchor; the receiver id is appended when
    the wire completes.  axis_origin/axis_direction define the axial
    coordinate system (transmitter centre, unit vector toward the receiver).
    """

    members: List[int]
    axis_origin: np.ndarray
    axis_direction: np.ndarray
    complete: bool = False

    def __post_init__(self):
        self.axis_origin = np.asarray(self.axis_origin, dtype=float)
        d = np.asarray(self.axis_direction, dtype=float)
        norm = float(np.linalg.norm(d))
        if norm == 0.0:
            raise ValueError("axis direction must be non-zero")
        self.axis_direction = d / norm

    @property
    def tip_id(self) -> int:
        return self.members[-1]

    def axial(self, point) -> float:
        """Coordinate of a point along the anchor axis, 0 at the origin."""
        return float(np.dot(np.asarray(point, dtype=float) - self.axis_origin, self.axis_direction))

    def radial(self, point) -> float:
        """Distance of a point from the anchor axis line."""
        rel = np.asarray(point, dtype=float) - self.axis_origin
        along = float(np.dot(rel, self.axis_direction))
        return float(np.linalg.norm(rel - along * self.axis_direction))


@dataclass
class GateCheck:
    """Outcome of the four attachment conditions for one tip contact.

    enzyme stays None when a geometric gate already failed, so no random
    draw was consumed.
    """

    angle: bool
    progress: bool
    field: bool
    enzyme: Optional[bool] = None

    @property
    def attached(self) -> bool:
        return self.angle and self.progress and self.field and self.enzyme is True


def is_tip_collision(event: CollisionEvent, wire: Wire, state: SimState) -> bool:
    """True when exactly one participant is the wire tip, the other is a free
    molecule, and the wire is still growing."""
    if wire.complete:
        return False
    tip = wire.tip_id
    if event.id_a == tip:
        other = event.id_b
    elif event.id_b == tip:
        other = event.id_a
    else:
        return False
    return MoleculeState(int(state.status[other])) == MoleculeState.FREE


def angle_gate(
    candidate: Molecule,
    tip: Molecule,
    prev: Optional[Molecule],
    angle_range: float,
    axis_direction=None,
) -> bool:
    """Accept when the attachment direction stays within `angle_range` of the
    current growth direction (boundary accepted).

    The growth direction is tip minus previous member; a wire that is still
    only the transmitter anchor uses the anchor axis instead.
    """
    if prev is not None:
        growth = tip.position - prev.position
    else:
        if axis_direction is None:
            raise ValueError("axis_direction required when the wire has no previous member")
        growth = np.asarray(axis_direction, dtype=float)
    arrival = candidate.position - tip.position
    ng = float(np.linalg.norm(growth))
    na = float(np.linalg.norm(arrival))
    if ng == 0.0 or na == 0.0:
        raise ValueError("degenerate direction in angle gate")
    # atan2 form is stable near 0 and pi; accept the boundary within fp noise
    cross = float(np.linalg.norm(np.cross(growth, arrival)))
    dot = float(np.dot(growth, arrival))
    angle = math.atan2(cross, dot)
    return angle <= angle_range + 1e-12


def progress_gate(candidate: Molecule, tip: Molecule, wire: Wire) -> bool:
    """Accept only candidates strictly farther along the anchor axis than the
    tip."""
    return wire.axial(candidate.position) > wire.axial(tip.position)


def field_gate(position, wire: Wire, params: AssemblyParams) -> bool:
    """Accept placements inside the field-confined admission cylinder.

    `position` is where the candidate would come to rest; keeping the check
    on the resting site (rather than the instantaneous overlapping centre)
    guarantees every bound member, including the tip, stays inside the
    cylinder.  Zero field admits everything; a field of intensity M shrinks
    the cylinder radius to z0 / (1 + beta * M).
    """
    if params.field_intensity == 0.0:
        return True
    return wire.radial(position) <= params.admission_radius()


def enzyme_gate(params: AssemblyParams, rng: np.random.Generator) -> bool:
    """Bernoulli draw: binds with probability exactly enzyme_concentration."""
    return rng.random() < params.enzyme_concentration


def try_attach(
    state: SimState,
    event: CollisionEvent,
    wire: Wire,
    params: AssemblyParams,
    rng: np.random.Generator,
) -> GateCheck:
    """Evaluate all gates for a tip contact and freeze the candidate on success.

    Deterministic geometry gates run first, all judged against the site where
    the candidate would come to rest: exact contact distance from the tip
    along the collision normal (for the angle and progress gates this is
    equivalent to judging the candidate's instantaneous centre, which lies on
    the same ray).  The enzyme draw is only consumed when the geometry
    passes.  On attachment the candidate is moved to the resting site, its
    velocity zeroed, its state set to BOUND, and its id appended to the wire.
    """
    tip_id = wire.tip_id
    cand_id = event.id_b if event.id_a == tip_id else event.id_a
    tip = state.molecule(tip_id)
    cand = state.molecule(cand_id)
    prev = state.molecule(wire.members[-2]) if len(wire.members) >= 2 else None

    normal = cand.position - tip.position
    norm = float(np.linalg.norm(normal))
    if norm == 0.0:
        raise ValueError("tip and candidate centres coincide")
    rest = tip.position + normal / norm * (tip.radius + cand.radius)

    g_angle = angle_gate(cand, tip, prev, params.angle_range, wire.axis_direction)
    g_progress = progress_gate(cand, tip, wire) if params.require_progress else True
    g_field = field_gate(rest, wire, params)
    gates = GateCheck(angle=g_angle, progress=g_progress, field=g_field)
    if not (g_angle and g_progress and g_field):
        return gates

    gates.enzyme = enzyme_gate(params, rng)
    if not gates.enzyme:
        return gates

    state.set_bound(cand_id, rest)
    wire.members.append(cand_id)
    return gates


def check_completion(wire: Wire, tip: Molecule, receiver: Molecule) -> bool:
    """Close the wire when the tip touches the receiver sphere.

    Appends the receiver to the member list and latches `complete`;
    idempotent once complete.
    """
    if wire.complete:
        return True
    if interfere(tip, receiver):
        wire.members.append(receiver.id)
        wire.complete = True
        return True
    return False


def wire_axials(state: SimState, wire: Wire) -> np.ndarray:
    """Axial coordinate of every member centre, in attachment order."""
    return np.array([wire.axial(state.pos[i]) for i in wire.members])


def wire_link_errors(state: SimState, wire: Wire) -> np.ndarray:
    """|centre distance - radius sum| for every snapped link of the chain.

    The terminal receiver link (present once complete) records a touch, not
    a snap, so it is excluded.
    """
    ids = wire.members[:-1] if wire.complete else wire.members
    errs = []
    for a, b in zip(ids[:-1], ids[1:]):
        dist = float(np.linalg.norm(state.pos[b] - state.pos[a]))
        errs.append(abs(dist - float(state.radius[a] + state.radius[b])))
    return np.array(errs)


class WireAssembler:
    """Collision handler that grows a wire inside the physics steppers.

    Feed an instance as the `handler` argument of step_pit/step_pic: tip
    contacts are routed through the attachment gates, and everything else is
    left to the ordinary contact response.  Counters record tip contacts,
    attachments, and per-gate rejections; `completion_offset` holds the
    in-frame time of the completing attachment once the wire closes.
    """

    def __init__(
        self,
        wire: Wire,
        params: AssemblyParams,
        receiver_id: int,
        rng: np.random.Generator,
    ):
        self.wire = wire
        self.params = params
        self.receiver_id = receiver_id
        self.rng = rng
        self.tip_collisions = 0
        self.attachments = 0
        self.gate_rejections: Dict[str, int] = {
            "angle": 0, "progress": 0, "field": 0, "enzyme": 0,
        }
        self.completion_offset: Optional[float] = None

    def __call__(self, state: SimState, i: int, j: int, t: float) -> bool:
        normal = state.pos[j] - state.pos[i]
        norm = float(np.linalg.norm(normal))
        if norm == 0.0:
            return False
        event = CollisionEvent(id_a=i, id_b=j, time=t, normal=normal / norm)
        if not is_tip_collision(event, self.wire, state):
            return False
        self.tip_collisions += 1
        gates = try_attach(state, event, self.wire, self.params, self.rng)
        if not gates.attached:
            for name in ("angle", "progress", "field", "enzyme"):
                ok = getattr(gates, name)
                if ok is False:
                    self.gate_rejections[name] += 1
            return False
        self.attachments += 1
        tip = state.molecule(self.wire.tip_id)
        receiver = state.molecule(self.receiver_id)
        if check_completion(self.wire, tip, receiver):
            self.completion_offset = t
        return True
