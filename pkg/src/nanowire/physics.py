"""Hard-sphere kinematics in a closed reflecting box.

Units are micrometres and minutes throughout.  Two stepping strategies are
provided: a lazy per-frame overlap test (`step_pit`) that detects and resolves
collisions only at frame boundaries, and an exact event-driven step
(`step_pic`) that advances molecule pairs to their predicted instants of
contact so spheres never interpenetrate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.spatial.distance import pdist


class MoleculeState(IntEnum):
    FREE = 0
    BOUND = 1
    TRANSMITTER = 2
    RECEIVER = 3


#: states that never move; only FREE molecules carry velocity
_STATIC_STATES = (MoleculeState.BOUND, MoleculeState.TRANSMITTER, MoleculeState.RECEIVER)


def _as_vec3(value) -> np.ndarray:
    v = np.asarray(value, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector components must be finite")
    return v


@dataclass
class Molecule:
    """A hard sphere with kinematic state.

    position is the centre in um, velocity in um/min.  A molecule whose
    state is not FREE is immovable and must carry zero velocity.
    """

    id: int
    position: np.ndarray
    velocity: np.ndarray
    radius: float = 1.0
    mass: float = 1.0
    state: MoleculeState = MoleculeState.FREE

    def __post_init__(self):
        if self.id < 0:
            raise ValueError("molecule id must be non-negative")
        self.position = _as_vec3(self.position)
        self.velocity = _as_vec3(self.velocity)
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError("radius must be positive and finite")
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ValueError("mass must be positive and finite")
        self.state = MoleculeState(self.state)
        if self.state != MoleculeState.FREE and np.any(self.velocity != 0.0):
            raise ValueError("non-free molecules must have zero velocity")


@dataclass(frozen=True)
class Box:
    """Axis-aligned bounding box with reflecting walls."""

    min_corner: np.ndarray
    max_corner: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "min_corner", _as_vec3(self.min_corner))
        object.__setattr__(self, "max_corner", _as_vec3(self.max_corner))
        if not np.all(self.min_corner < self.max_corner):
            raise ValueError("box min corner must be strictly below max corner componentwise")

    @property
    def extent(self) -> np.ndarray:
        return self.max_corner - self.min_corner

    @property
    def half_extent(self) -> np.ndarray:
        return 0.5 * (self.max_corner - self.min_corner)

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.max_corner + self.min_corner)

    def contains_sphere(self, position, radius: float, tol: float = 1e-9) -> bool:
        p = _as_vec3(position)
        return bool(
            np.all(p - radius >= self.min_corner - tol)
            and np.all(p + radius <= self.max_corner + tol)
        )


@dataclass(frozen=True)
class CollisionEvent:
    """A resolved or predicted contact between two spheres.

    normal is the unit vector from molecule id_a toward molecule id_b.
    """

    id_a: int
    id_b: int
    time: float
    normal: np.ndarray

    def __post_init__(self):
        if self.id_a == self.id_b:
            raise ValueError("collision event requires two distinct molecules")
        if self.time < 0:
            raise ValueError("collision time must be non-negative")
        n = _as_vec3(self.normal)
        if abs(float(np.linalg.norm(n)) - 1.0) > 1e-12:
            raise ValueError("collision normal must be a unit vector")
        object.__setattr__(self, "normal", n)


# ---------------------------------------------------------------------------
# pair operations


def _separation_unit(pa, pb) -> np.ndarray:
    dp = pb - pa
    dist = float(np.linalg.norm(dp))
    if dist == 0.0:
        raise ValueError("coincident centers")
    return dp / dist


def approaching(a: Molecule, b: Molecule) -> bool:
    """True when the centre distance is strictly decreasing right now."""
    dp = b.position - a.position
    dv = b.velocity - a.velocity
    return float(np.dot(dp, dv)) < 0.0


def interfere(a: Molecule, b: Molecule) -> bool:
    """True when the spheres overlap or exactly touch (boundary counts)."""
    dp = b.position - a.position
    return float(np.linalg.norm(dp)) <= a.radius + b.radius


def resolve_elastic(a: Molecule, b: Molecule) -> Tuple[Molecule, Molecule]:
    """Exchange the velocity components along the centre line elastically.

    Returns updated copies; total momentum and kinetic energy are conserved.
    Both molecules must be movable bodies with finite mass.
    """
    n = _separation_unit(a.position, b.position)
    va, vb = _elastic_velocities(a.position, b.position, a.velocity, b.velocity,
                                 a.mass, b.mass, n)
    return replace(a, velocity=va), replace(b, velocity=vb)


def _elastic_velocities(pa, pb, va, vb, ma, mb, n=None):
    if n is None:
        n = _separation_unit(pa, pb)
    vn = float(np.dot(vb - va, n))  # relative speed along the centre line
    total = ma + mb
    va2 = va + (2.0 * mb / total) * vn * n
    vb2 = vb - (2.0 * ma / total) * vn * n
    return va2, vb2


def _reflect_velocity(v, n):
    """Specular reflection of v about the plane with unit normal n."""
    return v - 2.0 * float(np.dot(v, n)) * n


def time_to_collision(a: Molecule, b: Molecule) -> Optional[float]:
    """Earliest non-negative instant at which the pair reaches contact.

    Returns None when the pair is receding or never meets; already
    overlapping approaching pairs collide immediately (t = 0).
    """
    dp = b.position - a.position
    dv = b.velocity - a.velocity
    rsum = a.radius + b.radius
    return _time_of_impact(dp, dv, rsum)


def _time_of_impact(dp, dv, rsum) -> Optional[float]:
    b = float(np.dot(dp, dv))
    if b >= 0.0:
        return None  # receding (or zero relative motion)
    c = float(np.dot(dp, dp)) - rsum * rsum
    if c < 0.0:
        return 0.0  # already overlapping
    a = float(np.dot(dv, dv))
    disc = b * b - a * c
    if disc < 0.0:
        return None  # closest approach stays outside contact
    # smaller quadratic root in a cancellation-safe form (b < 0, c >= 0)
    return c / (-b + math.sqrt(disc))


# ---------------------------------------------------------------------------
# simulation state


class SimState:
    """Mutable array-of-structs state for a population of spheres in a box."""

    def __init__(self, box: Box, positions, velocities, radii, masses, states):
        self.box = box
        self.pos = np.array(positions, dtype=float)
        self.vel = np.array(velocities, dtype=float)
        self.radius = np.array(radii, dtype=float)
        self.mass = np.array(masses, dtype=float)
        self.status = np.array(states, dtype=np.int8)
        n = self.pos.shape[0]
        if self.pos.shape != (n, 3) or self.vel.shape != (n, 3):
            raise ValueError("positions and velocities must be (n, 3) arrays")
        if not (len(self.radius) == len(self.mass) == len(self.status) == n):
            raise ValueError("per-molecule arrays must share one length")
        self.vel[self.status != MoleculeState.FREE] = 0.0
        self._iu, self._ju = np.triu_indices(n, 1)
        self._rsum = self.radius[self._iu] + self.radius[self._ju]
        self._live = None  # condensed mask: pairs with at least one free member

    @classmethod
    def from_molecules(cls, box: Box, molecules: List[Molecule]) -> "SimState":
        ids = [m.id for m in molecules]
        if ids != list(range(len(molecules))):
            raise ValueError("molecule ids must be consecutive from 0 in list order")
        return cls(
            box,
            [m.position for m in molecules],
            [m.velocity for m in molecules],
            [m.radius for m in molecules],
            [m.mass for m in molecules],
            [int(m.state) for m in molecules],
        )

    @property
    def n(self) -> int:
        return self.pos.shape[0]

    @property
    def free_mask(self) -> np.ndarray:
        return self.status == MoleculeState.FREE

    def molecule(self, i: int) -> Molecule:
        """Snapshot copy of molecule i."""
        return Molecule(
            id=int(i),
            position=self.pos[i].copy(),
            velocity=self.vel[i].copy(),
            radius=float(self.radius[i]),
            mass=float(self.mass[i]),
            state=MoleculeState(int(self.status[i])),
        )

    def live_pairs(self) -> np.ndarray:
        if self._live is None:
            free = self.free_mask
            self._live = free[self._iu] | free[self._ju]
        return self._live

    def set_bound(self, i: int, position) -> None:
        """Freeze molecule i in place at `position` with zero velocity."""
        self.pos[i] = _as_vec3(position)
        self.vel[i] = 0.0
        self.status[i] = MoleculeState.BOUND
        self._live = None

    def thermal_refresh(self, rng: np.random.Generator, sigma: float, alpha: float) -> None:
        """Partially re-draw free-molecule velocities from N(0, sigma) per axis.

        v <- alpha v + sqrt(1 - alpha^2) sigma xi keeps the speed distribution
        stationary, giving diffusive motion for alpha < 1 and pure ballistic
        flight for alpha == 1.
        """
        if alpha >= 1.0:
            return
        free = self.free_mask
        noise = rng.normal(0.0, sigma, (int(free.sum()), 3))
        self.vel[free] = alpha * self.vel[free] + math.sqrt(1.0 - alpha * alpha) * noise

    def kinetic_energy(self) -> float:
        return float(0.5 * np.sum(self.mass * np.einsum("ij,ij->i", self.vel, self.vel)))

    def momentum(self) -> np.ndarray:
        return self.mass @ self.vel


def max_pairwise_overlap(state: SimState) -> float:
    """Largest sphere-sphere interpenetration depth, in um (0 when none)."""
    if state.n < 2:
        return 0.0
    depth = state._rsum - pdist(state.pos)
    worst = float(depth.max())
    return worst if worst > 0.0 else 0.0


# ---------------------------------------------------------------------------
# initial conditions


def sample_positions(
    rng: np.random.Generator,
    box: Box,
    radii,
    fixed_positions=None,
    fixed_radii=None,
    max_tries: int = 20000,
) -> np.ndarray:
    """Rejection-sample sphere centres uniformly in the box with no overlaps.

    Spheres are kept wholly inside the walls and clear of the optional fixed
    spheres (and of one another).
    """
    radii = np.asarray(radii, dtype=float)
    placed = np.empty((len(radii), 3))
    occupied_pos: List[np.ndarray] = []
    occupied_rad: List[float] = []
    if fixed_positions is not None:
        for p, r in zip(np.asarray(fixed_positions, dtype=float), np.asarray(fixed_radii, dtype=float)):
            occupied_pos.append(p)
            occupied_rad.append(float(r))
    for k, r in enumerate(radii):
        lo = box.min_corner + r
        hi = box.max_corner - r
        if np.any(lo >= hi):
            raise ValueError("box too small for a sphere of radius %g" % r)
        for _ in range(max_tries):
            p = rng.uniform(lo, hi)
            if occupied_pos:
                d = np.linalg.norm(np.asarray(occupied_pos) - p, axis=1)
                if np.any(d <= np.asarray(occupied_rad) + r):
                    continue
            placed[k] = p
            occupied_pos.append(p)
            occupied_rad.append(float(r))
            break
        else:
            raise RuntimeError(
                f"could not place sphere {k} without overlap after {max_tries} tries"
            )
    return placed


def sample_velocities(rng: np.random.Generator, sigma: float, n: int) -> np.ndarray:
    """Per-component zero-mean Gaussian velocities."""
    return rng.normal(0.0, sigma, (n, 3))


# ---------------------------------------------------------------------------
# stepping

#: handler(state, i, j, t_in_frame) -> True when the contact was consumed
CollisionHandler = Callable[[SimState, int, int, float], bool]


class EventStormError(RuntimeError):
    """Raised when one frame generates an implausible number of events."""


@dataclass
class FrameReport:
    """What happened during one frame step."""

    pair_collisions: int = 0
    wall_reflections: int = 0
    attachments: int = 0
    events: List[Tuple[float, str, int, int]] = field(default_factory=list)


def _reflect_walls_lazy(state: SimState, report: FrameReport) -> None:
    """Mirror positions (and flip velocities) of spheres that crossed a wall."""
    lo = state.box.min_corner[None, :] + state.radius[:, None]
    hi = state.box.max_corner[None, :] - state.radius[:, None]
    for _ in range(16):
        below = state.pos < lo
        above = state.pos > hi
        if not (below.any() or above.any()):
            return
        if below.any():
            state.pos[below] = (2.0 * lo - state.pos)[below]
            state.vel[below] = -state.vel[below]
            report.wall_reflections += int(below.sum())
        if above.any():
            state.pos[above] = (2.0 * hi - state.pos)[above]
            state.vel[above] = -state.vel[above]
            report.wall_reflections += int(above.sum())
    raise RuntimeError("wall reflection failed to converge; time step too large for box")


def _resolve_pair(state: SimState, i: int, j: int) -> None:
    """Apply the correct contact response for the pair's mobility mix."""
    n = _separation_unit(state.pos[i], state.pos[j])
    i_free = state.status[i] == MoleculeState.FREE
    j_free = state.status[j] == MoleculeState.FREE
    if i_free and j_free:
        va, vb = _elastic_velocities(
            state.pos[i], state.pos[j], state.vel[i], state.vel[j],
            float(state.mass[i]), float(state.mass[j]), n,
        )
        state.vel[i] = va
        state.vel[j] = vb
    elif i_free:
        state.vel[i] = _reflect_velocity(state.vel[i], n)
    elif j_free:
        state.vel[j] = _reflect_velocity(state.vel[j], n)
    # two static bodies never carry velocity; nothing to do


def step_pit(state: SimState, dt: float, handler: Optional[CollisionHandler] = None) -> FrameReport:
    """Advance one frame with lazy (periodic) interference testing.

    All spheres move ballistically for the whole frame; wall crossings are
    mirrored back inside; then every pair that overlaps (boundary contact
    counts) while still approaching is resolved exactly once, in ascending
    (id_a, id_b) order.  Overlapping positions are left in place: only
    velocities change at the frame boundary.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    report = FrameReport()
    state.pos += state.vel * dt
    _reflect_walls_lazy(state, report)

    if state.n >= 2:
        d = pdist(state.pos)
        cand = np.flatnonzero((d <= state._rsum) & state.live_pairs())
        for k in cand:
            i = int(state._iu[k])
            j = int(state._ju[k])
            dp = state.pos[j] - state.pos[i]
            dv = state.vel[j] - state.vel[i]
            # re-check live: earlier resolutions this frame may have changed
            # velocities (or frozen a participant)
            if float(np.dot(dp, dv)) >= 0.0:
                continue
            if float(np.dot(dp, dp)) > state._rsum[k] ** 2:
                continue
            if handler is not None and handler(state, i, j, dt):
                report.attachments += 1
                report.events.append((dt, "attach", i, j))
                continue
            _resolve_pair(state, i, j)
            report.pair_collisions += 1
            report.events.append((dt, "pair", i, j))
    return report


def _next_wall_event(state: SimState, horizon: float):
    """Earliest wall crossing within `horizon`, as (t, molecule, axis) or None."""
    lo = state.box.min_corner[None, :] + state.radius[:, None]
    hi = state.box.max_corner[None, :] - state.radius[:, None]
    v = state.vel
    with np.errstate(divide="ignore", invalid="ignore"):
        t_lo = np.where(v < 0.0, (lo - state.pos) / v, np.inf)
        t_hi = np.where(v > 0.0, (hi - state.pos) / v, np.inf)
    t_wall = np.minimum(t_lo, t_hi)
    t_wall[t_wall < 0.0] = 0.0  # already at a wall and moving out: bounce now
    flat = int(np.argmin(t_wall))
    t = float(t_wall.flat[flat])
    if t > horizon:
        return None
    return t, flat // 3, flat % 3


def step_pic(
    state: SimState,
    dt: float,
    handler: Optional[CollisionHandler] = None,
    max_events: int = 1_000_000,
) -> FrameReport:
    """Advance one frame event-by-event at predicted instants of contact.

    Pair contacts and wall crossings are solved exactly, the state advances
    to each event in time order, and the event is resolved in place, so
    spheres never interpenetrate.  Simultaneous events (within 1e-12 min)
    are processed in a fixed order: wall events first, then pairs ascending
    by (id_a, id_b).  A frame that produces more than `max_events` events
    aborts with EventStormError.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    report = FrameReport()
    elapsed = 0.0
    n_events = 0

    while True:
        rem = dt - elapsed
        if rem <= 0:
            break
        best = None  # (time, kind_rank, a, b, axis)

        wall = _next_wall_event(state, rem)
        if wall is not None:
            t_w, mol, axis = wall
            best = (t_w, 0, mol, axis, axis)

        if state.n >= 2:
            # exact pruning: a pair can touch within rem only if its gap can
            # be closed at the maximum combined speed
            free_speeds = np.linalg.norm(state.vel, axis=1)
            vmax = float(free_speeds.max()) if len(free_speeds) else 0.0
            if vmax > 0.0:
                gap = pdist(state.pos) - state._rsum
                near = np.flatnonzero((gap <= 2.0 * vmax * rem) & state.live_pairs())
                for k in near:
                    i = int(state._iu[k])
                    j = int(state._ju[k])
                    toi = _time_of_impact(
                        state.pos[j] - state.pos[i],
                        state.vel[j] - state.vel[i],
                        float(state._rsum[k]),
                    )
                    if toi is None or toi > rem:
                        continue
                    cand = (toi, 1, i, j, -1)
                    if best is None or _event_before(cand, best):
                        best = cand

        if best is None:
            state.pos += state.vel * rem
            break

        t_ev, kind, a, b, axis = best
        state.pos += state.vel * t_ev
        elapsed += t_ev
        n_events += 1
        if n_events > max_events:
            raise EventStormError(
                f"event storm: more than {max_events} events in one frame"
            )

        if kind == 0:
            lo = state.box.min_corner[axis] + state.radius[a]
            hi = state.box.max_corner[axis] - state.radius[a]
            state.pos[a, axis] = lo if state.vel[a, axis] < 0.0 else hi
            state.vel[a, axis] = -state.vel[a, axis]
            report.wall_reflections += 1
            report.events.append((elapsed, "wall", a, axis))
        else:
            if handler is not None and handler(state, a, b, elapsed):
                report.attachments += 1
                report.events.append((elapsed, "attach", a, b))
            else:
                _resolve_pair(state, a, b)
                report.pair_collisions += 1
                report.events.append((elapsed, "pair", a, b))
    return report


def _event_before(x, y) -> bool:
    """Strict event ordering: earlier time wins; near-ties (<=1e-12) fall back
    to kind rank then ascending ids."""
    if x[0] < y[0] - 1e-12:
        return True
    if y[0] < x[0] - 1e-12:
        return False
    return x[1:4] < y[1:4]
