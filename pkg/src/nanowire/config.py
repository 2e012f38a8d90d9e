"""Run configuration: a flat key = value file format with validation.

Every key has a default, so a config file only lists overrides.  Vector
values are three numbers separated by spaces.  Lines starting with # (and
trailing # comments) are ignored.
"""

from __future__ import annotations

import dataclasses
import hashlib
import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from .assembly import AssemblyParams
from .physics import Box

_STRATEGIES = ("PIT", "PIC")


class ConfigError(ValueError):
    """Invalid configuration; `violations` lists every failed check."""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("invalid configuration:\n" + "\n".join(f"  - {v}" for v in self.violations))


@dataclass(frozen=True)
class SimConfig:
    """Full description of one simulation run."""

    box_min: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    box_max: Tuple[float, float, float] = (52.0, 18.0, 18.0)
    transmitter_center: Tuple[float, float, float] = (4.0, 9.0, 9.0)
    transmitter_radius: float = 2.0
    receiver_center: Tuple[float, float, float] = (46.0, 9.0, 9.0)
    receiver_radius: float = 5.0
    n_molecules: int = 550
    molecule_radius: float = 1.0
    molecule_mass: float = 1.0
    sigma_v: float = 14.0
    velocity_relaxation_time: float = 0.10
    dt: float = 0.02
    t_max: float = 600.0
    trace_interval: float = 0.1
    strategy: str = "PIT"
    field_intensity: float = 10.0
    enzyme_concentration: float = 1.0
    angle_range: float = math.pi
    field_gain: float = 0.08
    require_progress: bool = True
    seed: int = 900

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def from_text(cls, text: str) -> "SimConfig":
        values, errors = _parse_flat(text)
        fields = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            if key not in fields:
                errors.append(f"unknown key '{key}'")
                continue
            try:
                kwargs[key] = _coerce(key, raw, fields[key].type)
            except ValueError as exc:
                errors.append(str(exc))
        if errors:
            raise ConfigError(errors)
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path) -> "SimConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def with_updates(self, **kwargs) -> "SimConfig":
        cfg = dataclasses.replace(self, **kwargs)
        cfg.validate()
        return cfg

    # ------------------------------------------------------------------
    # validation

    def violations(self) -> List[str]:
        """Every failed invariant, as human-readable strings (empty when valid)."""
        v: List[str] = []
        bmin = np.asarray(self.box_min, dtype=float)
        bmax = np.asarray(self.box_max, dtype=float)
        for arr, name in ((bmin, "box_min"), (bmax, "box_max")):
            if arr.shape != (3,) or not np.all(np.isfinite(arr)):
                v.append(f"{name} must be three finite numbers")
                return v  # geometry checks below would be meaningless
        if not np.all(bmin < bmax):
            v.append("box_min must be strictly below box_max componentwise")
            return v

        def sphere_ok(center, radius, name):
            c = np.asarray(center, dtype=float)
            if c.shape != (3,) or not np.all(np.isfinite(c)):
                v.append(f"{name} center must be three finite numbers")
                return False
            if not (radius > 0 and math.isfinite(radius)):
                v.append(f"{name} radius must be positive")
                return False
            if np.any(c - radius < bmin) or np.any(c + radius > bmax):
                v.append(f"{name} sphere must lie inside the box")
            return True

        tx_ok = sphere_ok(self.transmitter_center, self.transmitter_radius, "transmitter")
        rx_ok = sphere_ok(self.receiver_center, self.receiver_radius, "receiver")
        if tx_ok and rx_ok:
            gap = float(np.linalg.norm(np.asarray(self.receiver_center, dtype=float)
                                       - np.asarray(self.transmitter_center, dtype=float)))
            if gap < self.transmitter_radius + self.receiver_radius:
                v.append("transmitter and receiver spheres must not overlap")

        if not (isinstance(self.n_molecules, int) and self.n_molecules > 0):
            v.append("n_molecules must be a positive integer")
        if not (self.molecule_radius > 0 and math.isfinite(self.molecule_radius)):
            v.append("molecule_radius must be positive")
        elif self.molecule_radius >= min(self.transmitter_radius, self.receiver_radius):
            v.append("molecule_radius must be smaller than both anchor radii")
        if not (self.molecule_mass > 0 and math.isfinite(self.molecule_mass)):
            v.append("molecule_mass must be positive")
        if not (self.sigma_v > 0 and math.isfinite(self.sigma_v)):
            v.append("sigma_v must be positive")
        if not (self.velocity_relaxation_time >= 0 and math.isfinite(self.velocity_relaxation_time)):
            v.append("velocity_relaxation_time must be >= 0 (0 disables the diffusive refresh)")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            v.append("dt must be positive")
        if not (self.t_max > 0 and math.isfinite(self.t_max)):
            v.append("t_max must be positive")
        if self.dt > 0 and self.t_max > 0 and self.t_max < self.dt:
            v.append("t_max must be at least one frame (dt)")
        if not (self.trace_interval > 0 and math.isfinite(self.trace_interval)):
            v.append("trace_interval must be positive")
        elif self.dt > 0 and self.trace_interval < self.dt:
            v.append("trace_interval must be >= dt")
        if self.strategy not in _STRATEGIES:
            v.append(f"strategy must be one of {_STRATEGIES}")
        if not (self.field_intensity >= 0 and math.isfinite(self.field_intensity)):
            v.append("field_intensity must be >= 0")
        if not (0.0 <= self.enzyme_concentration <= 1.0):
            v.append("enzyme_concentration must lie in [0, 1]")
        if not (0.0 < self.angle_range <= math.pi):
            v.append("angle_range must lie in (0, pi]")
        if not (self.field_gain > 0 and math.isfinite(self.field_gain)):
            v.append("field_gain must be positive")
        if not (isinstance(self.seed, int) and self.seed >= 0):
            v.append("seed must be a non-negative integer")
        return v

    def validate(self) -> None:
        v = self.violations()
        if v:
            raise ConfigError(v)

    # ------------------------------------------------------------------
    # derived views

    def box(self) -> Box:
        return Box(np.asarray(self.box_min, dtype=float), np.asarray(self.box_max, dtype=float))

    def axis_direction(self) -> np.ndarray:
        d = np.asarray(self.receiver_center, dtype=float) - np.asarray(self.transmitter_center, dtype=float)
        return d / float(np.linalg.norm(d))

    def lateral_half_width(self) -> float:
        """Half-width of the box perpendicular to the anchor axis.

        Uses the smaller of the two half-extents orthogonal to the dominant
        axis component, which is exact for axis-aligned anchor layouts.
        """
        half = self.box().half_extent
        k = int(np.argmax(np.abs(self.axis_direction())))
        return float(min(h for i, h in enumerate(half) if i != k))

    def assembly_params(self) -> AssemblyParams:
        return AssemblyParams(
            field_intensity=self.field_intensity,
            enzyme_concentration=self.enzyme_concentration,
            angle_range=self.angle_range,
            field_gain=self.field_gain,
            lateral_half_width=self.lateral_half_width(),
            require_progress=self.require_progress,
        )

    # ------------------------------------------------------------------
    # serialisation

    def canonical_text(self) -> str:
        """Stable one-key-per-line rendering used for hashing and run metadata."""
        lines = []
        for f in dataclasses.fields(self):
            lines.append(f"{f.name} = {_render(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"

    def sha256(self) -> str:
        return hashlib.sha256(self.canonical_text().encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# parsing helpers


def _parse_flat(text: str) -> Tuple[Dict[str, str], List[str]]:
    values: Dict[str, str] = {}
    errors: List[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
            continue
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if not key or not val:
            errors.append(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
            continue
        if key in values:
            errors.append(f"line {lineno}: duplicate key '{key}'")
            continue
        values[key] = val
    return values, errors


def _coerce(key: str, raw: str, ftype: str):
    if ftype.startswith("Tuple"):
        parts = raw.split()
        if len(parts) != 3:
            raise ValueError(f"{key} must be three numbers separated by spaces, got {raw!r}")
        try:
            return tuple(float(p) for p in parts)
        except ValueError:
            raise ValueError(f"{key} must be three numbers, got {raw!r}") from None
    if ftype == "int":
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"{key} must be an integer, got {raw!r}") from None
    if ftype == "float":
        try:
            return float(raw)
        except ValueError:
            raise ValueError(f"{key} must be a number, got {raw!r}") from None
    if ftype == "bool":
        low = raw.lower()
        if low in ("true", "on", "yes", "1"):
            return True
        if low in ("false", "off", "no", "0"):
            return False
        raise ValueError(f"{key} must be true or false, got {raw!r}")
    if ftype == "str":
        return raw.upper() if key == "strategy" else raw
    raise ValueError(f"{key}: unsupported field type {ftype}")


def _render(value) -> str:
    if isinstance(value, tuple):
        return " ".join(repr(float(x)) for x in value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)
