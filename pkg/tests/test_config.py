import math

import numpy as np
import pytest

from nanowire.config import ConfigError, SimConfig


def test_defaults_are_valid():
    cfg = SimConfig()
    assert cfg.violations() == []


def test_from_text_round_trip():
    cfg = SimConfig()
    again = SimConfig.from_text(cfg.canonical_text())
    assert again == cfg
    assert again.sha256() == cfg.sha256()


def test_from_text_parses_types_and_comments():
    cfg = SimConfig.from_text(
        """
        # full-line comment
        n_molecules = 25
        sigma_v = 7.5          # trailing comment
        strategy = pic
        require_progress = false
        box_max = 30 12 12
        receiver_center = 25 6 6
        transmitter_center = 4 6 6
        transmitter_radius = 2.0
        receiver_radius = 3.0
        """
    )
    assert cfg.n_molecules == 25
    assert cfg.sigma_v == 7.5
    assert cfg.strategy == "PIC"
    assert cfg.require_progress is False
    assert cfg.box_max == (30.0, 12.0, 12.0)


def test_from_text_unknown_key_rejected():
    with pytest.raises(ConfigError) as err:
        SimConfig.from_text("no_such_knob = 3\n")
    assert any("unknown key" in v for v in err.value.violations)


def test_from_text_duplicate_key_rejected():
    with pytest.raises(ConfigError) as err:
        SimConfig.from_text("dt = 0.01\ndt = 0.02\n")
    assert any("duplicate" in v for v in err.value.violations)


def test_from_text_collects_all_errors():
    with pytest.raises(ConfigError) as err:
        SimConfig.from_text(
            "n_molecules = -5\nenzyme_concentration = 2.0\nstrategy = MAYBE\n"
        )
    text = "\n".join(err.value.violations)
    assert "n_molecules" in text
    assert "enzyme_concentration" in text
    assert "strategy" in text


def test_violation_anchor_outside_box():
    cfg = SimConfig()
    bad = SimConfig(**{**cfg.__dict__, "transmitter_center": (0.5, 9.0, 9.0)})
    assert any("inside the box" in v for v in bad.violations())


def test_violation_overlapping_anchors():
    cfg = SimConfig()
    bad = SimConfig(**{**cfg.__dict__,
                       "receiver_center": (6.0, 9.0, 9.0)})
    assert any("must not overlap" in v for v in bad.violations())


def test_violation_molecule_radius_vs_anchors():
    cfg = SimConfig()
    bad = SimConfig(**{**cfg.__dict__, "molecule_radius": cfg.transmitter_radius})
    assert any("anchor radii" in v for v in bad.violations())


def test_violation_trace_interval_below_dt():
    cfg = SimConfig()
    bad = SimConfig(**{**cfg.__dict__, "trace_interval": cfg.dt / 2})
    assert any("trace_interval" in v for v in bad.violations())


def test_with_updates_validates():
    cfg = SimConfig()
    with pytest.raises(ConfigError):
        cfg.with_updates(enzyme_concentration=-0.1)
    ok = cfg.with_updates(enzyme_concentration=0.25)
    assert ok.enzyme_concentration == 0.25
    assert cfg.enzyme_concentration != 0.25  # original untouched


def test_axis_direction_unit_vector():
    cfg = SimConfig()
    d = cfg.axis_direction()
    assert np.linalg.norm(d) == pytest.approx(1.0, abs=1e-15)
    assert d[0] > 0


def test_lateral_half_width_excludes_axis_component():
    cfg = SimConfig().with_updates(box_max=(40.0, 16.0, 12.0),
                                   transmitter_center=(4.0, 8.0, 6.0),
                                   receiver_center=(34.0, 8.0, 6.0))
    # axis is x; perpendicular half-extents are 8 and 6 -> take the smaller
    assert cfg.lateral_half_width() == pytest.approx(6.0)


def test_assembly_params_mirror_config():
    cfg = SimConfig()
    p = cfg.assembly_params()
    assert p.field_intensity == cfg.field_intensity
    assert p.enzyme_concentration == cfg.enzyme_concentration
    assert p.angle_range == cfg.angle_range
    assert p.field_gain == cfg.field_gain
    assert p.lateral_half_width == cfg.lateral_half_width()


def test_sha256_stable_and_sensitive():
    a = SimConfig()
    b = SimConfig()
    assert a.sha256() == b.sha256()
    c = a.with_updates(seed=a.seed + 1)
    assert c.sha256() != a.sha256()


def test_canonical_text_renders_floats_reparseably():
    cfg = SimConfig().with_updates(sigma_v=1.0 / 3.0)
    again = SimConfig.from_text(cfg.canonical_text())
    assert again.sigma_v == cfg.sigma_v  # exact, not approximate
