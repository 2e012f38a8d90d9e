"""Command-line harness: argument parsing, artifacts, exit codes."""

import subprocess
import sys

import numpy as np
import pytest

from nanowire import cli
from nanowire.config import ConfigError, SimConfig
from nanowire.physics import EventStormError
from nanowire.reports import (
    read_error_curve_csv,
    read_stability_csv,
    read_sweep_runs_csv,
    read_trace_csv,
)


@pytest.fixture
def small_config(tmp_path):
    """A quick scenario: tiny box, few molecules, short clock."""
    cfg = SimConfig().with_updates(
        box_min=(0.0, 0.0, 0.0), box_max=(20.0, 10.0, 10.0),
        transmitter_center=(3.0, 5.0, 5.0), transmitter_radius=1.5,
        receiver_center=(16.0, 5.0, 5.0), receiver_radius=2.0,
        n_molecules=40, molecule_radius=0.5,
        t_max=10.0, trace_interval=0.5, seed=321,
    )
    path = tmp_path / "small.cfg"
    path.write_text(cfg.canonical_text(), encoding="utf-8")
    return path


# --- argument helpers ---------------------------------------------------------


def test_parse_range_inclusive():
    got = cli.parse_range("1:3:5")
    assert np.allclose(got, [1.0, 1.5, 2.0, 2.5, 3.0])
    assert cli.parse_range("2:2:1").tolist() == [2.0]


@pytest.mark.parametrize("bad", ["1:2", "1:2:3:4", "a:2:3", "1:2:0", "1:2:x"])
def test_parse_range_rejects(bad):
    with pytest.raises(ValueError):
        cli.parse_range(bad)


def test_parse_values():
    assert cli.parse_values("0.4, 0.8,1.0") == [0.4, 0.8, 1.0]
    with pytest.raises(ValueError):
        cli.parse_values("")
    with pytest.raises(ValueError):
        cli.parse_values("1.0,zap")


# --- simulate ------------------------------------------------------------------


def test_simulate_writes_artifacts(small_config, tmp_path, capsys):
    out = tmp_path / "run"
    code = cli.main(["simulate", "--config", str(small_config),
                     "--out", str(out)])
    assert code == 0
    assert (out / "trace.csv").is_file()
    assert (out / "summary.csv").is_file()
    assert (out / "run_meta.txt").is_file()
    assert (out / "trace.png").is_file()
    assert read_trace_csv(out / "trace.csv")  # non-empty, schema intact
    meta = (out / "run_meta.txt").read_text(encoding="utf-8")
    assert "generator = numpy-pcg64" in meta
    assert "seed = 321" in meta
    assert "outputs in" in capsys.readouterr().out


def test_simulate_no_figures_skips_png(small_config, tmp_path):
    out = tmp_path / "run"
    code = cli.main(["simulate", "--config", str(small_config),
                     "--out", str(out), "--no-figures"])
    assert code == 0
    assert not (out / "trace.png").exists()
    assert (out / "trace.csv").is_file()


def test_simulate_repeat_runs_byte_identical(small_config, tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["simulate", "--config", str(small_config),
                     "--out", str(out_a), "--no-figures"]) == 0
    assert cli.main(["simulate", "--config", str(small_config),
                     "--out", str(out_b), "--no-figures"]) == 0
    for name in ("trace.csv", "summary.csv", "run_meta.txt"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_simulate_missing_config_exits_3(tmp_path):
    assert cli.main(["simulate", "--config", str(tmp_path / "absent.cfg"),
                     "--out", str(tmp_path / "run")]) == 3


def test_simulate_invalid_config_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("n_molecules = -5\n", encoding="utf-8")
    assert cli.main(["simulate", "--config", str(bad),
                     "--out", str(tmp_path / "run")]) == 2
    assert "error:" in capsys.readouterr().err


# --- sweep ---------------------------------------------------------------------


def test_sweep_param_alias_and_artifacts(small_config, tmp_path):
    out = tmp_path / "sweep"
    code = cli.main(["sweep", "--config", str(small_config),
                     "--param", "enzyme", "--values", "0.5,1.0",
                     "--seeds", "2", "--out", str(out)])
    assert code == 0
    assert (out / "sweep_stats.csv").is_file()
    assert (out / "sweep_runs.csv").is_file()
    assert (out / "sweep.png").is_file()
    runs = read_sweep_runs_csv(out / "sweep_runs.csv")
    assert len(runs) == 4  # 2 values x 2 seeds
    meta = (out / "run_meta.txt").read_text(encoding="utf-8")
    assert "sweep_parameter = enzyme_concentration" in meta


def test_sweep_full_key_name(small_config, tmp_path):
    out = tmp_path / "sweep"
    code = cli.main(["sweep", "--config", str(small_config),
                     "--param", "field_intensity", "--values", "10",
                     "--seeds", "1", "--out", str(out), "--no-figures"])
    assert code == 0
    assert not (out / "sweep.png").exists()


def test_sweep_unknown_param_exits_2(small_config, tmp_path):
    assert cli.main(["sweep", "--config", str(small_config),
                     "--param", "gravity", "--values", "1",
                     "--seeds", "1", "--out", str(tmp_path / "s")]) == 2


def test_sweep_bad_seed_count_exits_2(small_config, tmp_path):
    assert cli.main(["sweep", "--config", str(small_config),
                     "--param", "enzyme", "--values", "1.0",
                     "--seeds", "0", "--out", str(tmp_path / "s")]) == 2


# --- stability -----------------------------------------------------------------


def test_stability_artifacts(tmp_path):
    out = tmp_path / "stab" / "surface.csv"
    code = cli.main(["stability", "--k", "2.0", "--e-range", "1:4:4",
                     "--m-range", "5:25:3", "--l-range", "10:30:2",
                     "--out", str(out)])
    assert code == 0
    assert len(read_stability_csv(out)) == 4 * 3 * 2
    assert out.with_suffix(".png").is_file()
    assert out.with_name("surface_meta.txt").is_file()


def test_stability_rejects_nonpositive_grid(tmp_path):
    assert cli.main(["stability", "--k", "2.0", "--e-range", "0:4:4",
                     "--m-range", "5:25:3", "--l-range", "10:30:2",
                     "--out", str(tmp_path / "surface.csv")]) == 2


def test_stability_rejects_bad_k(tmp_path):
    assert cli.main(["stability", "--k", "-1", "--e-range", "1:4:4",
                     "--m-range", "5:25:3", "--l-range", "10:30:2",
                     "--out", str(tmp_path / "surface.csv")]) == 2


# --- error-curve ---------------------------------------------------------------


def test_error_curve_artifacts(tmp_path):
    out = tmp_path / "curve.csv"
    code = cli.main(["error-curve", "--a", "-2.0", "--x-range=-4:4:41",
                     "--out", str(out), "--no-figures"])
    assert code == 0
    rows = read_error_curve_csv(out)
    assert len(rows) == 41
    assert not out.with_suffix(".png").exists()
    assert out.with_name("curve_meta.txt").is_file()


def test_error_curve_figure(tmp_path):
    out = tmp_path / "curve.csv"
    assert cli.main(["error-curve", "--a", "0.5", "--sd", "2.0",
                     "--x-range=-8:8:33", "--out", str(out)]) == 0
    assert out.with_suffix(".png").is_file()


def test_error_curve_rejects_bad_sd(tmp_path):
    assert cli.main(["error-curve", "--a", "0.0", "--sd", "-1",
                     "--x-range=-4:4:9",
                     "--out", str(tmp_path / "c.csv")]) == 2


def test_error_curve_rejects_bad_range(tmp_path):
    assert cli.main(["error-curve", "--a", "0.0", "--x-range", "oops",
                     "--out", str(tmp_path / "c.csv")]) == 2


# --- exit-code mapping ----------------------------------------------------------


def test_event_storm_exits_4(small_config, tmp_path, monkeypatch):
    def boom(config):
        raise EventStormError("pair 3-4 re-colliding")
    monkeypatch.setattr(cli, "run_simulation", boom)
    assert cli.main(["simulate", "--config", str(small_config),
                     "--out", str(tmp_path / "run")]) == 4


def test_os_error_exits_3(small_config, tmp_path, monkeypatch):
    def fail(trace, path):
        raise OSError("disk full")
    monkeypatch.setattr(cli, "export_trace_csv", fail)
    assert cli.main(["simulate", "--config", str(small_config),
                     "--out", str(tmp_path / "run")]) == 3


def test_config_error_message_on_stderr(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("dt = 0\n", encoding="utf-8")
    assert cli.main(["simulate", "--config", str(bad),
                     "--out", str(tmp_path / "r")]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error:")


# --- installed entry point -------------------------------------------------------


def test_console_script_runs(tmp_path):
    out = tmp_path / "curve.csv"
    proc = subprocess.run(
        [sys.executable, "-c",
         "import sys; from nanowire.cli import main; sys.exit(main())",
         "error-curve", "--a", "0", "--x-range=-1:1:5",
         "--out", str(out), "--no-figures"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.is_file()
