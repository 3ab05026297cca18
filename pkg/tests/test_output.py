"""
Tests for result files written by a run.
"""

import csv
import json

import numpy as np
import pytest

from delaylwr.config.manager import config_from_mapping
from delaylwr.core.exceptions import OutputError
from delaylwr.core.grid import grid_new
from delaylwr.experiments.analysis import ComparisonReport, SweepRecord
from delaylwr.interfaces.output import (
    fmt,
    write_comparison_csv,
    write_density_csv,
    write_diagnostics_csv,
    write_run,
    write_sweep_csv,
)
from delaylwr.solver.models import Trajectory
from delaylwr.solver.runner import run

SHORT_RUN = {
    "name": "short",
    "grid": {"a": 0.0, "b": 1.0, "nx": 50},
    "delay_steps": 3,
    "dt": {"kind": "fixed", "value": 0.01},
    "stop": {"kind": "steps", "value": 20},
    "velocity": {"kind": "greenshields"},
    "initial": {"kind": "sinusoidal", "k": 1},
}


@pytest.fixture
def short_run():
    config = config_from_mapping(SHORT_RUN)
    traj = run(config.solver, config.initial_field(), config.velocity, config.snapshot_every)
    return config, traj


def _lines(path):
    return path.read_text(encoding="utf-8").splitlines()


class TestFormatting:
    @pytest.mark.parametrize("value, text", [
        (None, ""), (True, "true"), (False, "false"), (7, "7"), (0.5, "0.5"), (0.1, "0.10000000000000001"),
        ("completed", "completed"), ("cfl_collapse@7", "cfl_collapse@7"),
    ])
    def test_fmt(self, value, text):
        assert fmt(value) == text

    def test_fmt_numpy_float(self):
        assert fmt(np.float64(0.25)) == "0.25"


class TestDensityCsv:
    def test_single_snapshot(self, tmp_path):
        grid = grid_new(0.0, 3.0, 3)
        traj = Trajectory(snapshots=[(0.0, np.array([0.5, 0.25, 0.125]))])
        path = write_density_csv(traj, grid, tmp_path / "density.csv")
        assert _lines(path) == ["t,0.5,1.5,2.5", "0,0.5,0.25,0.125"]

    def test_header_starts_at_first_center(self, short_run, tmp_path):
        config, traj = short_run
        path = write_density_csv(traj, config.solver.grid, tmp_path / "density.csv")
        header = _lines(path)[0].split(",")
        assert header[:2] == ["t", "0.01"]
        assert len(header) == 51
        # snapshots at 0, 5, 10, 15, 20
        assert len(_lines(path)) == 6

    def test_values_read_back_exactly(self, short_run, tmp_path):
        config, traj = short_run
        path = write_density_csv(traj, config.solver.grid, tmp_path / "density.csv")
        with open(path, newline="", encoding="utf-8") as f:
            rows = [[float(value) for value in row] for row in list(csv.reader(f))[1:]]
        assert rows[-1][0] == traj.final_time
        assert rows[-1][1:] == traj.final_field.tolist()

    def test_empty_trajectory(self, unit_grid, tmp_path):
        with pytest.raises(OutputError):
            write_density_csv(Trajectory(), unit_grid, tmp_path / "density.csv")


class TestDiagnosticsCsv:
    def test_header_and_rows(self, short_run, tmp_path):
        _, traj = short_run
        lines = _lines(write_diagnostics_csv(traj, tmp_path / "diagnostics.csv"))
        assert lines[0] == "step,time,dt,mass,rho_min,rho_max,tv_space,tv_time_inc,linf_ok,tv_ok,overshoot,positive,tv_time_ok"
        assert len(lines) == 22
        first = lines[1].split(",")
        assert first[0] == "0" and first[1] == "0" and first[-5:] == ["true", "true", "false", "true", "true"]
        assert lines[-1].split(",")[0] == "20"


class TestTables:
    def test_sweep_csv(self, tmp_path):
        records = [
            SweepRecord(delay_steps=4, status="completed", final_amplitude=0.5, wave_count=1),
            SweepRecord(delay_steps=5, status="error", error="boom"),
            SweepRecord(delay_steps=6, status="feasibility_abort@12", final_amplitude=0.25,
                        wave_count=2, overshoot_step=12, sg_flag=True),
        ]
        lines = _lines(write_sweep_csv(records, tmp_path / "sweep.csv"))
        assert lines == [
            "delay_steps,final_amplitude,wave_count,overshoot_step,sg_flag,status",
            "4,0.5,1,,false,completed",
            "5,nan,,,false,error",
            "6,0.25,2,12,true,feasibility_abort@12",
        ]

    def test_comparison_csv(self, short_run, tmp_path):
        _, traj = short_run
        report = ComparisonReport("short", 3, traj, traj, 0.25, 0.2, 0.2)
        lines = _lines(write_comparison_csv(report, tmp_path / "comparison.csv"))
        assert lines[0] == "step,time,amplitude_delayed,amplitude_undelayed"
        assert len(lines) == 22


class TestWriteRun:
    def test_files_and_manifest(self, short_run, tmp_path):
        config, traj = short_run
        manifest = write_run(config, traj, tmp_path / "out")
        files = sorted(p.name for p in (tmp_path / "out").iterdir())
        assert files == ["density.csv", "diagnostics.csv", "manifest.json"]

        data = json.loads((tmp_path / "out" / "manifest.json").read_text(encoding="utf-8"))
        assert data == manifest.to_mapping()
        assert data["termination"] == {"status": "completed", "step": None}
        assert data["metrics"]["steps"] == 20
        assert data["metrics"]["first_overshoot_step"] is None
        assert data["artifacts"] == {"density": "density.csv", "diagnostics": "diagnostics.csv"}
        assert config_from_mapping(data) == config

    def test_manifest_reports_horizons(self, short_run, tmp_path):
        config, traj = short_run
        metrics = write_run(config, traj, tmp_path / "out").metrics
        assert metrics["horizon_geometric"] == pytest.approx(3 * 0.02 / 0.75)
        assert metrics["dt_rho_sup"] > 0.0
        assert 0.0 < metrics["horizon_delay"] < 20 * 0.02 / 0.75
        assert metrics["linf_delay_bound_slack"] is not None

    def test_undelayed_run_keeps_the_bound(self, tmp_path):
        config = config_from_mapping({**SHORT_RUN, "delay_steps": 0})
        traj = run(config.solver, config.initial_field(), config.velocity, config.snapshot_every)
        metrics = write_run(config, traj, tmp_path / "out").metrics
        assert metrics["linf_delay_bound_slack"] >= -1e-12
        assert metrics["horizon_delay"] == pytest.approx(20 * 0.02 / 0.75)

    def test_adaptive_run_has_no_delay_horizon(self, tmp_path):
        config = config_from_mapping({**SHORT_RUN, "dt": {"kind": "adaptive"}})
        traj = run(config.solver, config.initial_field(), config.velocity, config.snapshot_every)
        metrics = write_run(config, traj, tmp_path / "out").metrics
        assert metrics["horizon_delay"] is None
        assert metrics["linf_delay_bound_slack"] is None
        assert metrics["horizon_geometric"] == pytest.approx(0.08)

    def test_deterministic_bytes(self, short_run, tmp_path):
        config, traj = short_run
        write_run(config, traj, tmp_path / "a")
        write_run(config, traj, tmp_path / "b")
        for name in ("density.csv", "diagnostics.csv", "manifest.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_output_dir_is_a_file(self, short_run, tmp_path):
        config, traj = short_run
        blocker = tmp_path / "taken"
        blocker.write_text("", encoding="utf-8")
        with pytest.raises(OutputError):
            write_run(config, traj, blocker)
