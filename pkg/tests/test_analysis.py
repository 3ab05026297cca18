"""
Tests for delayed/undelayed comparisons and delay sweeps.
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from delaylwr.core.exceptions import UsageError
from delaylwr.core.grid import grid_new
from delaylwr.experiments.analysis import (
    ComparisonReport,
    compare_delayed_undelayed,
    delay_sweep,
    first_step_reaching,
    max_density_position,
    parse_delay_range,
    run_preset,
)
from delaylwr.experiments.presets import PresetStore
from delaylwr.solver.models import MaxSteps
from delaylwr.solver.runner import run

CONSTANT_PRESET = """\
name: flat
description: uniform traffic
extends: test0
config:
  initial: {kind: constant, value: 0.5}
"""


class TestCompare:
    """Delayed run against its undelayed twin."""

    def test_test0_delay_amplifies(self, store):
        report = compare_delayed_undelayed(store.get("test0"))
        assert report.delay_steps == 15
        assert report.initial_amplitude == pytest.approx(0.25, abs=1e-3)
        assert report.final_amplitude_delayed > report.initial_amplitude
        assert report.final_amplitude_undelayed < report.initial_amplitude
        assert report.ratio > 1.0
        rows = report.amplitude_rows()
        assert len(rows) == 301
        assert [row[0] for row in rows] == list(range(301))

    def test_undelayed_base_compares_with_itself(self, store):
        report = compare_delayed_undelayed(store.get("test0-lwr").with_final_time(0.5))
        assert report.final_amplitude_delayed == report.final_amplitude_undelayed
        assert report.ratio == 1.0

    def test_constant_datum(self, tmp_path):
        (tmp_path / "flat.yaml").write_text(CONSTANT_PRESET, encoding="utf-8")
        store = PresetStore(extra_dirs=[tmp_path], include_user_dir=False)
        report = compare_delayed_undelayed(store.get("flat").with_final_time(0.5))
        assert report.initial_amplitude == 0.0
        assert report.final_amplitude_delayed == 0.0
        assert report.final_amplitude_undelayed == 0.0
        assert report.ratio == 1.0

    def test_rows_padded_for_shorter_run(self, short_config, unit_grid, greenshields):
        rho0 = 0.5 + 0.1 * np.sin(2 * np.pi * unit_grid.centers)
        longer = run(short_config, rho0, greenshields)
        shorter = run(replace(short_config, stop=MaxSteps(10)), rho0, greenshields)
        report = ComparisonReport("manual", 0, longer, shorter, 0.2, 0.0, 0.0)
        rows = report.amplitude_rows()
        assert len(rows) == 21
        assert not math.isnan(rows[10][3])
        assert all(math.isnan(row[3]) for row in rows[11:])
        assert all(not math.isnan(row[2]) for row in rows)

    def test_ratio_with_vanishing_undelayed(self):
        report = ComparisonReport("manual", 3, None, None, 0.1, 0.2, 0.0)
        assert report.ratio == math.inf


class TestDelaySweep:
    def test_records_sorted_by_delay(self, store):
        base = store.get("test0").with_final_time(0.5)
        records = delay_sweep(base, [3, 1, 2, 3], max_workers=2)
        assert [r.delay_steps for r in records] == [1, 2, 3]
        for record in records:
            assert record.status == "completed"
            assert record.error is None
            assert record.trajectory is not None
            assert record.wave_count is not None
            assert record.final_amplitude == pytest.approx(
                float(np.ptp(record.trajectory.final_field)))

    def test_matches_individual_runs(self, store):
        base = store.get("test0").with_final_time(0.5)
        record = delay_sweep(base, [5])[0]
        direct = run_preset(base.with_delay(5))
        assert np.array_equal(record.trajectory.final_field, direct.final_field)

    def test_failed_run_is_recorded(self, store):
        base = store.get("test0").with_final_time(0.2)
        records = delay_sweep(base, [-1, 0])
        failed, ok = records
        assert failed.status == "error"
        assert failed.trajectory is None
        assert failed.error
        assert ok.status == "completed"

    def test_overshoot_regime(self, store):
        records = delay_sweep(store.get("test0"), [15, 18])
        by_delay = {r.delay_steps: r for r in records}
        assert isinstance(by_delay[18].overshoot_step, int)
        assert isinstance(by_delay[15].overshoot_step, int)
        assert by_delay[18].overshoot_step < by_delay[15].overshoot_step

    def test_empty_delay_list(self, store):
        with pytest.raises(UsageError):
            delay_sweep(store.get("test0"), [])


class TestParseDelayRange:
    @pytest.mark.parametrize("text, expected", [
        ("4..6", [4, 5, 6]),
        ("0..0", [0]),
        ("1, 3,5", [1, 3, 5]),
        ("8", [8]),
    ])
    def test_valid(self, text, expected):
        assert parse_delay_range(text) == expected

    @pytest.mark.parametrize("text", ["a..b", "5..4", "", "-1..2", "1,x"])
    def test_invalid(self, text):
        with pytest.raises(UsageError):
            parse_delay_range(text)


class TestHelpers:
    def test_first_step_reaching(self, short_config, unit_grid, greenshields):
        rho0 = np.full(unit_grid.nx, 0.4)
        traj = run(short_config, rho0, greenshields)
        assert first_step_reaching(traj, 0.4) == 0
        assert first_step_reaching(traj, 0.5) is None

    def test_max_density_position(self):
        grid = grid_new(0.0, 1.0, 10)
        field = np.zeros(10)
        field[3] = 0.7
        field[6] = 0.7
        assert max_density_position(field, grid) == pytest.approx(0.35)
