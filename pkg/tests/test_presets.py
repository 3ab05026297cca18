"""
Tests for the experiment preset store.
"""

import logging

import pytest

from delaylwr.config.manager import config_to_mapping
from delaylwr.core.exceptions import ConfigurationError, UsageError
from delaylwr.experiments.initial import CellPerturbation, Riemann, Sinusoidal
from delaylwr.experiments.presets import PresetStore, merge_mappings
from delaylwr.model.velocity import CutPiecewise, Greenshields
from delaylwr.solver.models import Dirichlet, FinalTime, FixedStep, Periodic

PACKAGED = ["test0", "test0-lwr", "test0-overshoot", "test1-k1", "test1-k2",
            "test2", "test2-lowdelay", "trigger"]


def _without(mapping, *keys):
    return {k: v for k, v in mapping.items() if k not in keys}


class TestPackagedPresets:
    """The presets shipped with the package."""

    def test_all_names_listed(self, store):
        assert store.list_names() == sorted(PACKAGED)

    def test_all_load(self, store):
        loaded = store.load_all()
        assert [p.name for p in loaded] == sorted(PACKAGED)
        for item in loaded:
            assert item.description
            assert item.expected_checks

    def test_test0(self, store):
        test0 = store.get("test0")
        solver = test0.solver_config
        assert solver.grid.nx == 50 and solver.grid.dx == pytest.approx(0.02)
        assert isinstance(solver.bc, Periodic)
        assert solver.t_delay_steps == 15
        assert solver.dt_policy == FixedStep(0.01)
        assert solver.stop == FinalTime(3.0)
        assert solver.delay_time == pytest.approx(0.15)
        assert test0.velocity_model == Greenshields(1.0, 1.0)
        assert test0.initial_condition == Sinusoidal(k=1)
        assert test0.run_config.name == "test0"

    def test_lwr_twin_differs_only_in_delay(self, store):
        base = config_to_mapping(store.get("test0").run_config)
        twin = config_to_mapping(store.get("test0-lwr").run_config)
        assert twin["delay_steps"] == 0
        assert _without(twin, "name", "delay_steps") == _without(base, "name", "delay_steps")

    def test_delays(self, store):
        delays = {name: store.get(name).solver_config.t_delay_steps for name in PACKAGED}
        assert delays == {
            "test0": 15, "test0-lwr": 0, "test0-overshoot": 18, "test1-k1": 16, "test1-k2": 22,
            "test2": 10, "test2-lowdelay": 4, "trigger": 21,
        }

    def test_test1_wave_numbers(self, store):
        assert store.get("test1-k1").initial_condition == Sinusoidal(k=1)
        assert store.get("test1-k2").initial_condition == Sinusoidal(k=2)

    def test_test2_cut_velocity(self, store):
        test2 = store.get("test2")
        model = test2.velocity_model
        assert isinstance(model, CutPiecewise)
        assert model.alpha_auto
        assert model.alpha == pytest.approx(3.0 / 11.0)
        assert test2.initial_condition == Riemann(left=0.6, right=0.1, x_jump=0.5)

    def test_trigger(self, store):
        trigger = store.get("trigger")
        solver = trigger.solver_config
        assert (solver.grid.a, solver.grid.b, solver.grid.nx) == (0.0, 2.0, 100)
        assert solver.bc == Dirichlet(0.2, 0.2)
        assert solver.step_budget() == 334
        assert isinstance(trigger.initial_condition, CellPerturbation)

    def test_lookup_is_case_insensitive(self, store):
        assert store.get("TEST0").name == "test0"


class TestUnknownPreset:
    def test_get_lists_valid_names(self, store):
        with pytest.raises(UsageError) as exc_info:
            store.get("nope")
        assert exc_info.value.valid_choices == sorted(PACKAGED)
        assert "test0" in str(exc_info.value)

    def test_find_returns_none(self, store):
        assert store.find("nope") is None


class TestPresetVariants:
    def test_with_delay(self, store):
        base = store.get("test0")
        variant = base.with_delay(18)
        assert variant.solver_config.t_delay_steps == 18
        assert variant.name == base.name
        assert base.solver_config.t_delay_steps == 15

    def test_with_final_time(self, store):
        variant = store.get("test0").with_final_time(0.5)
        assert variant.solver_config.stop == FinalTime(0.5)
        assert variant.solver_config.step_budget() == 50

    def test_negative_delay_rejected(self, store):
        with pytest.raises(ConfigurationError):
            store.get("test0").with_delay(-1)


class TestUserPresets:
    """Presets in extra directories, including broken ones."""

    def test_extends_packaged_preset(self, tmp_path):
        (tmp_path / "mine.yaml").write_text(
            "name: mine\ndescription: shorter test0\nextends: test0\nconfig:\n  stop: {kind: time, value: 1.0}\n",
            encoding="utf-8",
        )
        store = PresetStore(extra_dirs=[tmp_path], include_user_dir=False)
        mine = store.get("mine")
        assert mine.solver_config.stop == FinalTime(1.0)
        assert mine.solver_config.t_delay_steps == 15

    def test_packaged_name_cannot_be_shadowed(self, tmp_path, caplog):
        (tmp_path / "test0.yaml").write_text(
            "name: test0\ndescription: local copy\nextends: test2\nconfig:\n  delay_steps: 3\n",
            encoding="utf-8",
        )
        store = PresetStore(extra_dirs=[tmp_path], include_user_dir=False)
        with caplog.at_level(logging.WARNING):
            test0 = store.get("test0")
        assert test0.solver_config.t_delay_steps == 15
        assert test0.description != "local copy"
        assert any("packaged preset name" in record.getMessage() for record in caplog.records)

    def test_cycle_detected(self, tmp_path):
        (tmp_path / "a.yaml").write_text("name: a\nextends: b\nconfig: {}\n", encoding="utf-8")
        (tmp_path / "b.yaml").write_text("name: b\nextends: a\nconfig: {}\n", encoding="utf-8")
        store = PresetStore(extra_dirs=[tmp_path], include_user_dir=False)
        with pytest.raises(ConfigurationError, match="cycle"):
            store.build("a")

    def test_unknown_parent(self, tmp_path):
        (tmp_path / "orphan.yaml").write_text("name: orphan\nextends: missing\n", encoding="utf-8")
        store = PresetStore(extra_dirs=[tmp_path], include_user_dir=False)
        with pytest.raises(ConfigurationError, match="missing"):
            store.build("orphan")

    def test_unknown_preset_key(self, tmp_path):
        (tmp_path / "odd.yaml").write_text("name: odd\nextends: test0\ncolour: red\n", encoding="utf-8")
        store = PresetStore(extra_dirs=[tmp_path], include_user_dir=False)
        with pytest.raises(ConfigurationError, match="colour"):
            store.build("odd")

    def test_broken_presets_skipped_by_load_all(self, tmp_path):
        (tmp_path / "odd.yaml").write_text("name: odd\nextends: test0\ncolour: red\n", encoding="utf-8")
        (tmp_path / "garbage.yaml").write_text("name: [unclosed\n", encoding="utf-8")
        store = PresetStore(extra_dirs=[tmp_path], include_user_dir=False)
        assert [p.name for p in store.load_all()] == sorted(PACKAGED)


class TestMergeMappings:
    def test_nested_merge(self):
        base = {"dt": {"kind": "fixed", "value": 0.01}, "delay_steps": 15}
        merged = merge_mappings(base, {"dt": {"value": 0.005}})
        assert merged == {"dt": {"kind": "fixed", "value": 0.005}, "delay_steps": 15}

    def test_kind_change_replaces_section(self):
        base = {"dt": {"kind": "fixed", "value": 0.01}}
        merged = merge_mappings(base, {"dt": {"kind": "adaptive", "safety": 0.9}})
        assert merged == {"dt": {"kind": "adaptive", "safety": 0.9}}

    def test_inputs_untouched(self):
        base = {"grid": {"a": 0.0, "b": 1.0, "nx": 50}}
        merge_mappings(base, {"grid": {"nx": 100}})
        assert base["grid"]["nx"] == 50
