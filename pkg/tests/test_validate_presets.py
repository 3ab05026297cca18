"""
Tests for the standalone preset checker.
"""

import importlib.util
from pathlib import Path

import pytest

SCRIPT = Path(__file__).resolve().parent.parent / "validate_presets.py"


@pytest.fixture(scope="module")
def checker():
    module_spec = importlib.util.spec_from_file_location("validate_presets", SCRIPT)
    module = importlib.util.module_from_spec(module_spec)
    module_spec.loader.exec_module(module)
    return module


class TestValidatePresets:
    def test_packaged_presets_pass(self, checker, capsys):
        assert checker.validate_presets() is True
        out = capsys.readouterr().out
        assert "Found 8 presets" in out
        assert "trigger: nx=100, delay=21" in out
        assert "      check: max density at final time > 0.35" in out

    def test_broken_preset_fails(self, checker, tmp_path, capsys):
        (tmp_path / "bad.yaml").write_text(
            "name: bad\ndescription: too large a step\nchecks: [none]\nextends: test0\n"
            "config:\n  dt: {kind: fixed, value: 0.05}\n",
            encoding="utf-8",
        )
        assert checker.validate_presets([tmp_path]) is False
        assert "Preset 'bad'" in capsys.readouterr().out

    def test_missing_description_warns(self, checker, tmp_path, capsys):
        (tmp_path / "bare.yaml").write_text("name: bare\nextends: test0\n", encoding="utf-8")
        assert checker.validate_presets([tmp_path]) is True
        out = capsys.readouterr().out
        assert "preset 'bare' has no description" in out
        assert "preset 'bare' lists no expected checks" in out
