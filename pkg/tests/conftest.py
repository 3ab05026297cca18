"""
Shared fixtures for the delaylwr test suite.
"""

import os
import tempfile

# keep test runs out of the user's log directory
os.environ.setdefault("DELAYLWR_LOG_DIR", tempfile.mkdtemp(prefix="delaylwr-logs-"))

import numpy as np
import pytest

from delaylwr.core.grid import grid_new
from delaylwr.experiments.presets import PresetStore
from delaylwr.model.velocity import CutPiecewise, Greenshields
from delaylwr.solver.models import FixedStep, MaxSteps, Periodic, SolverConfig


@pytest.fixture
def unit_grid():
    """The [0, 1] grid with dx = 0.02 used by most experiments."""
    return grid_new(0.0, 1.0, 50)


@pytest.fixture
def greenshields():
    return Greenshields(v_max=1.0, rho_max=1.0)


@pytest.fixture
def cut_velocity():
    return CutPiecewise.continuous(1.0, 0.2, 0.75)


@pytest.fixture
def short_config(unit_grid):
    """Periodic, fixed dt = 0.01, 20 steps, no delay."""
    return SolverConfig(grid=unit_grid, bc=Periodic(), t_delay_steps=0,
                        dt_policy=FixedStep(0.01), stop=MaxSteps(20))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def store():
    """Packaged presets only, independent of the user's preset directory."""
    return PresetStore(include_user_dir=False)


@pytest.fixture
def run_yaml(tmp_path):
    """Write a YAML run configuration and return its path."""
    def _write(text, name="run.yaml"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write


TEST0_YAML = """\
name: test0
grid: {a: 0.0, b: 1.0, nx: 50}
bc: {kind: periodic}
delay_steps: 15
dt: {kind: fixed, value: 0.01}
stop: {kind: time, value: 3.0}
feasibility: warn
velocity: {kind: greenshields, v_max: 1.0, rho_max: 1.0}
initial: {kind: sinusoidal, k: 1}
"""


@pytest.fixture
def sample_config_text():
    return TEST0_YAML
