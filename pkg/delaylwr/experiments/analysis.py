"""Delayed-versus-undelayed comparison and delay sweeps over a preset."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np

from delaylwr.config.base import DEFAULTS, SWEEP_CONFIG
from delaylwr.config.logging import SimulationLogger, get_logger
from delaylwr.core.exceptions import SimulationException, UsageError
from delaylwr.core.grid import DensityField, GridSpec
from delaylwr.diagnostics.metrics import amplitude, count_waves
from delaylwr.experiments.presets import Preset
from delaylwr.model.velocity import CutPiecewise
from delaylwr.solver.models import Trajectory
from delaylwr.solver.runner import SimulationRunner

logger = get_logger(__name__)


def run_preset(preset: Preset) -> Trajectory:
    """Run a preset from its own initial condition."""
    config = preset.run_config
    runner = SimulationRunner(config.solver, config.velocity, config.snapshot_every)
    return runner.run(config.initial_field())


@dataclass(slots=True)
class ComparisonReport:
    """Amplitude of a delayed run against its undelayed twin on the same initial datum."""

    preset_name: str
    delay_steps: int
    delayed: Trajectory
    undelayed: Trajectory
    initial_amplitude: float
    final_amplitude_delayed: float
    final_amplitude_undelayed: float

    @property
    def ratio(self) -> float:
        """delayed / undelayed final amplitude; 1 when both vanish."""
        if self.final_amplitude_undelayed == 0.0:
            return 1.0 if self.final_amplitude_delayed == 0.0 else math.inf
        return self.final_amplitude_delayed / self.final_amplitude_undelayed

    def amplitude_rows(self) -> List[Tuple[int, float, float, float]]:
        """(step, time, amplitude_delayed, amplitude_undelayed) aligned by step; NaN past a shorter run."""
        delayed = {d.step: d for d in self.delayed.diagnostics}
        undelayed = {d.step: d for d in self.undelayed.diagnostics}
        rows = []
        for step in sorted(set(delayed) | set(undelayed)):
            d, u = delayed.get(step), undelayed.get(step)
            time = d.time if d is not None else u.time
            rows.append((step, time,
                         d.amplitude if d is not None else math.nan,
                         u.amplitude if u is not None else math.nan))
        return rows


def compare_delayed_undelayed(base: Preset) -> ComparisonReport:
    """Run ``base`` and its delay-free twin and compare amplitudes at the final time."""
    if base.solver_config.t_delay_steps < 1:
        logger.warning(f"Preset {base.name} has no delay; comparing it with itself")
    twin = base.with_delay(0)
    delayed = run_preset(base)
    undelayed = run_preset(twin)
    report = ComparisonReport(
        preset_name=base.name,
        delay_steps=base.solver_config.t_delay_steps,
        delayed=delayed,
        undelayed=undelayed,
        initial_amplitude=amplitude(delayed.initial_field),
        final_amplitude_delayed=amplitude(delayed.final_field),
        final_amplitude_undelayed=amplitude(undelayed.final_field),
    )
    logger.info(
        f"Comparison {base.name}: initial {report.initial_amplitude:.6g}, "
        f"delayed {report.final_amplitude_delayed:.6g}, undelayed {report.final_amplitude_undelayed:.6g}"
    )
    return report


@dataclass(slots=True)
class SweepRecord:
    delay_steps: int
    status: str
    final_amplitude: float = math.nan
    wave_count: Optional[int] = None
    overshoot_step: Optional[int] = None
    sg_flag: bool = False
    max_density: float = math.nan
    rho_c_step: Optional[int] = None
    trajectory: Optional[Trajectory] = None
    error: Optional[str] = None


def first_step_reaching(trajectory: Trajectory, level: float) -> Optional[int]:
    for record in trajectory.diagnostics:
        if record.rho_max_val >= level:
            return record.step
    return None


def shows_stop_and_go(trajectory: Trajectory, preset: Preset) -> bool:
    """Final amplitude at least the initial one and, under the cut velocity, some cell reached rho_c."""
    grows = amplitude(trajectory.final_field) >= amplitude(trajectory.initial_field)
    model = preset.velocity_model
    if isinstance(model, CutPiecewise):
        return grows and first_step_reaching(trajectory, model.rho_c) is not None
    return grows


def _sweep_one(base: Preset, delay: int, min_prominence: float) -> SweepRecord:
    try:
        variant = base.with_delay(delay)
        trajectory = run_preset(variant)
    except SimulationException as exc:
        logger.error(f"Sweep run with delay {delay} failed: {exc}")
        return SweepRecord(delay_steps=delay, status="error", error=str(exc))
    except Exception as exc:
        SimulationLogger.log_exception(logger, f"Unexpected error in sweep run with delay {delay}", exc)
        return SweepRecord(delay_steps=delay, status="error", error=str(exc))

    model = variant.velocity_model
    return SweepRecord(
        delay_steps=delay,
        status=trajectory.termination.describe(),
        final_amplitude=amplitude(trajectory.final_field),
        wave_count=count_waves(trajectory.final_field, min_prominence),
        overshoot_step=trajectory.first_overshoot_step,
        sg_flag=shows_stop_and_go(trajectory, variant),
        max_density=trajectory.max_density(),
        rho_c_step=first_step_reaching(trajectory, model.rho_c) if isinstance(model, CutPiecewise) else None,
        trajectory=trajectory,
    )


def delay_sweep(base: Preset, delays: Iterable[int],
                min_prominence: float = DEFAULTS['wave_prominence'],
                max_workers: Optional[int] = None) -> List[SweepRecord]:
    """One run per delay, executed in parallel; records come back ordered by delay.

    A failing run is recorded with status ``error`` and the sweep continues.

    Raises:
        UsageError: When no delay is given
    """
    delays = sorted({int(d) for d in delays})
    if not delays:
        raise UsageError("delay sweep needs at least one delay")
    workers = max_workers or min(SWEEP_CONFIG['max_workers'], len(delays))
    logger.info(f"Sweeping {base.name} over delays {delays} with {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        records = list(pool.map(lambda d: _sweep_one(base, d, min_prominence), delays))
    return sorted(records, key=lambda r: r.delay_steps)


def parse_delay_range(text: str) -> List[int]:
    """``K1..K2`` (inclusive) or a comma-separated list of delays.

    Raises:
        UsageError: When the text is neither form or a delay is negative
    """
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = (int(part) for part in text.split("..", 1))
            delays = list(range(lo, hi + 1))
        else:
            delays = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse delays '{text}', expected K1..K2 or K1,K2,...",
                         original_error=exc) from exc
    if not delays:
        raise UsageError(f"delay range '{text}' is empty")
    if min(delays) < 0:
        raise UsageError(f"delays must be nonnegative, got {min(delays)}")
    return delays


def max_density_position(field: DensityField, grid: GridSpec) -> float:
    """Cell center holding the maximum density (first cell on ties)."""
    return float(grid.centers[int(np.argmax(field))])
