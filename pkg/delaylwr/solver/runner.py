"""Time loop around the altered Lax-Friedrichs step."""

from __future__ import annotations

import time
from typing import Optional

import numpy as np

from delaylwr.config.base import DEFAULTS, TOLERANCES
from delaylwr.config.logging import get_logger
from delaylwr.core.exceptions import ConfigurationError
from delaylwr.core.grid import DensityField, as_density_field, sup_norm
from delaylwr.core.history import history_delayed, history_init
from delaylwr.diagnostics.metrics import (
    check_linf_bound,
    check_tv_bound,
    check_tv_time_bound,
    total_mass,
    tv_space,
    tv_time_increment,
)
from delaylwr.model.velocity import VelocityModel, validate_velocity_model
from delaylwr.solver.models import (
    Feasibility,
    FinalTime,
    FixedStep,
    MaxSteps,
    SolverConfig,
    StepDiagnostics,
    Termination,
    TerminationKind,
    Trajectory,
)
from delaylwr.solver.stepper import cfl_dt, lf_step

logger = get_logger(__name__)


class SimulationRunner:
    """Advance one delayed LWR run from its initial datum to the stop condition.

    Every step is recorded in the diagnostics; snapshots are kept every
    ``snapshot_every`` steps plus the initial and final states.
    """

    def __init__(self, cfg: SolverConfig, model: VelocityModel,
                 snapshot_every: int = DEFAULTS['snapshot_every']):
        if snapshot_every < 1:
            raise ConfigurationError(f"snapshot_every must be >= 1, got {snapshot_every}",
                                     invalid_value=snapshot_every, validation_rule="snapshot_every >= 1")
        self.cfg = cfg
        self.model = validate_velocity_model(model)
        self.snapshot_every = int(snapshot_every)

    def _time_step(self, current: DensityField, delayed: DensityField, t: float) -> Optional[float]:
        """Next dt, or None when the adaptive step collapses."""
        policy = self.cfg.dt_policy
        if isinstance(policy, FixedStep):
            return policy.dt
        dx = self.cfg.grid.dx
        dt = min(cfl_dt(current, delayed, self.cfg.grid, policy.safety),
                 policy.safety * dx / self.model.v_max)
        if dt < TOLERANCES['cfl_collapse'] * dx:
            return None
        if isinstance(self.cfg.stop, FinalTime):
            dt = min(dt, self.cfg.stop.t_f - t)
        return dt

    def _finished(self, n: int, t: float) -> bool:
        stop = self.cfg.stop
        if isinstance(stop, MaxSteps):
            return n >= stop.n
        if isinstance(self.cfg.dt_policy, FixedStep):
            return n >= self.cfg.step_budget()
        return t >= stop.t_f - TOLERANCES['vacuum'] * max(1.0, stop.t_f)

    def _record(self, step: int, t: float, dt: float, field: DensityField,
                tv: float, tv_time: float, linf_ok: bool, tv_ok: bool,
                tv_time_ok: bool) -> StepDiagnostics:
        rho_max_val = float(np.max(field))
        rho_min = float(np.min(field))
        return StepDiagnostics(
            step=step,
            time=t,
            dt=dt,
            mass=total_mass(field, self.cfg.grid),
            rho_min=rho_min,
            rho_max_val=rho_max_val,
            tv_space=tv,
            tv_time_increment=tv_time,
            linf_ok=linf_ok,
            tv_space_ok=tv_ok,
            overshoot=rho_max_val > self.model.rho_max,
            positive=rho_min >= -TOLERANCES['positivity'],
            tv_time_ok=tv_time_ok,
        )

    def run(self, rho0: DensityField) -> Trajectory:
        cfg = self.cfg
        grid, bc = cfg.grid, cfg.bc
        rho0 = as_density_field(rho0, grid)
        cfg.validate(rho0, self.model)

        delay = cfg.t_delay_steps
        history = history_init(rho0, delay)
        current = history.initial
        trajectory = Trajectory(snapshots=[(0.0, current)])
        tv_current = tv_space(current, bc)
        trajectory.diagnostics.append(self._record(0, 0.0, 0.0, current, tv_current, 0.0, True, True, True))

        logger.info(
            f"Starting run: nx={grid.nx}, delay_steps={delay}, dt={cfg.dt_policy.to_mapping()}, "
            f"stop={cfg.stop.to_mapping()}, model={self.model.kind}"
        )
        started = time.perf_counter()

        n, t = 0, 0.0
        while not self._finished(n, t):
            delayed = current if cfg.force_undelayed else history_delayed(history, n, delay)
            dt = self._time_step(current, delayed, t)
            if dt is None:
                logger.warning(f"Adaptive time step collapsed at step {n + 1}")
                trajectory.termination = Termination(TerminationKind.CFL_COLLAPSE, n + 1)
                break

            updated = lf_step(current, delayed, dt, grid, self.model, bc, step=n + 1)
            n += 1
            t = n * dt if isinstance(cfg.dt_policy, FixedStep) else t + dt

            cur_sup, delayed_sup = sup_norm(current), sup_norm(delayed)
            tv_updated = tv_space(updated, bc)
            linf_ok = check_linf_bound(float(np.max(updated)), cur_sup, delayed_sup)
            tv_ok = check_tv_bound(tv_updated, tv_current, tv_space(delayed, bc), max(cur_sup, delayed_sup))
            tv_time = tv_time_increment(current, updated)
            record = self._record(n, t, dt, updated, tv_updated, tv_time, linf_ok, tv_ok,
                                  check_tv_time_bound(tv_time, current, delayed))
            trajectory.diagnostics.append(record)

            if not linf_ok:
                logger.warning(f"L-infinity bound violated at step {n}: max {record.rho_max_val}")
            if not record.positive:
                logger.warning(f"Negative density {record.rho_min} at step {n}")

            history.push(updated)
            current = history.query(n)
            tv_current = tv_updated

            if n % self.snapshot_every == 0:
                trajectory.snapshots.append((t, current))

            if record.overshoot and trajectory.first_overshoot_step is None:
                trajectory.first_overshoot_step = n
                logger.warning(
                    f"Density {record.rho_max_val:.6g} exceeds rho_max={self.model.rho_max} at step {n}; "
                    "the model is no longer reliable"
                )
                if cfg.feasibility is Feasibility.ABORT:
                    trajectory.termination = Termination(TerminationKind.FEASIBILITY_ABORT, n)
                    break

        if trajectory.snapshots[-1][0] != t:
            trajectory.snapshots.append((t, current))

        logger.info(
            f"Run finished: {trajectory.termination.describe()} after {n} steps, t={t:.6g}, "
            f"{time.perf_counter() - started:.3f} s"
        )
        return trajectory


def run(cfg: SolverConfig, rho0: DensityField, model: VelocityModel,
        snapshot_every: int = DEFAULTS['snapshot_every']) -> Trajectory:
    """Run the delayed LWR scheme described by ``cfg`` from ``rho0``."""
    return SimulationRunner(cfg, model, snapshot_every).run(rho0)
