"""Data models for the solver: boundaries, policies, configs, diagnostics, trajectories."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np

from delaylwr.config.base import DEFAULTS, TOLERANCES
from delaylwr.core.exceptions import ConfigurationError
from delaylwr.core.grid import DensityField, GridSpec, sup_norm
from delaylwr.model.velocity import VelocityModel


@dataclass(frozen=True, slots=True)
class Periodic:
    """Indices wrap modulo nx."""

    kind = "periodic"

    def to_mapping(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True, slots=True)
class Dirichlet:
    """One ghost cell beyond each end holding a fixed density."""

    left_value: float
    right_value: float
    kind = "dirichlet"

    def to_mapping(self) -> dict:
        return {"kind": self.kind, "left": self.left_value, "right": self.right_value}


BoundaryCondition = Union[Periodic, Dirichlet]


@dataclass(frozen=True, slots=True)
class FixedStep:
    dt: float
    kind = "fixed"

    def to_mapping(self) -> dict:
        return {"kind": self.kind, "value": self.dt}


@dataclass(frozen=True, slots=True)
class AdaptiveStep:
    """Experimental: T_delta counts steps, so the physical delay drifts with dt."""

    safety: float = DEFAULTS['safety']
    kind = "adaptive"

    def to_mapping(self) -> dict:
        return {"kind": self.kind, "safety": self.safety}


StepPolicy = Union[FixedStep, AdaptiveStep]


@dataclass(frozen=True, slots=True)
class MaxSteps:
    n: int
    kind = "steps"

    def to_mapping(self) -> dict:
        return {"kind": self.kind, "value": self.n}


@dataclass(frozen=True, slots=True)
class FinalTime:
    t_f: float
    kind = "time"

    def to_mapping(self) -> dict:
        return {"kind": self.kind, "value": self.t_f}


StopCondition = Union[MaxSteps, FinalTime]


class Feasibility(str, Enum):
    """Action taken when max rho exceeds rho_max."""

    WARN = "warn"
    ABORT = "abort"


@dataclass(frozen=True, slots=True)
class SolverConfig:
    """Grid, boundary, delay, time-step policy, stop condition and feasibility policy."""

    grid: GridSpec
    dt_policy: StepPolicy
    bc: BoundaryCondition = field(default_factory=Periodic)
    t_delay_steps: int = 0
    stop: StopCondition = field(default_factory=lambda: FinalTime(DEFAULTS['t_final']))
    feasibility: Feasibility = Feasibility.WARN
    force_undelayed: bool = False

    @property
    def delay_time(self) -> Optional[float]:
        """Physical delay T = T_delta * dt; undefined under the adaptive policy."""
        if isinstance(self.dt_policy, FixedStep):
            return self.t_delay_steps * self.dt_policy.dt
        return None

    def step_budget(self) -> Optional[int]:
        """Number of steps a fixed-dt run takes, None when it depends on the data."""
        if isinstance(self.stop, MaxSteps):
            return self.stop.n
        if isinstance(self.dt_policy, FixedStep):
            return int(math.ceil(self.stop.t_f / self.dt_policy.dt - TOLERANCES['fixed_time_steps']))
        return None

    def validate(self, rho0: DensityField, model: VelocityModel) -> "SolverConfig":
        """Check the configuration against the initial datum and closure.

        Raises:
            ConfigurationError: On the first violated invariant
        """
        if int(self.t_delay_steps) != self.t_delay_steps or self.t_delay_steps < 0:
            raise ConfigurationError(f"delay_steps must be a nonnegative integer, got {self.t_delay_steps}",
                                     invalid_value=self.t_delay_steps, validation_rule="delay_steps >= 0")
        if isinstance(self.bc, Dirichlet):
            for side, value in (("left", self.bc.left_value), ("right", self.bc.right_value)):
                if not 0.0 <= value <= model.rho_max:
                    raise ConfigurationError(
                        f"bc.{side} = {value} must lie in [0, rho_max={model.rho_max}]",
                        invalid_value=value, validation_rule="0 <= bc value <= rho_max"
                    )
        if isinstance(self.dt_policy, FixedStep):
            dt = self.dt_policy.dt
            if not dt > 0:
                raise ConfigurationError(f"dt.value must be positive, got {dt}",
                                         invalid_value=dt, validation_rule="dt > 0")
            density_limit = self.grid.dx / max(sup_norm(rho0), TOLERANCES['vacuum'])
            if dt > density_limit:
                raise ConfigurationError(
                    f"fixed dt {dt} violates the CFL condition against the initial data: "
                    f"dt <= dx / max|rho0| = {density_limit:.6g}",
                    invalid_value=dt, validation_rule="dt <= dx / max|rho0|"
                )
            speed_limit = self.grid.dx / model.v_max
            if dt > speed_limit:
                raise ConfigurationError(
                    f"fixed dt {dt} exceeds dx / v_max = {speed_limit:.6g}",
                    invalid_value=dt, validation_rule="dt <= dx / v_max"
                )
        else:
            if not 0.0 < self.dt_policy.safety <= 1.0:
                raise ConfigurationError(f"dt.safety must lie in (0, 1], got {self.dt_policy.safety}",
                                         invalid_value=self.dt_policy.safety,
                                         validation_rule="0 < safety <= 1")
        if isinstance(self.stop, MaxSteps):
            if int(self.stop.n) != self.stop.n or self.stop.n < 1:
                raise ConfigurationError(f"stop.value must be a positive step count, got {self.stop.n}",
                                         invalid_value=self.stop.n, validation_rule="steps >= 1")
        elif not self.stop.t_f > 0:
            raise ConfigurationError(f"stop.value must be a positive final time, got {self.stop.t_f}",
                                     invalid_value=self.stop.t_f, validation_rule="t_f > 0")
        return self


@dataclass(slots=True)
class StepDiagnostics:
    """Per-step measurements and the bound checks evaluated on that step."""

    step: int
    time: float
    dt: float
    mass: float
    rho_min: float
    rho_max_val: float
    tv_space: float
    tv_time_increment: float
    linf_ok: bool
    tv_space_ok: bool
    overshoot: bool
    positive: bool
    tv_time_ok: bool

    @property
    def amplitude(self) -> float:
        return self.rho_max_val - self.rho_min


class TerminationKind(str, Enum):
    COMPLETED = "completed"
    FEASIBILITY_ABORT = "feasibility_abort"
    CFL_COLLAPSE = "cfl_collapse"


@dataclass(frozen=True, slots=True)
class Termination:
    kind: TerminationKind = TerminationKind.COMPLETED
    step: Optional[int] = None

    @property
    def completed(self) -> bool:
        return self.kind is TerminationKind.COMPLETED

    def describe(self) -> str:
        if self.step is None:
            return self.kind.value
        return f"{self.kind.value}@{self.step}"


@dataclass(slots=True)
class Trajectory:
    """Sparse snapshots plus per-step diagnostics of one run."""

    snapshots: List[Tuple[float, DensityField]] = field(default_factory=list)
    diagnostics: List[StepDiagnostics] = field(default_factory=list)
    termination: Termination = field(default_factory=Termination)
    first_overshoot_step: Optional[int] = None

    @property
    def final_time(self) -> float:
        return self.snapshots[-1][0]

    @property
    def final_field(self) -> DensityField:
        return self.snapshots[-1][1]

    @property
    def initial_field(self) -> DensityField:
        return self.snapshots[0][1]

    @property
    def steps_taken(self) -> int:
        return self.diagnostics[-1].step if self.diagnostics else 0

    def max_density(self, after_step: int = 0) -> float:
        """Largest density recorded at steps strictly after ``after_step``, or -inf."""
        values = [d.rho_max_val for d in self.diagnostics if d.step > after_step]
        return max(values) if values else -math.inf

    def amplitude_series(self) -> Tuple[np.ndarray, np.ndarray]:
        """(times, max - min) for every recorded step including the initial datum."""
        times = np.array([d.time for d in self.diagnostics])
        amplitudes = np.array([d.amplitude for d in self.diagnostics])
        return times, amplitudes
