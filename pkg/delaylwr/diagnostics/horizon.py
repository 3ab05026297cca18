"""Time horizons guaranteed by the discrete L-infinity estimates."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from delaylwr.core.exceptions import ConfigurationError
from delaylwr.diagnostics.metrics import linf_bound_delay
from delaylwr.solver.models import Trajectory


def guaranteed_horizon_geometric(dx: float, rho0_sup: float) -> float:
    """3 dx / ||rho^0||_inf, the horizon reachable under worst-case 3/2 growth per step.

    Returns +inf for a vacuum initial datum.
    """
    if rho0_sup <= 0:
        return math.inf
    return 3.0 * dx / rho0_sup


def horizon_partial_sum_delay(dx: float, rho0_max: float, dt_rho_sup: float,
                              delay_time: float, n: int) -> float:
    """dx * sum_{i=1}^{n} 1 / (rho0_max + i ||d_t rho|| T / 2).

    Diverges as n grows whenever ||d_t rho|| T > 0; report-only.
    """
    if n < 1:
        raise ConfigurationError(f"n must be at least 1, got {n}", invalid_value=n, validation_rule="n >= 1")
    if min(dx, rho0_max, dt_rho_sup, delay_time) < 0:
        raise ConfigurationError("horizon arguments must be nonnegative",
                                 invalid_value=(dx, rho0_max, dt_rho_sup, delay_time),
                                 validation_rule="all arguments >= 0")
    i = np.arange(1, int(n) + 1, dtype=np.float64)
    return float(dx * np.sum(1.0 / (rho0_max + i * 0.5 * dt_rho_sup * delay_time)))


def estimate_time_derivative_sup(trajectory: Trajectory, nx: int) -> float:
    """max over steps of tv_time_increment / (nx dt), a mean |d_t rho| per step."""
    rates = [d.tv_time_increment / (nx * d.dt) for d in trajectory.diagnostics if d.dt > 0]
    return max(rates) if rates else 0.0


def linf_delay_bound_slack(trajectory: Trajectory, delay_steps: int, delay_time: float,
                           dt_rho_sup: float) -> Optional[float]:
    """Smallest margin of the delay-dependent L-infinity bound over the recorded steps.

    A negative value means the bound was exceeded at some step; None when no step was taken.
    """
    sups = [max(abs(d.rho_max_val), abs(d.rho_min)) for d in trajectory.diagnostics]
    slacks = []
    for record in trajectory.diagnostics[1:]:
        n = record.step - 1
        bound = linf_bound_delay(sups[n], sups[max(n - delay_steps, 0)], delay_time, dt_rho_sup)
        slacks.append(bound - record.rho_max_val)
    return min(slacks) if slacks else None
