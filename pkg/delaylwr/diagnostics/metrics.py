"""Discrete estimates and experiment metrics computed on density fields."""

from __future__ import annotations

import numpy as np
from scipy.signal import find_peaks

from delaylwr.config.base import DEFAULTS, TOLERANCES
from delaylwr.config.logging import get_logger
from delaylwr.core.exceptions import ConfigurationError
from delaylwr.core.grid import DensityField, GridSpec
from delaylwr.solver.models import BoundaryCondition, Dirichlet

logger = get_logger(__name__)


def total_mass(field: DensityField, grid: GridSpec) -> float:
    """dx * sum_i rho_i."""
    return grid.dx * float(np.sum(field))


def tv_space(field: DensityField, bc: BoundaryCondition) -> float:
    """Sum of |rho_{j+1} - rho_j| over every interface, including wrap or ghost interfaces."""
    if isinstance(bc, Dirichlet):
        extended = np.concatenate(([bc.left_value], field, [bc.right_value]))
        return float(np.sum(np.abs(np.diff(extended))))
    return float(np.sum(np.abs(field - np.roll(field, 1))))


def tv_time_increment(prev: DensityField, next_field: DensityField) -> float:
    """sum_i |next_i - prev_i|."""
    return float(np.sum(np.abs(next_field - prev)))


def check_linf_bound(next_max: float, cur_max: float, delayed_max: float) -> bool:
    """max rho^{n+1} <= 3/2 max(|rho^n|, |rho^{n-T}|) up to rounding slack."""
    return next_max <= 1.5 * max(cur_max, delayed_max) + TOLERANCES['bound']


def check_tv_bound(tv_next: float, tv_cur: float, tv_delayed: float, m: float) -> bool:
    """TV(rho^{n+1}) <= 2 (5 + 1/m) max(TV(rho^n), TV(rho^{n-T})).

    A vanishing m with positive tv_next makes the bound vacuous; that case is
    logged as an anomaly and reported as a failed check.
    """
    if m <= 0:
        if tv_next > TOLERANCES['bound']:
            logger.warning(f"Vacuous TV bound: sup density is 0 but TV is {tv_next}")
            return False
        return True
    return tv_next <= 2.0 * (5.0 + 1.0 / m) * max(tv_cur, tv_delayed) + TOLERANCES['bound']


def linf_bound_delay(cur_max: float, delayed_max: float, delay_time: float, dt_rho_sup: float) -> float:
    """Delay-dependent alternative L-infinity bound max(|rho^n|, |rho^{n-T}|) + T ||d_t rho|| / 2."""
    return max(cur_max, delayed_max) + 0.5 * delay_time * dt_rho_sup


def tv_time_bound(current: DensityField, delayed: DensityField) -> float:
    """Loose bound sum_j (4 max(|rho_j^{n-T}|, |rho_j^n|) + 2) on the TV increment in time."""
    return float(np.sum(4.0 * np.maximum(np.abs(current), np.abs(delayed)) + 2.0))


def check_tv_time_bound(increment: float, current: DensityField, delayed: DensityField) -> bool:
    return increment <= tv_time_bound(current, delayed) + TOLERANCES['bound']


def amplitude(field: DensityField) -> float:
    """max - min over cells."""
    return float(np.max(field) - np.min(field))


def count_waves(field: DensityField, min_prominence: float = DEFAULTS['wave_prominence']) -> int:
    """Number of crests on the periodic circle with prominence >= min_prominence.

    The field is rotated to start at its global minimum and closed with that
    minimum, so prominences computed on the line equal those on the circle.
    Plateaus count once.
    """
    if not min_prominence > 0:
        raise ConfigurationError(f"min_prominence must be positive, got {min_prominence}",
                                 invalid_value=min_prominence, validation_rule="min_prominence > 0")
    values = np.asarray(field, dtype=np.float64)
    if values.size < 3 or np.all(values == values[0]):
        return 0
    start = int(np.argmin(values))
    rotated = np.roll(values, -start)
    closed = np.concatenate((rotated, rotated[:1]))
    peaks, _ = find_peaks(closed, prominence=min_prominence)
    return len(_merge_shallow_dips(closed, peaks, min_prominence))


def _merge_shallow_dips(values: np.ndarray, peaks: np.ndarray, min_prominence: float) -> list:
    """Fold neighbouring crests into one when the dip between them is shallower than min_prominence.

    scipy only stops a prominence walk at a strictly higher peak, so twin crests
    of equal height both get the full prominence.
    """
    kept: list = []
    for peak in peaks:
        if kept:
            last = kept[-1]
            dip = float(np.min(values[last:peak + 1]))
            if min(values[last], values[peak]) - dip < min_prominence:
                if values[peak] > values[last]:
                    kept[-1] = int(peak)
                continue
        kept.append(int(peak))
    return kept


def l1_error(field: DensityField, exact: np.ndarray, grid: GridSpec) -> float:
    """dx * sum_i |rho_i - exact_i|."""
    return grid.dx * float(np.sum(np.abs(np.asarray(field) - np.asarray(exact))))
