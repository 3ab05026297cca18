"""Altered Lax-Friedrichs step, ghost-cell neighbours and the delayed CFL."""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from delaylwr.config.base import TOLERANCES
from delaylwr.core.exceptions import NumericalError
from delaylwr.core.grid import DensityField, GridSpec
from delaylwr.model.velocity import VelocityModel
from delaylwr.solver.models import BoundaryCondition, Dirichlet


def neighbors(field: DensityField, i: int, bc: BoundaryCondition) -> Tuple[float, float]:
    """(rho_left, rho_right) of cell i under the boundary condition."""
    nx = len(field)
    if isinstance(bc, Dirichlet):
        left = bc.left_value if i == 0 else field[i - 1]
        right = bc.right_value if i == nx - 1 else field[i + 1]
        return float(left), float(right)
    return float(field[(i - 1) % nx]), float(field[(i + 1) % nx])


def shifted(field: DensityField, bc: BoundaryCondition) -> Tuple[DensityField, DensityField]:
    """Vectorized ``neighbors`` for every cell: (left neighbours, right neighbours)."""
    if isinstance(bc, Dirichlet):
        padded = np.concatenate(([bc.left_value], field, [bc.right_value]))
        return padded[:-2], padded[2:]
    return np.roll(field, 1), np.roll(field, -1)


def lf_step(current: DensityField, delayed: DensityField, dt: float, grid: GridSpec,
            model: VelocityModel, bc: BoundaryCondition, step: Optional[int] = None) -> DensityField:
    """One altered Lax-Friedrichs step.

    rho_i^{n+1} = (rho_{i+1} + rho_{i-1})/2
                  - dt/(2 dx) (V(d_{i+1}) rho_{i+1} - V(d_{i-1}) rho_{i-1})
    with d the delayed field. With delayed == current this is the classical
    Lax-Friedrichs scheme for LWR.

    Raises:
        NumericalError: When any output cell is not finite
    """
    left, right = shifted(current, bc)
    left_delayed, right_delayed = shifted(delayed, bc)
    lam = dt / (2.0 * grid.dx)
    flux_right = model.evaluate(right_delayed) * right
    flux_left = model.evaluate(left_delayed) * left
    updated = 0.5 * (right + left) - lam * (flux_right - flux_left)

    bad = np.flatnonzero(~np.isfinite(updated))
    if bad.size:
        raise NumericalError("non-finite density produced by the Lax-Friedrichs step",
                             step=step, cell=int(bad[0]))
    return updated


def cfl_dt(current: DensityField, delayed: DensityField, grid: GridSpec, safety: float = 1.0) -> float:
    """safety * dx / max_i max(|rho_i^n|, |rho_i^{n-T}|), floored at safety * dx in vacuum."""
    sup = max(float(np.max(np.abs(current))), float(np.max(np.abs(delayed))))
    if sup < TOLERANCES['vacuum']:
        return safety * grid.dx
    return safety * grid.dx / sup
