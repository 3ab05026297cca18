"""Initial conditions: deterministic functions of the grid."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from delaylwr.config.logging import get_logger
from delaylwr.core.exceptions import ConfigurationError
from delaylwr.core.grid import DensityField, GridSpec

logger = get_logger(__name__)


def _check_density(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ConfigurationError(f"initial.{name} = {value} must lie in [0, 1]",
                                 invalid_value=value, validation_rule=f"0 <= {name} <= 1")


def ic_sinusoidal(grid: GridSpec, k: int) -> DensityField:
    """5/8 + (1/8) sin(2 k pi x_i) at cell centers."""
    if int(k) != k or k < 1:
        raise ConfigurationError(f"initial.k must be a positive integer, got {k}",
                                 invalid_value=k, validation_rule="k >= 1")
    return 5.0 / 8.0 + np.sin(2.0 * int(k) * np.pi * grid.centers) / 8.0


def ic_riemann(grid: GridSpec, left: float, right: float, x_jump: float) -> DensityField:
    """left where x_i < x_jump, right elsewhere."""
    _check_density("left", left)
    _check_density("right", right)
    return np.where(grid.centers < x_jump, float(left), float(right))


def ic_cell_perturbation(grid: GridSpec, ambient: float, bump: float, lo: float, hi: float) -> DensityField:
    """Raise cells whose centers lie in [lo, hi] to ``bump``.

    When no center falls inside, the single cell containing (lo + hi)/2 is
    raised instead.
    """
    _check_density("ambient", ambient)
    _check_density("bump", bump)
    if not lo < hi:
        raise ConfigurationError(f"initial.lo ({lo}) must be below initial.hi ({hi})",
                                 invalid_value=(lo, hi), validation_rule="lo < hi")
    if not (grid.contains(lo) and grid.contains(hi)):
        raise ConfigurationError(f"perturbation [{lo}, {hi}] lies outside the domain [{grid.a}, {grid.b}]",
                                 invalid_value=(lo, hi), validation_rule="a <= lo < hi <= b")
    centers = grid.centers
    field = np.full(grid.nx, float(ambient))
    inside = (centers >= lo) & (centers <= hi)
    if inside.any():
        field[inside] = bump
    else:
        cell = grid.cell_of(0.5 * (lo + hi))
        logger.debug(f"Perturbation [{lo}, {hi}] holds no cell center, raising cell {cell}")
        field[cell] = bump
    return field


def ic_constant(grid: GridSpec, value: float) -> DensityField:
    _check_density("value", value)
    return np.full(grid.nx, float(value))


class InitialCondition(ABC):
    """A rule producing the initial density field on a grid."""

    kind: str

    @abstractmethod
    def build(self, grid: GridSpec) -> DensityField:
        """Evaluate the rule on ``grid``."""

    @abstractmethod
    def to_mapping(self) -> dict:
        """Config mapping under the `initial` key."""


@dataclass(frozen=True, slots=True)
class Sinusoidal(InitialCondition):
    k: int = 1
    kind = "sinusoidal"

    def build(self, grid: GridSpec) -> DensityField:
        return ic_sinusoidal(grid, self.k)

    def to_mapping(self) -> dict:
        return {"kind": self.kind, "k": self.k}


@dataclass(frozen=True, slots=True)
class Riemann(InitialCondition):
    left: float
    right: float
    x_jump: float
    kind = "riemann"

    def build(self, grid: GridSpec) -> DensityField:
        return ic_riemann(grid, self.left, self.right, self.x_jump)

    def to_mapping(self) -> dict:
        return {"kind": self.kind, "left": self.left, "right": self.right, "x_jump": self.x_jump}


@dataclass(frozen=True, slots=True)
class CellPerturbation(InitialCondition):
    ambient: float
    bump: float
    lo: float
    hi: float
    kind = "perturbation"

    def build(self, grid: GridSpec) -> DensityField:
        return ic_cell_perturbation(grid, self.ambient, self.bump, self.lo, self.hi)

    def to_mapping(self) -> dict:
        return {"kind": self.kind, "ambient": self.ambient, "bump": self.bump, "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True, slots=True)
class Constant(InitialCondition):
    value: float
    kind = "constant"

    def build(self, grid: GridSpec) -> DensityField:
        return ic_constant(grid, self.value)

    def to_mapping(self) -> dict:
        return {"kind": self.kind, "value": self.value}
