"""Uniform cell-centered grids and density fields."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import numpy.typing as npt

from delaylwr.config.logging import get_logger
from delaylwr.core.exceptions import ConfigurationError, LoggedError, NumericalError

logger = get_logger(__name__)

# One spatial snapshot of cell-averaged densities, length GridSpec.nx
DensityField = npt.NDArray[np.float64]

MIN_CELLS = 3


@dataclass(frozen=True, slots=True)
class GridSpec:
    """Uniform grid on [a, b] with nx cells of width dx."""

    a: float
    b: float
    nx: int
    dx: float

    @property
    def centers(self) -> npt.NDArray[np.float64]:
        """Cell centers x_i = a + (i + 1/2) dx."""
        return self.a + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def length(self) -> float:
        return self.b - self.a

    def cell_of(self, x: float) -> int:
        """Index of the cell containing x, clipped to the grid."""
        index = int(np.floor((x - self.a) / self.dx))
        return min(max(index, 0), self.nx - 1)

    def contains(self, x: float) -> bool:
        return self.a <= x <= self.b


def grid_new(a: float, b: float, nx: int) -> GridSpec:
    """Build a grid, computing dx = (b - a)/nx once.

    Raises:
        ConfigurationError: When nx < 3 or b <= a
    """
    if int(nx) != nx or nx < MIN_CELLS:
        LoggedError.log_and_raise(
            logger, ConfigurationError, f"grid.nx must be an integer >= {MIN_CELLS}, got {nx}",
            invalid_value=nx, validation_rule=f"nx >= {MIN_CELLS}"
        )
    if not b > a:
        LoggedError.log_and_raise(
            logger, ConfigurationError, f"grid.b must exceed grid.a, got a={a}, b={b}",
            invalid_value=(a, b), validation_rule="b > a"
        )
    nx = int(nx)
    return GridSpec(a=float(a), b=float(b), nx=nx, dx=(float(b) - float(a)) / nx)


def as_density_field(values: Sequence[float] | np.ndarray, grid: GridSpec) -> DensityField:
    """Validate and copy values into a float64 density field on ``grid``.

    Raises:
        ConfigurationError: When the length does not match grid.nx
        NumericalError: When any entry is NaN or infinite
    """
    field = np.array(values, dtype=np.float64).reshape(-1)
    if field.shape[0] != grid.nx:
        raise ConfigurationError(
            f"density field has {field.shape[0]} cells, grid has {grid.nx}",
            invalid_value=field.shape[0], validation_rule="len(field) == grid.nx"
        )
    bad = np.flatnonzero(~np.isfinite(field))
    if bad.size:
        raise NumericalError("density field contains non-finite values", cell=int(bad[0]))
    return field


def sup_norm(field: DensityField) -> float:
    return float(np.max(np.abs(field))) if field.size else 0.0
