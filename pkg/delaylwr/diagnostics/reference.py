"""Exact entropy solution of the undelayed Greenshields Riemann problem."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from delaylwr.config.base import DEFAULTS


def exact_riemann_greenshields(x: npt.ArrayLike, t: float, left: float, right: float, x_jump: float,
                               v_max: float = DEFAULTS['v_max'],
                               rho_max: float = DEFAULTS['rho_max']) -> npt.NDArray[np.float64]:
    """Density at positions x and time t for flux v_max rho (1 - rho/rho_max).

    The flux is concave, so left > right opens a rarefaction fan and
    left < right travels as a shock with the Rankine-Hugoniot speed.
    """
    x = np.asarray(x, dtype=np.float64)
    if t <= 0 or left == right:
        return np.where(x < x_jump, left, right).astype(np.float64)

    def char_speed(rho: float) -> float:
        return v_max * (1.0 - 2.0 * rho / rho_max)

    xi = (x - x_jump) / t
    if left < right:
        shock_speed = v_max * (1.0 - (left + right) / rho_max)
        return np.where(xi < shock_speed, left, right).astype(np.float64)

    fan = 0.5 * rho_max * (1.0 - xi / v_max)
    return np.where(xi <= char_speed(left), left,
                    np.where(xi >= char_speed(right), right, fan)).astype(np.float64)
