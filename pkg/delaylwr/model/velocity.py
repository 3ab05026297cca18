"""Velocity closures V(rho) and the delayed flux V(rho_delayed) * rho_current."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Union

import numpy as np
import numpy.typing as npt

from delaylwr.config.base import DEFAULTS
from delaylwr.config.logging import get_logger
from delaylwr.core.exceptions import ConfigurationError, DomainError, LoggedError

logger = get_logger(__name__)

ArrayLike = Union[float, npt.NDArray[np.float64]]


def alpha_continuous(v_max: float, rho_f: float, rho_c: float) -> float:
    """The coefficient making the cut velocity continuous at rho_f.

    Continuity at rho_c holds for every alpha since the middle piece
    vanishes there.

    Raises:
        ConfigurationError: When rho_f <= 0 or rho_f >= rho_c
    """
    if rho_f <= 0:
        LoggedError.log_and_raise(
            logger, ConfigurationError, "no finite continuous alpha exists for rho_f = 0",
            invalid_value=rho_f, validation_rule="0 < rho_f"
        )
    if not rho_f < rho_c:
        LoggedError.log_and_raise(
            logger, ConfigurationError, f"rho_f ({rho_f}) must be below rho_c ({rho_c})",
            invalid_value=(rho_f, rho_c), validation_rule="rho_f < rho_c"
        )
    return v_max / (1.0 / rho_f - 1.0 / rho_c)


class VelocityModel(ABC):
    """Base class for the velocity closures; instances are immutable."""

    kind: str
    v_max: float
    rho_max: float

    @abstractmethod
    def evaluate(self, rho: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        """Vectorized V(rho) clipped to [0, v_max]; no domain validation."""

    @abstractmethod
    def to_mapping(self) -> dict:
        """Config mapping under the `velocity` key."""


@dataclass(frozen=True, slots=True)
class Greenshields(VelocityModel):
    """Linear law V = v_max (1 - rho/rho_max), cut at zero above rho_max."""

    v_max: float = DEFAULTS['v_max']
    rho_max: float = DEFAULTS['rho_max']
    kind = "greenshields"

    def evaluate(self, rho):
        return np.clip(self.v_max * (1.0 - rho / self.rho_max), 0.0, self.v_max)

    def to_mapping(self) -> dict:
        return {"kind": self.kind, "v_max": self.v_max, "rho_max": self.rho_max}


@dataclass(frozen=True, slots=True)
class CutPiecewise(VelocityModel):
    """Free flow below rho_f, alpha (1/rho - 1/rho_c) up to rho_c, zero beyond.

    ``alpha_auto`` records that alpha was derived by alpha_continuous.
    """

    v_max: float
    rho_f: float
    rho_c: float
    alpha: float
    rho_max: float = DEFAULTS['rho_max']
    alpha_auto: bool = False
    kind = "cut"

    @classmethod
    def continuous(cls, v_max: float, rho_f: float, rho_c: float,
                   rho_max: float = DEFAULTS['rho_max']) -> "CutPiecewise":
        return cls(v_max=v_max, rho_f=rho_f, rho_c=rho_c,
                   alpha=alpha_continuous(v_max, rho_f, rho_c),
                   rho_max=rho_max, alpha_auto=True)

    def evaluate(self, rho):
        rho = np.asarray(rho, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            congested = self.alpha * (1.0 / rho - 1.0 / self.rho_c)
        speed = np.where(rho <= self.rho_f, self.v_max,
                         np.where(rho < self.rho_c, congested, 0.0))
        return np.clip(speed, 0.0, self.v_max)

    def to_mapping(self) -> dict:
        return {
            "kind": self.kind,
            "v_max": self.v_max,
            "rho_max": self.rho_max,
            "rho_f": self.rho_f,
            "rho_c": self.rho_c,
            "alpha": "auto" if self.alpha_auto else self.alpha,
        }


def validate_velocity_model(model: VelocityModel) -> VelocityModel:
    """Check the closure's parameter invariants.

    Raises:
        ConfigurationError: On any violated invariant
    """
    if not model.v_max > 0 or not model.rho_max > 0:
        raise ConfigurationError("velocity.v_max and velocity.rho_max must be positive",
                                 invalid_value=(model.v_max, model.rho_max),
                                 validation_rule="v_max > 0, rho_max > 0")
    # the discrete estimates assume |V| <= rho_max
    if model.v_max > model.rho_max:
        raise ConfigurationError(
            f"velocity.v_max ({model.v_max}) must not exceed velocity.rho_max ({model.rho_max})",
            invalid_value=model.v_max, validation_rule="v_max <= rho_max"
        )
    if isinstance(model, CutPiecewise):
        if not 0 <= model.rho_f < model.rho_c <= model.rho_max:
            raise ConfigurationError(
                f"cut velocity needs 0 <= rho_f < rho_c <= rho_max, got "
                f"rho_f={model.rho_f}, rho_c={model.rho_c}, rho_max={model.rho_max}",
                invalid_value=(model.rho_f, model.rho_c),
                validation_rule="0 <= rho_f < rho_c <= rho_max"
            )
        if not model.alpha > 0:
            raise ConfigurationError(f"velocity.alpha must be positive, got {model.alpha}",
                                     invalid_value=model.alpha, validation_rule="alpha > 0")
    return model


def velocity(model: VelocityModel, rho: ArrayLike) -> ArrayLike:
    """V(rho), always in [0, v_max].

    Raises:
        DomainError: When any rho is negative
    """
    values = np.asarray(rho, dtype=np.float64)
    if np.any(values < 0):
        raise DomainError(f"velocity is undefined for negative density {np.min(values)}",
                          value=float(np.min(values)))
    result = model.evaluate(values)
    if np.ndim(result) == 0:
        return float(result)
    return result


def flux(model: VelocityModel, rho_delayed: ArrayLike, rho_current: ArrayLike) -> ArrayLike:
    """Delayed flux f = V(rho_delayed) * rho_current.

    Raises:
        DomainError: When either density is negative
    """
    current = np.asarray(rho_current, dtype=np.float64)
    if np.any(current < 0):
        raise DomainError(f"flux is undefined for negative density {np.min(current)}",
                          value=float(np.min(current)))
    result = np.asarray(velocity(model, rho_delayed)) * current
    if np.ndim(result) == 0:
        return float(result)
    return result
