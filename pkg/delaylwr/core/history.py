"""Ring buffer holding the last T_delta + 1 density fields of a run."""

from __future__ import annotations

from collections import deque
from typing import Deque

import numpy as np

from delaylwr.config.logging import get_logger
from delaylwr.core.exceptions import ConfigurationError, HistoryError
from delaylwr.core.grid import DensityField

logger = get_logger(__name__)


def _frozen_copy(field: DensityField) -> DensityField:
    stored = np.array(field, dtype=np.float64, copy=True)
    stored.setflags(write=False)
    return stored


class HistoryBuffer:
    """Delay history for one run.

    Slot k holds the field of step ``head - len + 1 + k``. The buffer is
    pre-filled with the initial field, so every step <= 0 resolves to rho0
    (constant-in-time history on [-T, 0]).
    """

    def __init__(self, rho0: DensityField, t_delay_steps: int):
        if int(t_delay_steps) != t_delay_steps or t_delay_steps < 0:
            raise ConfigurationError(
                f"delay_steps must be a nonnegative integer, got {t_delay_steps}",
                invalid_value=t_delay_steps, validation_rule="delay_steps >= 0"
            )
        self.t_delay_steps = int(t_delay_steps)
        self.capacity = self.t_delay_steps + 1
        self.initial = _frozen_copy(rho0)
        self.head = 0
        self._slots: Deque[DensityField] = deque(
            (self.initial for _ in range(self.capacity)), maxlen=self.capacity
        )

    def __len__(self) -> int:
        return len(self._slots)

    @property
    def oldest_step(self) -> int:
        return self.head - len(self._slots) + 1

    def push(self, field: DensityField) -> None:
        """Store the field of step head + 1, evicting the oldest slot."""
        self._slots.append(_frozen_copy(field))
        self.head += 1

    def query(self, step: int) -> DensityField:
        """Return the field stored for ``step``.

        Raises:
            HistoryError: When step lies outside [head - T_delta, head] and is positive
        """
        if step <= 0:
            return self.initial
        if not self.oldest_step <= step <= self.head:
            raise HistoryError(
                f"step {step} is outside the retained window",
                step=step, window=(self.oldest_step, self.head)
            )
        return self._slots[step - self.oldest_step]


def history_init(rho0: DensityField, t_delay_steps: int) -> HistoryBuffer:
    """Create a buffer of capacity t_delay_steps + 1 pre-filled with rho0."""
    buffer = HistoryBuffer(rho0, t_delay_steps)
    logger.debug(f"History initialized with capacity {buffer.capacity}")
    return buffer


def history_delayed(buf: HistoryBuffer, n: int, t_delay_steps: int) -> DensityField:
    """Field of step max(n - T_delta, <=0 -> initial) for a buffer whose head is n.

    Raises:
        HistoryError: When n is not the buffer head or the delay does not match
    """
    if t_delay_steps != buf.t_delay_steps:
        raise HistoryError(
            f"delay {t_delay_steps} does not match the buffer delay {buf.t_delay_steps}", step=n
        )
    if n != buf.head:
        raise HistoryError(f"step {n} is not the buffer head {buf.head}", step=n,
                           window=(buf.oldest_step, buf.head))
    return buf.query(n - t_delay_steps)
