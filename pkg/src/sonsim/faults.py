"""Stochastic fault/clear events and the per-type alarm register.

Four alarm types afflict the cluster: a wind-drifted sector azimuth, a
neighbour cell outage, a lost transmit-diversity path, and a feeder fault
costing 3 dB of signal.  Events 5..8 are the matching spontaneous clears
(event k clears alarm k-4); they are only admissible while that alarm is
active.  The register keeps one occurrence counter per alarm type; the
type's bit reads as set while its counter is positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

FEEDER_LOSS_DB = 3.0
DEFAULT_AZIMUTH_DELTA_DEG = 30.0
NUM_ALARM_TYPES = 4


class FaultKind(IntEnum):
    NORMAL = 0
    AZIMUTH_DRIFT = 1
    NEIGHBOR_DOWN = 2
    DIVERSITY_LOST = 3
    FEEDER_FAULT = 4
    AZIMUTH_RESTORED = 5
    NEIGHBOR_RESTORED = 6
    DIVERSITY_RESTORED = 7
    FEEDER_RESTORED = 8


ALARM_KINDS = (FaultKind.AZIMUTH_DRIFT, FaultKind.NEIGHBOR_DOWN,
               FaultKind.DIVERSITY_LOST, FaultKind.FEEDER_FAULT)


def paired_alarm(clear_kind: FaultKind) -> FaultKind:
    """Alarm type a spontaneous clear event acts on."""
    if not FaultKind.AZIMUTH_RESTORED <= clear_kind <= FaultKind.FEEDER_RESTORED:
        raise ValueError(f"{clear_kind!r} is not a clear event")
    return FaultKind(clear_kind - NUM_ALARM_TYPES)


@dataclass
class FaultRates:
    """Categorical event probabilities over the nine event kinds.

    Accepts five probabilities (normal + four faults, clears all zero) or
    the full nine.  Defaults: normal 5/9, each fault 1/9, no spontaneous
    clears.
    """

    p: tuple = (5 / 9, 1 / 9, 1 / 9, 1 / 9, 1 / 9, 0.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        if len(p) == 5:
            p = p + (0.0,) * 4
        if len(p) != 9:
            raise ValueError("need 5 or 9 event probabilities")
        if any(x < 0 for x in p):
            raise ValueError("event probabilities must be non-negative")
        if abs(sum(p) - 1.0) > 1e-9:
            raise ValueError(f"event probabilities sum to {sum(p)!r}, expected 1")
        self.p = p
        self._cumulative = np.cumsum(np.asarray(p))
        support = [i for i, x in enumerate(p) if x > 0]
        self._last_support = support[-1] if support else 0


class FaultRegister:
    """Occurrence counters per alarm type, plus the order neighbour cells
    went down (so restores bring them back oldest-first)."""

    def __init__(self):
        self._counts = [0] * (NUM_ALARM_TYPES + 1)  # index by alarm kind 1..4
        self._down_cells: list[int] = []

    def count(self, alarm: int) -> int:
        return self._counts[int(alarm)]

    def is_active(self, alarm: int) -> bool:
        return self._counts[int(alarm)] > 0

    @property
    def bits(self) -> tuple[bool, ...]:
        return tuple(c > 0 for c in self._counts[1:])

    @property
    def active_count(self) -> int:
        """Number of alarm types currently set (register population count)."""
        return sum(1 for c in self._counts[1:] if c > 0)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(self._counts[1:])

    def increment(self, alarm: int) -> None:
        self._counts[int(alarm)] += 1

    def decrement(self, alarm: int) -> None:
        if self._counts[int(alarm)] > 0:
            self._counts[int(alarm)] -= 1

    def note_cell_down(self, cell_id: int) -> None:
        self._down_cells.append(cell_id)

    def pop_oldest_down(self) -> int | None:
        return self._down_cells.pop(0) if self._down_cells else None

    @property
    def down_cells(self) -> tuple[int, ...]:
        return tuple(self._down_cells)

    def clear(self) -> None:
        self._counts = [0] * (NUM_ALARM_TYPES + 1)
        self._down_cells = []


def sample_event(rates: FaultRates, register: FaultRegister,
                 rng: np.random.Generator) -> FaultKind:
    """Draw one event; inadmissible spontaneous clears degrade to NORMAL."""
    u = rng.random()
    idx = int(np.searchsorted(rates._cumulative, u, side="right"))
    idx = min(idx, rates._last_support)
    kind = FaultKind(idx)
    if kind >= FaultKind.AZIMUTH_RESTORED and not register.is_active(paired_alarm(kind)):
        return FaultKind.NORMAL
    return kind


def apply_fault(kind: FaultKind, cells, register: FaultRegister,
                rng: np.random.Generator,
                azimuth_delta: float = DEFAULT_AZIMUTH_DELTA_DEG,
                managed_cell: int = 0) -> bool:
    """Apply one fault's radio effect and count it.

    Azimuth drift, diversity loss and feeder faults strike the managed
    (serving) cell; a neighbour outage downs one uniformly chosen up cell
    other than the managed one.  Diversity and feeder faults are counted on
    re-occurrence but do not compound their radio effect.  Returns whether
    the fault actually landed (a neighbour outage with no up neighbour left
    is dropped).
    """
    kind = FaultKind(kind)
    if kind == FaultKind.NORMAL:
        return False
    if kind not in ALARM_KINDS:
        raise ValueError(f"apply_fault takes fault kinds 1..4, got {kind!r}")

    cell = cells[managed_cell]
    if kind == FaultKind.AZIMUTH_DRIFT:
        cell.azimuth_offset += azimuth_delta
    elif kind == FaultKind.NEIGHBOR_DOWN:
        candidates = [c.cell_id for c in cells
                      if c.is_up and c.cell_id != managed_cell]
        if not candidates:
            return False
        victim = candidates[int(rng.integers(len(candidates)))]
        cells[victim].is_up = False
        register.note_cell_down(victim)
    elif kind == FaultKind.DIVERSITY_LOST:
        cell.diversity_enabled = False
    elif kind == FaultKind.FEEDER_FAULT:
        cell.tx_power_delta = -FEEDER_LOSS_DB
    register.increment(kind)
    return True


def clear_fault(alarm: FaultKind, cells, register: FaultRegister,
                managed_cell: int = 0) -> None:
    """Revert one instance of an alarm's radio effect and decrement its
    counter; clearing an inactive alarm is a legal no-op."""
    alarm = FaultKind(alarm)
    if alarm not in ALARM_KINDS:
        raise ValueError(f"clear_fault takes alarm kinds 1..4, got {alarm!r}")
    if register.count(alarm) == 0:
        return

    cell = cells[managed_cell]
    if alarm == FaultKind.AZIMUTH_DRIFT:
        cell.azimuth_offset = 0.0
    elif alarm == FaultKind.NEIGHBOR_DOWN:
        victim = register.pop_oldest_down()
        if victim is not None:
            cells[victim].is_up = True
    elif alarm == FaultKind.DIVERSITY_LOST:
        cell.diversity_enabled = True
    elif alarm == FaultKind.FEEDER_FAULT:
        cell.tx_power_delta = 0.0
    register.decrement(alarm)
