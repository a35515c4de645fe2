"""Core scheduling model: appliances, problem instances, and slot arithmetic.

A day is divided into ``horizon`` equal slots numbered ``0 .. horizon-1``;
all slot arithmetic wraps around the day boundary (modulo ``horizon``).
An appliance operation is atomic: it occupies ``duration`` contiguous slots
with a fixed per-slot energy pattern and cannot be split or throttled.

The scheduling window is given as a pre-modulo index pair
``(window_start, window_end)`` with ``window_end`` allowed to exceed
``horizon - 1`` so that windows spanning midnight (e.g. 10 PM-5 AM) stay
contiguous before the modulo is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidInstanceError


def validate_horizon(horizon: int) -> None:
    if not isinstance(horizon, int) or isinstance(horizon, bool):
        raise InvalidInstanceError(f"horizon must be an integer, got {horizon!r}")
    if horizon < 2:
        raise InvalidInstanceError(f"horizon must be >= 2, got {horizon}")


@dataclass(frozen=True)
class Appliance:
    """One atomic appliance operation and the window it must fit in.

    energy_pattern holds the kWh drawn in each of the ``duration`` operating
    slots, in operation order. Constant-level appliances are the special case
    of a repeated value; see :meth:`constant`.
    """

    name: str
    window_start: int
    window_end: int
    duration: int
    energy_pattern: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "energy_pattern", tuple(float(g) for g in self.energy_pattern)
        )
        if self.duration < 1:
            raise InvalidInstanceError(f"{self.name}: duration must be >= 1")
        if len(self.energy_pattern) != self.duration:
            raise InvalidInstanceError(
                f"{self.name}: energy_pattern has {len(self.energy_pattern)} "
                f"entries, expected duration={self.duration}"
            )
        if any(not math.isfinite(g) or g <= 0.0 for g in self.energy_pattern):
            raise InvalidInstanceError(
                f"{self.name}: every energy_pattern level must be finite and > 0"
            )
        if self.window_end <= self.window_start:
            raise InvalidInstanceError(
                f"{self.name}: window_end must exceed window_start "
                f"(got {self.window_start}..{self.window_end})"
            )
        if self.window_end < self.window_start + self.duration - 1:
            raise InvalidInstanceError(
                f"{self.name}: window [{self.window_start}, {self.window_end}] "
                f"is shorter than duration {self.duration} "
                "(window_end must be >= window_start + duration - 1)"
            )

    @classmethod
    def constant(
        cls, name: str, window_start: int, window_end: int, duration: int, level: float
    ) -> "Appliance":
        """Appliance drawing the same energy ``level`` in every operating slot."""
        return cls(name, window_start, window_end, duration, (level,) * duration)


def validate_appliance(appliance: Appliance, horizon: int) -> None:
    """Check the horizon-dependent window bounds for one appliance."""
    validate_horizon(horizon)
    a = appliance
    if not 0 <= a.window_start <= horizon - 1:
        raise InvalidInstanceError(
            f"{a.name}: window_start must be in [0, {horizon - 1}], got {a.window_start}"
        )
    if not 1 <= a.window_end <= 2 * horizon - 2:
        raise InvalidInstanceError(
            f"{a.name}: window_end must be in [1, {2 * horizon - 2}], got {a.window_end}"
        )
    if a.window_end - a.window_start > horizon - 1:
        raise InvalidInstanceError(
            f"{a.name}: window spans {a.window_end - a.window_start + 1} slots, "
            f"more than the horizon allows (max {horizon})"
        )


@dataclass(frozen=True)
class ProblemInstance:
    """A scheduling problem: horizon, appliances, and per-slot cost coefficients.

    ``cost_coefficients[h]`` is the quadratic price coefficient for slot h in
    cent/kWh^2 (the slot's cost is ``a_h * load_h**2``).
    """

    horizon: int
    appliances: tuple[Appliance, ...]
    cost_coefficients: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "appliances", tuple(self.appliances))
        object.__setattr__(
            self, "cost_coefficients", tuple(float(a) for a in self.cost_coefficients)
        )
        validate_horizon(self.horizon)
        if not self.appliances:
            raise InvalidInstanceError("instance needs at least one appliance")
        for appliance in self.appliances:
            validate_appliance(appliance, self.horizon)
        if len(self.cost_coefficients) != self.horizon:
            raise InvalidInstanceError(
                f"need {self.horizon} cost coefficients, got {len(self.cost_coefficients)}"
            )
        if any(not math.isfinite(a) or a < 0.0 for a in self.cost_coefficients):
            raise InvalidInstanceError("cost coefficients must be finite and >= 0")

    @property
    def n_users(self) -> int:
        return len(self.appliances)


def total_daily_energy(appliance: Appliance) -> float:
    """Total kWh the appliance draws over one full operation."""
    return float(sum(appliance.energy_pattern))


def instance_total_energy(instance: ProblemInstance) -> float:
    return float(sum(total_daily_energy(a) for a in instance.appliances))


def feasible_starts(appliance: Appliance, horizon: int) -> tuple[int, ...]:
    """All slots where the operation can begin and still fit in its window.

    Ordered by the pre-modulo index, so a window spanning midnight yields
    e.g. (22, 23, 0, 1, ...) rather than sorted slot order.
    """
    validate_appliance(appliance, horizon)
    last = appliance.window_end - appliance.duration + 1
    return tuple(i % horizon for i in range(appliance.window_start, last + 1))


def operation_range(start: int, duration: int, horizon: int) -> tuple[int, ...]:
    """The ``duration`` slots occupied by an operation beginning at ``start``."""
    validate_horizon(horizon)
    if not 0 <= start < horizon:
        raise InvalidInstanceError(f"start slot {start} outside [0, {horizon - 1}]")
    if not 1 <= duration <= horizon:
        raise InvalidInstanceError(
            f"duration {duration} outside [1, horizon={horizon}]"
        )
    return tuple(i % horizon for i in range(start, start + duration))


def window_slots(appliance: Appliance, horizon: int) -> frozenset[int]:
    """The set of slots covered by the appliance's scheduling window."""
    validate_appliance(appliance, horizon)
    return frozenset(
        i % horizon for i in range(appliance.window_start, appliance.window_end + 1)
    )


@lru_cache(maxsize=256)
def start_sets(instance: ProblemInstance) -> tuple[tuple[int, ...], ...]:
    """Feasible start tuple for every appliance, in user order."""
    return tuple(feasible_starts(a, instance.horizon) for a in instance.appliances)


def enumeration_size(instance: ProblemInstance) -> int:
    """Exact number of joint schedules, as an arbitrary-precision integer."""
    size = 1
    for starts in start_sets(instance):
        size *= len(starts)
    return size
