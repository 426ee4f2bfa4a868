"""Domain model for hospital-unit rostering.

Time is discretized into 48 half-hour slots per day (slot 0 starts at 00:00).
A schedule assigns, for every day and slot, the set of employee ids on duty.
All model types are immutable values after construction and can be shared
freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError

SLOTS_PER_DAY = 48
SLOT_MINUTES = 30
N_SKILLS = 4


class Skill(Enum):
    """Clinical skill level; the enum value doubles as the demand-grid index."""

    L1 = 0
    L2 = 1
    L3 = 2
    L4 = 3


SKILLS: tuple[Skill, ...] = tuple(Skill)


def slots_for_hours(hours: float) -> int:
    """Number of 30-minute slots covering ``hours``, rounded to nearest slot."""
    return int(round(hours * 60 / SLOT_MINUTES))


def _read_only(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Employee:
    """A staff member with a skill level, manager flag, and contractual limits.

    ``unavailability[d, t]`` is True when the employee declared (day d, slot t)
    off-limits; the grid is normalized to a read-only bool array with 48
    columns.
    """

    id: str
    skill: Skill
    is_manager: bool
    unavailability: np.ndarray
    max_daily_hours: float = 9.0
    max_weekly_hours: float = 40.0
    contracted_weekly_hours: float = 40.0

    def __post_init__(self) -> None:
        if not self.id or not isinstance(self.id, str):
            raise ValidationError("employee id must be a non-empty string")
        if not isinstance(self.skill, Skill):
            raise ValidationError(f"employee {self.id!r}: skill must be a Skill value")
        grid = np.array(self.unavailability, dtype=bool)
        if grid.ndim != 2 or grid.shape[1] != SLOTS_PER_DAY:
            raise ValidationError(
                f"employee {self.id!r}: unavailability grid must have shape "
                f"(days, {SLOTS_PER_DAY}), got {grid.shape}"
            )
        object.__setattr__(self, "unavailability", _read_only(grid))
        if not 0 < self.max_daily_hours <= 24:
            raise ValidationError(
                f"employee {self.id!r}: max_daily_hours must be in (0, 24]"
            )
        if self.max_daily_hours > self.max_weekly_hours:
            raise ValidationError(
                f"employee {self.id!r}: max_daily_hours exceeds max_weekly_hours"
            )
        if self.contracted_weekly_hours <= 0:
            raise ValidationError(
                f"employee {self.id!r}: contracted_weekly_hours must be positive"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Employee):
            return NotImplemented
        return (
            self.id == other.id
            and self.skill is other.skill
            and self.is_manager == other.is_manager
            and self.max_daily_hours == other.max_daily_hours
            and self.max_weekly_hours == other.max_weekly_hours
            and self.contracted_weekly_hours == other.contracted_weekly_hours
            and np.array_equal(self.unavailability, other.unavailability)
        )


@dataclass(frozen=True, eq=False)
class DemandGrid:
    """Per (day, slot, skill) minimum and ideal staffing levels."""

    min_required: np.ndarray
    ideal: np.ndarray

    def __post_init__(self) -> None:
        mins = self._as_int_grid(self.min_required, "min_required")
        ideal = self._as_int_grid(self.ideal, "ideal")
        if mins.shape != ideal.shape:
            raise ValidationError(
                f"demand grids disagree in shape: {mins.shape} vs {ideal.shape}"
            )
        if (mins < 0).any():
            raise ValidationError("min_required must be non-negative")
        if (ideal < mins).any():
            raise ValidationError("ideal staffing is below the minimum in some cell")
        object.__setattr__(self, "min_required", _read_only(mins))
        object.__setattr__(self, "ideal", _read_only(ideal))

    @staticmethod
    def _as_int_grid(values, name: str) -> np.ndarray:
        arr = np.asarray(values)
        cast = arr.astype(np.int64, copy=True)
        if arr.dtype.kind not in "iu" and not np.array_equal(cast, arr):
            raise ValidationError(f"demand grid {name!r} must be integer-valued")
        if cast.ndim != 3 or cast.shape[1:] != (SLOTS_PER_DAY, N_SKILLS):
            raise ValidationError(
                f"demand grid {name!r} must have shape (days, {SLOTS_PER_DAY}, "
                f"{N_SKILLS}), got {cast.shape}"
            )
        return cast

    @property
    def days(self) -> int:
        return self.min_required.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DemandGrid):
            return NotImplemented
        return np.array_equal(self.min_required, other.min_required) and np.array_equal(
            self.ideal, other.ideal
        )


@dataclass(frozen=True)
class ConstraintParams:
    """Shift-shape rules: length window, inter-day rest, slot granularity."""

    min_shift_hours: float = 4.0
    max_shift_hours: float = 9.0
    min_rest_hours: float = 8.0
    slot_minutes: int = SLOT_MINUTES

    def __post_init__(self) -> None:
        if not 0 < self.min_shift_hours <= self.max_shift_hours:
            raise ValidationError("need 0 < min_shift_hours <= max_shift_hours")
        if self.min_rest_hours < 0:
            raise ValidationError("min_rest_hours must be non-negative")
        if self.slot_minutes != SLOT_MINUTES:
            raise ValidationError(f"slot_minutes is fixed at {SLOT_MINUTES}")

    @property
    def min_shift_slots(self) -> int:
        return slots_for_hours(self.min_shift_hours)

    @property
    def max_shift_slots(self) -> int:
        return slots_for_hours(self.max_shift_hours)


@dataclass(frozen=True)
class PenaltyWeights:
    """Weights of the ten penalty components.

    Defaults make service failure dominate (shortfall 10, manager 5) with unit
    soft-rule weights; every value is configurable.
    """

    w_over: float = 1.0
    w_zero: float = 2.0
    w_shortfall: float = 10.0
    w_mgr: float = 5.0
    w_unavail: float = 1.0
    w_split: float = 1.0
    w_length: float = 1.0
    w_rest: float = 1.0
    w_daily: float = 1.0
    w_weekly: float = 1.0

    def __post_init__(self) -> None:
        for name, value in self.as_dict().items():
            if value < 0:
                raise ValidationError(f"penalty weight {name} must be non-negative")
        groups = {
            "staffing cost": (self.w_over, self.w_zero),
            "service failure": (self.w_shortfall, self.w_mgr),
            "dissatisfaction": (
                self.w_unavail,
                self.w_split,
                self.w_length,
                self.w_rest,
                self.w_daily,
                self.w_weekly,
            ),
        }
        for group, weights in groups.items():
            if max(weights) <= 0:
                raise ValidationError(f"at least one {group} weight must be positive")

    def as_dict(self) -> dict[str, float]:
        return {
            "w_over": self.w_over,
            "w_zero": self.w_zero,
            "w_shortfall": self.w_shortfall,
            "w_mgr": self.w_mgr,
            "w_unavail": self.w_unavail,
            "w_split": self.w_split,
            "w_length": self.w_length,
            "w_rest": self.w_rest,
            "w_daily": self.w_daily,
            "w_weekly": self.w_weekly,
        }


@dataclass(frozen=True, eq=False)
class Instance:
    """A complete problem statement for one unit.

    Employees are normalized to ascending id order so that equal instances
    have identical canonical encodings.
    """

    unit_id: str
    days: int
    employees: tuple[Employee, ...]
    demand: DemandGrid
    constraints: ConstraintParams = ConstraintParams()
    weights: PenaltyWeights = PenaltyWeights()
    _by_id: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.days < 1:
            raise ValidationError("instance must cover at least one day")
        employees = tuple(sorted(self.employees, key=lambda e: e.id))
        object.__setattr__(self, "employees", employees)
        ids = [e.id for e in employees]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"duplicate employee ids: {dupes}")
        if self.demand.days != self.days:
            raise ValidationError(
                f"demand covers {self.demand.days} days, instance has {self.days}"
            )
        for emp in employees:
            if emp.unavailability.shape[0] != self.days:
                raise ValidationError(
                    f"employee {emp.id!r}: unavailability covers "
                    f"{emp.unavailability.shape[0]} days, instance has {self.days}"
                )
        if not any(e.is_manager for e in employees):
            raise ValidationError("instance needs at least one manager")
        staffed_skills = {e.skill for e in employees}
        demanded = np.logical_or(self.demand.min_required, self.demand.ideal).any(
            axis=(0, 1)
        )
        for skill in SKILLS:
            if demanded[skill.value] and skill not in staffed_skills:
                raise ValidationError(
                    f"demand for {skill.name} but no employee of that skill"
                )
        object.__setattr__(self, "_by_id", {e.id: e for e in employees})

    @property
    def employee_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.employees)

    def employee(self, employee_id: str) -> Employee:
        try:
            return self._by_id[employee_id]
        except KeyError:
            raise ValidationError(f"unknown employee id {employee_id!r}") from None

    def has_employee(self, employee_id: str) -> bool:
        return employee_id in self._by_id

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.unit_id == other.unit_id
            and self.days == other.days
            and self.employees == other.employees
            and self.demand == other.demand
            and self.constraints == other.constraints
            and self.weights == other.weights
        )


_EMPTY_SLOT: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Schedule:
    """A chromosome: for each day, 48 slot-sets of on-duty employee ids."""

    assignments: tuple[tuple[frozenset[str], ...], ...]

    def __post_init__(self) -> None:
        if not self.assignments:
            raise ValidationError("schedule must cover at least one day")
        for d, day in enumerate(self.assignments):
            if len(day) != SLOTS_PER_DAY:
                raise ValidationError(
                    f"day {d} has {len(day)} slots, expected {SLOTS_PER_DAY}"
                )

    @classmethod
    def build(cls, assignments: Sequence[Sequence[Iterable[str]]]) -> "Schedule":
        """Build from nested iterables, converting each slot to a frozenset."""
        days = []
        for day in assignments:
            slots = []
            for ids in day:
                slot = frozenset(ids)
                for member in slot:
                    if not isinstance(member, str):
                        raise ValidationError(
                            f"slot members must be employee id strings, got {member!r}"
                        )
                slots.append(slot)
            days.append(tuple(slots))
        return cls(tuple(days))

    @classmethod
    def empty(cls, days: int) -> "Schedule":
        day = (_EMPTY_SLOT,) * SLOTS_PER_DAY
        return cls((day,) * days)

    @property
    def days(self) -> int:
        return len(self.assignments)

    def validate_for(self, instance: Instance) -> None:
        """Check day count and id universe against the owning instance."""
        if self.days != instance.days:
            raise ValidationError(
                f"schedule covers {self.days} days, instance has {instance.days}"
            )
        unknown = set()
        for day in self.assignments:
            for slot in day:
                for member in slot:
                    if not instance.has_employee(member):
                        unknown.add(member)
        if unknown:
            raise ValidationError(f"schedule references unknown employees: {sorted(unknown)}")


@dataclass(frozen=True)
class ShiftBlock:
    """A maximal contiguous run of worked slots for one employee on one day."""

    day: int
    start_slot: int
    end_slot: int
    employee_id: str

    def __post_init__(self) -> None:
        if self.day < 0:
            raise ValidationError("day index must be non-negative")
        if not 0 <= self.start_slot <= self.end_slot < SLOTS_PER_DAY:
            raise ValidationError(
                f"invalid block bounds ({self.start_slot}, {self.end_slot})"
            )

    @property
    def n_slots(self) -> int:
        return self.end_slot - self.start_slot + 1

    @property
    def duration_hours(self) -> float:
        return 0.5 * self.n_slots


def extract_blocks(
    schedule: Schedule, instance: Instance, employee_id: str, day: int
) -> tuple[ShiftBlock, ...]:
    """Maximal contiguous worked runs for an employee on a day, in slot order.

    Returns an empty tuple when the employee is absent all day. More than one
    block signals a split shift downstream.
    """
    if not 0 <= day < schedule.days:
        raise ValidationError(f"day {day} out of range for {schedule.days}-day schedule")
    instance.employee(employee_id)  # raises on unknown id
    blocks = []
    start = None
    for t, slot in enumerate(schedule.assignments[day]):
        if employee_id in slot:
            if start is None:
                start = t
        elif start is not None:
            blocks.append(ShiftBlock(day, start, t - 1, employee_id))
            start = None
    if start is not None:
        blocks.append(ShiftBlock(day, start, SLOTS_PER_DAY - 1, employee_id))
    return tuple(blocks)


def headcount(
    schedule: Schedule,
    instance: Instance,
    day: int,
    slot: int,
    skill: Skill | None = None,
    managers_only: bool = False,
) -> int:
    """Assigned employees in a slot, optionally restricted to a skill or to managers."""
    if not 0 <= day < schedule.days:
        raise ValidationError(f"day {day} out of range for {schedule.days}-day schedule")
    if not 0 <= slot < SLOTS_PER_DAY:
        raise ValidationError(f"slot {slot} out of range 0..{SLOTS_PER_DAY - 1}")
    members = schedule.assignments[day][slot]
    if skill is None and not managers_only:
        return len(members)
    count = 0
    for member in members:
        emp = instance.employee(member)
        if skill is not None and emp.skill is not skill:
            continue
        if managers_only and not emp.is_manager:
            continue
        count += 1
    return count
