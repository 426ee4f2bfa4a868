"""Fitness evaluation: ten penalty components aggregated into (f1, f2, f3).

f1 (staffing cost)    = over_coverage + zero_demand
f2 (service failure)  = shortfall + missing_manager
f3 (dissatisfaction)  = unavailability + split_shift + shift_length + rest
                        + daily_hours + weekly_hours

Over-coverage and shortfall are computed per skill and summed; zero-demand
staffing and manager coverage operate on aggregate slot headcount. All
components are weighted penalty units; evaluation is a pure function of
(schedule, instance).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import SKILLS, SLOTS_PER_DAY, Instance, Schedule

_COMPONENTS = (
    "over_coverage",
    "zero_demand",
    "shortfall",
    "missing_manager",
    "unavailability",
    "split_shift",
    "shift_length",
    "rest",
    "daily_hours",
    "weekly_hours",
)


@dataclass(frozen=True)
class PenaltyBreakdown:
    """The ten weighted penalty components."""

    over_coverage: float
    zero_demand: float
    shortfall: float
    missing_manager: float
    unavailability: float
    split_shift: float
    shift_length: float
    rest: float
    daily_hours: float
    weekly_hours: float

    def __post_init__(self) -> None:
        for name in _COMPONENTS:
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValidationError(f"penalty component {name} must be finite and >= 0")

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in _COMPONENTS}


@dataclass(frozen=True)
class FitnessVector:
    """Objective vector (f1, f2, f3) with its penalty breakdown and scalar total."""

    f1: float
    f2: float
    f3: float
    total: float
    breakdown: PenaltyBreakdown

    @classmethod
    def from_breakdown(cls, b: PenaltyBreakdown) -> "FitnessVector":
        f1 = b.over_coverage + b.zero_demand
        f2 = b.shortfall + b.missing_manager
        f3 = (
            b.unavailability
            + b.split_shift
            + b.shift_length
            + b.rest
            + b.daily_hours
            + b.weekly_hours
        )
        return cls(f1=f1, f2=f2, f3=f3, total=f1 + f2 + f3, breakdown=b)

    @property
    def objectives(self) -> tuple[float, float, float]:
        return (self.f1, self.f2, self.f3)


class Evaluator:
    """Precomputes per-instance arrays so repeated evaluations stay cheap.

    The instance is immutable; the only mutable state is a memo mapping
    slot-sets to employee row indices, whose inserts are idempotent, so one
    evaluator may be shared by concurrent evaluations.
    """

    def __init__(self, instance: Instance):
        self.instance = instance
        employees = instance.employees
        self._n = len(employees)
        self._days = instance.days
        self._row_of = {e.id: i for i, e in enumerate(employees)}
        self._skill_rows = [
            np.array([i for i, e in enumerate(employees) if e.skill is s], dtype=np.intp)
            for s in SKILLS
        ]
        self._mgr_rows = np.array(
            [i for i, e in enumerate(employees) if e.is_manager], dtype=np.intp
        )
        self._unavail = np.stack([e.unavailability for e in employees])
        # demand transposed to (skill, day, slot) to align with count arrays
        self._min_t = np.ascontiguousarray(instance.demand.min_required.transpose(2, 0, 1))
        self._ideal_t = np.ascontiguousarray(instance.demand.ideal.transpose(2, 0, 1))
        self._zero_mask = instance.demand.min_required.sum(axis=2) == 0
        self._max_daily = np.array([e.max_daily_hours for e in employees])
        self._max_weekly = np.array([e.max_weekly_hours for e in employees])
        self._slot_rows: dict[frozenset[str], np.ndarray] = {}

    def _matrix(self, schedule: Schedule) -> np.ndarray:
        """Assignment matrix x[e, d, t] as booleans."""
        if schedule.days != self._days:
            raise ValidationError(
                f"schedule covers {schedule.days} days, instance has {self._days}"
            )
        x = np.zeros((self._n, self._days, SLOTS_PER_DAY), dtype=bool)
        memo = self._slot_rows
        row_of = self._row_of
        for d, day in enumerate(schedule.assignments):
            for t, members in enumerate(day):
                if not members:
                    continue
                rows = memo.get(members)
                if rows is None:
                    try:
                        rows = np.array([row_of[m] for m in members], dtype=np.intp)
                    except KeyError as exc:
                        raise ValidationError(f"unknown employee id {exc.args[0]!r}") from None
                    memo[members] = rows
                x[rows, d, t] = True
        return x

    def _skill_counts(self, x: np.ndarray) -> np.ndarray:
        counts = np.empty((len(SKILLS), self._days, SLOTS_PER_DAY), dtype=np.int32)
        for k, rows in enumerate(self._skill_rows):
            if len(rows):
                counts[k] = x[rows].sum(axis=0)
            else:
                counts[k] = 0
        return counts

    def _cost(self, x: np.ndarray, counts: np.ndarray) -> tuple[float, float]:
        w = self.instance.weights
        over = w.w_over * float(np.maximum(counts - self._ideal_t, 0).sum())
        total = counts.sum(axis=0)
        zero = w.w_zero * float(total[self._zero_mask].sum())
        return over, zero

    def _service(self, x: np.ndarray, counts: np.ndarray) -> tuple[float, float]:
        w = self.instance.weights
        shortfall = w.w_shortfall * float(np.maximum(self._min_t - counts, 0).sum())
        total = counts.sum(axis=0)
        if len(self._mgr_rows):
            mgr = x[self._mgr_rows].sum(axis=0)
        else:
            mgr = np.zeros_like(total)
        missing = w.w_mgr * float(np.count_nonzero((total > 0) & (mgr == 0)))
        return shortfall, missing

    def _dissatisfaction(self, x: np.ndarray) -> tuple[float, ...]:
        w = self.instance.weights
        cons = self.instance.constraints
        unavail = w.w_unavail * float(np.count_nonzero(x & self._unavail))

        flat = x.reshape(self._n * self._days, SLOTS_PER_DAY).astype(np.int8)
        starts = np.diff(flat, axis=1, prepend=0) == 1
        ends = np.diff(flat, axis=1, append=0) == -1
        start_rows, start_pos = np.nonzero(starts)
        _, end_pos = np.nonzero(ends)
        lengths_h = 0.5 * (end_pos - start_pos + 1)
        shift_length = w.w_length * float(
            (
                np.maximum(cons.min_shift_hours - lengths_h, 0)
                + np.maximum(lengths_h - cons.max_shift_hours, 0)
            ).sum()
        )
        blocks_per_day = np.bincount(start_rows, minlength=self._n * self._days)
        split = w.w_split * float(np.maximum(blocks_per_day - 1, 0).sum())

        hours_ed = 0.5 * x.sum(axis=2)
        daily = w.w_daily * float(np.maximum(hours_ed - self._max_daily[:, None], 0).sum())
        weekly = w.w_weekly * float(
            np.maximum(hours_ed.sum(axis=1) - self._max_weekly, 0).sum()
        )

        rest = 0.0
        if self._days > 1:
            worked = x.any(axis=2)
            first = x.argmax(axis=2)
            last = SLOTS_PER_DAY - 1 - x[:, :, ::-1].argmax(axis=2)
            pairs = worked[:, :-1] & worked[:, 1:]
            if pairs.any():
                gaps = 24 * 60 - 30 * last[:, :-1] + 30 * first[:, 1:]
                deficit = np.maximum(cons.min_rest_hours * 60 - gaps, 0)
                rest = w.w_rest * float(deficit[pairs].sum()) / 60.0

        return unavail, split, shift_length, rest, daily, weekly

    def assignment_matrix(self, schedule: Schedule) -> np.ndarray:
        """Boolean x[e, d, t] matrix in instance employee order."""
        return self._matrix(schedule)

    def skill_counts(self, schedule: Schedule) -> np.ndarray:
        """Headcounts by (skill, day, slot)."""
        return self._skill_counts(self._matrix(schedule))

    def cost_penalties(self, schedule: Schedule) -> tuple[float, float]:
        x = self._matrix(schedule)
        return self._cost(x, self._skill_counts(x))

    def service_penalties(self, schedule: Schedule) -> tuple[float, float]:
        x = self._matrix(schedule)
        return self._service(x, self._skill_counts(x))

    def dissatisfaction_penalties(self, schedule: Schedule) -> tuple[float, ...]:
        return self._dissatisfaction(self._matrix(schedule))

    def evaluate(self, schedule: Schedule) -> FitnessVector:
        x = self._matrix(schedule)
        counts = self._skill_counts(x)
        over, zero = self._cost(x, counts)
        shortfall, missing = self._service(x, counts)
        unavail, split, length, rest, daily, weekly = self._dissatisfaction(x)
        breakdown = PenaltyBreakdown(
            over_coverage=over,
            zero_demand=zero,
            shortfall=shortfall,
            missing_manager=missing,
            unavailability=unavail,
            split_shift=split,
            shift_length=length,
            rest=rest,
            daily_hours=daily,
            weekly_hours=weekly,
        )
        return FitnessVector.from_breakdown(breakdown)


def cost_penalties(schedule: Schedule, instance: Instance) -> tuple[float, float]:
    """(over_coverage, zero_demand) for a schedule."""
    return Evaluator(instance).cost_penalties(schedule)


def service_penalties(schedule: Schedule, instance: Instance) -> tuple[float, float]:
    """(shortfall, missing_manager) for a schedule."""
    return Evaluator(instance).service_penalties(schedule)


def dissatisfaction_penalties(schedule: Schedule, instance: Instance) -> tuple[float, ...]:
    """(unavailability, split_shift, shift_length, rest, daily_hours, weekly_hours)."""
    return Evaluator(instance).dissatisfaction_penalties(schedule)


def evaluate(schedule: Schedule, instance: Instance) -> FitnessVector:
    """Full fitness vector with the ten-component breakdown."""
    return Evaluator(instance).evaluate(schedule)
