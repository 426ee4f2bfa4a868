"""Deterministic synthetic instance generator.

Instances model a hospital unit operating 06:00-23:30 (slots 12-47) over a
one-week horizon, with midday and weekend demand peaks and four skill levels.
Demand magnitudes are controlled by :class:`GeneratorConfig`: per-skill
minimum staffing scales with the unit's headcount so peak demand sits around
half of each skill's workforce, keeping instances feasible but tight.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ValidationError
from .model import (
    SKILLS,
    SLOTS_PER_DAY,
    ConstraintParams,
    DemandGrid,
    Employee,
    Instance,
    PenaltyWeights,
)


@dataclass(frozen=True)
class UnitProfile:
    """Per-skill employee counts defining a unit's workforce."""

    name: str
    counts: tuple[int, int, int, int]
    demand_scale: float = 1.0

    def __post_init__(self) -> None:
        if len(self.counts) != 4 or min(self.counts) < 0:
            raise ValidationError("profile needs four non-negative skill counts")
        if sum(self.counts) < 1:
            raise ValidationError("profile needs at least one employee")
        if self.counts[0] + self.counts[1] < 1:
            raise ValidationError("profile needs an L1 or L2 employee for management")
        if self.demand_scale <= 0:
            raise ValidationError("demand_scale must be positive")

    @property
    def total(self) -> int:
        return sum(self.counts)


def builtin_profiles() -> tuple[UnitProfile, ...]:
    """The five studied hospital-unit workforce profiles."""
    return (
        UnitProfile("unit1", (1, 1, 21, 3)),
        UnitProfile("unit2", (1, 1, 9, 3)),
        UnitProfile("unit3", (1, 1, 16, 5)),
        UnitProfile("unit4", (1, 1, 6, 2)),
        UnitProfile("unit5", (1, 1, 25, 6)),
    )


def profile_by_name(name: str) -> UnitProfile:
    for profile in builtin_profiles():
        if profile.name == name:
            return profile
    raise ValidationError(f"unknown builtin profile {name!r}")


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs of the synthetic generator; all demand magnitudes live here."""

    days: int = 7
    operating_start: int = 12
    operating_end: int = 47
    base_demand_fraction: float = 0.22
    midday_multiplier: float = 1.8
    weekend_multiplier: float = 1.25
    midday_start: int = 24
    midday_end: int = 33
    weekend_days: tuple[int, ...] = (5, 6)
    lull_slots: tuple[int, ...] = (22, 23, 34, 35)
    supervision_floor: int = 1
    demand_jitter: float = 0.25
    ideal_offset: int = 1
    day_off_probability: float = 0.15
    half_day_probability: float = 0.25
    half_day_slots: int = 8
    max_daily_hours: float = 9.0
    max_weekly_hours: float = 40.0
    contracted_weekly_hours: float = 40.0
    constraints: ConstraintParams = ConstraintParams()

    def __post_init__(self) -> None:
        if self.days < 1:
            raise ConfigError("generator needs at least one day")
        if not 0 <= self.operating_start <= self.operating_end < SLOTS_PER_DAY:
            raise ConfigError("operating window must fit within 0..47")
        if not 0 <= self.midday_start <= self.midday_end < SLOTS_PER_DAY:
            raise ConfigError("midday window must fit within 0..47")
        if self.base_demand_fraction < 0:
            raise ConfigError("base_demand_fraction must be non-negative")
        if self.midday_multiplier <= 0 or self.weekend_multiplier <= 0:
            raise ConfigError("demand multipliers must be positive")
        for name in ("day_off_probability", "half_day_probability"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must be within [0, 1]")
        if self.ideal_offset < 0:
            raise ConfigError("ideal_offset must be non-negative")
        if self.half_day_slots < 1:
            raise ConfigError("half_day_slots must be at least 1")
        if self.supervision_floor < 0:
            raise ConfigError("supervision_floor must be non-negative")
        if not 0.0 <= self.demand_jitter < 1.0:
            raise ConfigError("demand_jitter must be within [0, 1)")


def _round_down(x: float) -> int:
    return int(x)


def _demand_grids(
    profile: UnitProfile, cfg: GeneratorConfig, rng: random.Random
) -> DemandGrid:
    # hourly texture: one multiplicative jitter per (slot, skill) shared by all
    # days, so weekend demand stays cell-wise above weekday demand
    jitter = [
        [1.0 + rng.uniform(-cfg.demand_jitter, cfg.demand_jitter) for _ in range(4)]
        for _ in range(SLOTS_PER_DAY)
    ]
    # mandatory supervision: the manager skill is demanded whenever the unit
    # has appointments, on top of the headcount-proportional staffing levels;
    # lull slots model appointment-free pauses inside the operating window
    floor_skill = 0 if profile.counts[0] > 0 else 1
    lulls = set(cfg.lull_slots)
    mins = np.zeros((cfg.days, SLOTS_PER_DAY, 4), dtype=np.int64)
    for d in range(cfg.days):
        weekend = cfg.weekend_multiplier if d in cfg.weekend_days else 1.0
        for t in range(cfg.operating_start, cfg.operating_end + 1):
            if t in lulls:
                continue
            midday = cfg.midday_multiplier if cfg.midday_start <= t <= cfg.midday_end else 1.0
            for s, count in enumerate(profile.counts):
                level = count * profile.demand_scale * cfg.base_demand_fraction
                cell = _round_down(level * midday * weekend * jitter[t][s])
                if s == floor_skill and count > 0:
                    cell = max(cell, cfg.supervision_floor)
                mins[d, t, s] = cell
    ideal = np.where(mins > 0, mins + cfg.ideal_offset, 0)
    return DemandGrid(min_required=mins, ideal=ideal)


def _unavailability(rng: random.Random, cfg: GeneratorConfig) -> np.ndarray:
    grid = np.zeros((cfg.days, SLOTS_PER_DAY), dtype=bool)
    if rng.random() < cfg.day_off_probability:
        grid[rng.randrange(cfg.days), :] = True
    if rng.random() < cfg.half_day_probability:
        d = rng.randrange(cfg.days)
        start_lo = cfg.operating_start
        start_hi = max(start_lo, cfg.operating_end + 1 - cfg.half_day_slots)
        start = rng.randint(start_lo, start_hi)
        grid[d, start : start + cfg.half_day_slots] = True
    return grid


def generate_instance(
    profile: UnitProfile,
    seed: int,
    config: GeneratorConfig | None = None,
    weights: PenaltyWeights | None = None,
) -> Instance:
    """Build a deterministic week-long instance for a unit profile.

    L1 employees are flagged as managers; when a profile has no L1 staff the
    first L2 employee takes the manager flag so every instance has one.
    """
    cfg = config or GeneratorConfig()
    rng = random.Random(f"{seed}:instance:{profile.name}")
    demand = _demand_grids(profile, cfg, rng)
    employees = []
    has_manager = profile.counts[0] > 0
    for skill in SKILLS:
        count = profile.counts[skill.value]
        for i in range(1, count + 1):
            is_manager = skill.name == "L1" or (
                not has_manager and skill.name == "L2" and i == 1
            )
            employees.append(
                Employee(
                    id=f"{skill.name}-{i:02d}",
                    skill=skill,
                    is_manager=is_manager,
                    unavailability=_unavailability(rng, cfg),
                    max_daily_hours=cfg.max_daily_hours,
                    max_weekly_hours=cfg.max_weekly_hours,
                    contracted_weekly_hours=cfg.contracted_weekly_hours,
                )
            )
    return Instance(
        unit_id=profile.name,
        days=cfg.days,
        employees=tuple(employees),
        demand=demand,
        constraints=cfg.constraints,
        weights=weights or PenaltyWeights(),
    )


def generator_manifest(
    profile: UnitProfile, seed: int, config: GeneratorConfig | None = None
) -> dict:
    """Provenance record for a generated instance."""
    cfg = config or GeneratorConfig()
    return {
        "profile": {
            "name": profile.name,
            "counts": list(profile.counts),
            "demand_scale": profile.demand_scale,
        },
        "seed": seed,
        "generator": {
            "days": cfg.days,
            "operating_start": cfg.operating_start,
            "operating_end": cfg.operating_end,
            "base_demand_fraction": cfg.base_demand_fraction,
            "midday_multiplier": cfg.midday_multiplier,
            "weekend_multiplier": cfg.weekend_multiplier,
            "midday_start": cfg.midday_start,
            "midday_end": cfg.midday_end,
            "weekend_days": list(cfg.weekend_days),
            "supervision_floor": cfg.supervision_floor,
            "demand_jitter": cfg.demand_jitter,
            "ideal_offset": cfg.ideal_offset,
            "day_off_probability": cfg.day_off_probability,
            "half_day_probability": cfg.half_day_probability,
            "half_day_slots": cfg.half_day_slots,
            "max_daily_hours": cfg.max_daily_hours,
            "max_weekly_hours": cfg.max_weekly_hours,
            "contracted_weekly_hours": cfg.contracted_weekly_hours,
            "min_shift_hours": cfg.constraints.min_shift_hours,
            "max_shift_hours": cfg.constraints.max_shift_hours,
            "min_rest_hours": cfg.constraints.min_rest_hours,
        },
    }
