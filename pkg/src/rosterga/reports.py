"""Run reports: front post-processing, coverage and staff metrics, comparisons.

A :class:`RunReport` is self-contained: it embeds the instance document and
every front member's schedule, so the CSV emitters need no extra inputs. The
"balanced" front member minimizes the population standard deviation of its
min-max-normalized objectives; extreme members minimize a single objective.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from statistics import pstdev
from typing import Sequence

import numpy as np

from .baselines import GreedyStats, run_greedy_baseline, run_soga
from .codec import (
    canonical_json,
    doc_to_instance,
    doc_to_schedule,
    instance_to_doc,
    schedule_to_doc,
)
from .errors import DecodeError, ValidationError
from .evaluation import Evaluator, FitnessVector, PenaltyBreakdown
from .instances import GeneratorConfig, UnitProfile, generate_instance
from .model import SLOTS_PER_DAY, Instance, Schedule, extract_blocks
from .nsga2 import GaConfig, run_nsga2

METHODS = ("greedy", "soga", "moo")


def select_balanced(front: Sequence[FitnessVector]) -> int:
    """Index of the front member with the most even normalized objectives.

    Each objective is min-max normalized across the front (degenerate
    objectives normalize to zero), then the member minimizing the population
    standard deviation of its three normalized values wins; ties go to the
    lowest index. Positive per-objective rescaling of the whole front cannot
    change the winner.
    """
    if not front:
        raise ValidationError("cannot select from an empty front")
    normalized = []
    for key in (lambda f: f.f1, lambda f: f.f2, lambda f: f.f3):
        values = [key(f) for f in front]
        lo, hi = min(values), max(values)
        if hi == lo:
            normalized.append([0.0] * len(front))
        else:
            normalized.append([(v - lo) / (hi - lo) for v in values])
    best = 0
    best_std = None
    for i in range(len(front)):
        std = pstdev([normalized[0][i], normalized[1][i], normalized[2][i]])
        if best_std is None or std < best_std:
            best = i
            best_std = std
    return best


def select_extreme(front: Sequence[FitnessVector], objective: int) -> int:
    """Index of the member minimizing one objective (1, 2, or 3).

    Ties break by lower total, then lower index.
    """
    if not front:
        raise ValidationError("cannot select from an empty front")
    if objective not in (1, 2, 3):
        raise ValidationError("objective must be 1, 2, or 3")
    key = {1: lambda f: f.f1, 2: lambda f: f.f2, 3: lambda f: f.f3}[objective]
    return min(range(len(front)), key=lambda i: (key(front[i]), front[i].total, i))


def coverage_matrix(schedule: Schedule, instance: Instance) -> np.ndarray:
    """Per (day, slot): assigned headcount minus aggregate minimum demand."""
    x = Evaluator(instance).assignment_matrix(schedule)
    total = x.sum(axis=0).astype(np.int64)
    return total - instance.demand.min_required.sum(axis=2)


def coverage_rate(schedule: Schedule, instance: Instance) -> float:
    """Percent of minimum-demand slot-units met, per (day, slot, skill).

    Zero total demand is undefined and reported as 100 by convention.
    """
    counts = Evaluator(instance).skill_counts(schedule).transpose(1, 2, 0)
    required = instance.demand.min_required
    total_required = int(required.sum())
    if total_required == 0:
        return 100.0
    met = np.minimum(counts, required).sum()
    return 100.0 * float(met) / total_required


@dataclass(frozen=True)
class StaffMetrics:
    """Per-employee utilization and satisfaction percentages."""

    employee_id: str
    skill: str
    assigned_hours: float
    contracted_hours: float
    utilization_pct: float
    satisfaction_pct: float


def utilization_satisfaction(
    schedule: Schedule, instance: Instance
) -> list[StaffMetrics]:
    """Utilization of contracted hours and preference-honoring satisfaction.

    Satisfaction starts from the honored share of declared unavailable slots,
    then loses five points per split-shift, rest, or hour-limit violation
    incident, floored at zero. Utilization is capped at 100 for display.
    """
    cons = instance.constraints
    rest_minutes = cons.min_rest_hours * 60
    metrics = []
    for emp in instance.employees:
        day_blocks = [
            extract_blocks(schedule, instance, emp.id, d) for d in range(instance.days)
        ]
        worked_slots = sum(b.n_slots for blocks in day_blocks for b in blocks)
        assigned_hours = 0.5 * worked_slots
        utilization = min(100.0, 100.0 * assigned_hours / emp.contracted_weekly_hours)

        total_unavailable = int(emp.unavailability.sum())
        violated = 0
        for d in range(instance.days):
            for block in day_blocks[d]:
                violated += int(
                    emp.unavailability[d, block.start_slot : block.end_slot + 1].sum()
                )
        satisfaction = 100.0 * (1.0 - violated / max(1, total_unavailable))

        incidents = 0
        weekly_hours = 0.0
        for d in range(instance.days):
            blocks = day_blocks[d]
            if len(blocks) > 1:
                incidents += len(blocks) - 1
            day_hours = sum(b.duration_hours for b in blocks)
            weekly_hours += day_hours
            if day_hours > emp.max_daily_hours:
                incidents += 1
            if d + 1 < instance.days and blocks and day_blocks[d + 1]:
                gap = (
                    24 * 60
                    - 30 * blocks[-1].end_slot
                    + 30 * day_blocks[d + 1][0].start_slot
                )
                if gap < rest_minutes:
                    incidents += 1
        if weekly_hours > emp.max_weekly_hours:
            incidents += 1

        satisfaction = max(0.0, satisfaction - 5.0 * incidents)
        metrics.append(
            StaffMetrics(
                employee_id=emp.id,
                skill=emp.skill.name,
                assigned_hours=assigned_hours,
                contracted_hours=float(emp.contracted_weekly_hours),
                utilization_pct=utilization,
                satisfaction_pct=satisfaction,
            )
        )
    return metrics


@dataclass(frozen=True)
class FrontMember:
    fitness: FitnessVector
    schedule: Schedule


@dataclass(frozen=True)
class RunReport:
    """Self-contained result of one solve: front, selection, and metrics."""

    method: str
    seed: int
    instance: Instance
    front: tuple[FrontMember, ...]
    selected: int
    coverage_rate: float
    coverage_defaulted: bool
    staff: tuple[StaffMetrics, ...]
    ga: GaConfig | None = None
    greedy_stats: GreedyStats | None = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValidationError(f"method must be one of {METHODS}")
        if not self.front:
            raise ValidationError("report front must be non-empty")
        if not 0 <= self.selected < len(self.front):
            raise ValidationError("selected index out of range")
        if not 0.0 <= self.coverage_rate <= 100.0:
            raise ValidationError("coverage_rate must be within [0, 100]")

    @property
    def selected_member(self) -> FrontMember:
        return self.front[self.selected]


def build_report(
    method: str,
    instance: Instance,
    front: Sequence[FrontMember],
    seed: int,
    ga: GaConfig | None = None,
    greedy_stats: GreedyStats | None = None,
) -> RunReport:
    selected = select_balanced([m.fitness for m in front])
    schedule = front[selected].schedule
    defaulted = int(instance.demand.min_required.sum()) == 0
    return RunReport(
        method=method,
        seed=seed,
        instance=instance,
        front=tuple(front),
        selected=selected,
        coverage_rate=coverage_rate(schedule, instance),
        coverage_defaulted=defaulted,
        staff=tuple(utilization_satisfaction(schedule, instance)),
        ga=ga,
        greedy_stats=greedy_stats,
    )


def solve(
    method: str,
    instance: Instance,
    config: GaConfig,
    seed: int,
    greedy_runs: int = 1000,
    progress=None,
) -> RunReport:
    """Run one method on an instance and assemble its report."""
    if method == "greedy":
        result = run_greedy_baseline(instance, greedy_runs, seed)
        front = [FrontMember(result.best_fitness, result.best_schedule)]
        return build_report(
            method, instance, front, seed, ga=None, greedy_stats=result.stats
        )
    cfg = replace(config, master_seed=seed)
    if method == "soga":
        result = run_soga(instance, cfg, progress=progress)
        front = [FrontMember(result.fitness, result.schedule)]
        return build_report(method, instance, front, seed, ga=cfg)
    if method == "moo":
        ranked = run_nsga2(instance, cfg, progress=progress)
        front = [FrontMember(ind.fitness, ind.schedule) for ind in ranked]
        return build_report(method, instance, front, seed, ga=cfg)
    raise ValidationError(f"method must be one of {METHODS}")


# ---------------------------------------------------------------------------
# report (de)serialization


def _fitness_to_doc(fitness: FitnessVector) -> dict:
    return {
        "f1": fitness.f1,
        "f2": fitness.f2,
        "f3": fitness.f3,
        "total": fitness.total,
        "breakdown": fitness.breakdown.as_dict(),
    }


def _doc_to_fitness(doc: dict) -> FitnessVector:
    if not isinstance(doc, dict) or set(doc) != {"f1", "f2", "f3", "total", "breakdown"}:
        raise DecodeError("fitness document must have keys f1, f2, f3, total, breakdown")
    breakdown = PenaltyBreakdown(**doc["breakdown"])
    vector = FitnessVector.from_breakdown(breakdown)
    for key in ("f1", "f2", "f3", "total"):
        if doc[key] != getattr(vector, key):
            raise ValidationError(f"fitness {key} disagrees with its breakdown")
    return vector


def report_to_doc(report: RunReport) -> dict:
    doc = {
        "method": report.method,
        "seed": report.seed,
        "instance": instance_to_doc(report.instance),
        "front": [
            {
                "fitness": _fitness_to_doc(m.fitness),
                "schedule": schedule_to_doc(m.schedule, report.instance),
            }
            for m in report.front
        ],
        "selected": report.selected,
        "coverage_rate": report.coverage_rate,
        "coverage_defaulted": report.coverage_defaulted,
        "staff": [
            {
                "employee_id": s.employee_id,
                "skill": s.skill,
                "assigned_hours": s.assigned_hours,
                "contracted_hours": s.contracted_hours,
                "utilization_pct": s.utilization_pct,
                "satisfaction_pct": s.satisfaction_pct,
            }
            for s in report.staff
        ],
        "ga": None
        if report.ga is None
        else {
            "population_size": report.ga.population_size,
            "generations": report.ga.generations,
            "tournament_size": report.ga.tournament_size,
            "mutation_rate": report.ga.mutation_rate,
            "crossover_mix": {
                "day_point": report.ga.crossover_mix.day_point,
                "uniform": report.ga.crossover_mix.uniform,
                "two_point_slot": report.ga.crossover_mix.two_point_slot,
            },
            "elitism_count": report.ga.elitism_count,
            "random_p_work": report.ga.random_p_work,
            "master_seed": report.ga.master_seed,
        },
        "greedy_stats": None
        if report.greedy_stats is None
        else {
            "runs": report.greedy_stats.runs,
            "mean_total": report.greedy_stats.mean_total,
            "min_total": report.greedy_stats.min_total,
            "max_total": report.greedy_stats.max_total,
            "mean_f1": report.greedy_stats.mean_f1,
            "mean_f2": report.greedy_stats.mean_f2,
            "mean_f3": report.greedy_stats.mean_f3,
        },
    }
    return doc


def doc_to_report(doc: dict) -> RunReport:
    if not isinstance(doc, dict):
        raise DecodeError("$: report document must be an object")
    required = {
        "method",
        "seed",
        "instance",
        "front",
        "selected",
        "coverage_rate",
        "coverage_defaulted",
        "staff",
        "ga",
        "greedy_stats",
    }
    if set(doc) != required:
        raise DecodeError(f"$: report document must have keys {sorted(required)}")
    instance = doc_to_instance(doc["instance"])
    front = tuple(
        FrontMember(
            fitness=_doc_to_fitness(member["fitness"]),
            schedule=doc_to_schedule(member["schedule"], instance),
        )
        for member in doc["front"]
    )
    ga_doc = doc["ga"]
    ga = None
    if ga_doc is not None:
        from .nsga2 import CrossoverMix

        ga = GaConfig(
            population_size=ga_doc["population_size"],
            generations=ga_doc["generations"],
            tournament_size=ga_doc["tournament_size"],
            mutation_rate=ga_doc["mutation_rate"],
            crossover_mix=CrossoverMix(**ga_doc["crossover_mix"]),
            elitism_count=ga_doc["elitism_count"],
            random_p_work=ga_doc["random_p_work"],
            master_seed=ga_doc["master_seed"],
        )
    stats_doc = doc["greedy_stats"]
    stats = None if stats_doc is None else GreedyStats(**stats_doc)
    return RunReport(
        method=doc["method"],
        seed=doc["seed"],
        instance=instance,
        front=front,
        selected=doc["selected"],
        coverage_rate=doc["coverage_rate"],
        coverage_defaulted=doc["coverage_defaulted"],
        staff=tuple(StaffMetrics(**s) for s in doc["staff"]),
        ga=ga,
        greedy_stats=stats,
    )


def encode_report(report: RunReport) -> str:
    return canonical_json(report_to_doc(report))


def decode_report(text: str) -> RunReport:
    import json

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"$: invalid JSON: {exc}") from None
    return doc_to_report(doc)


# ---------------------------------------------------------------------------
# method comparison


@dataclass(frozen=True)
class MethodRow:
    """One comparison-table row: a method's objective values on a unit."""

    unit_id: str
    method: str
    total: float
    f1: float
    f2: float
    f3: float
    improvement_vs_greedy_pct: float | None
    improvement_vs_soga_pct: float | None


def _derive_seed(master_seed: int, tag: str, index: int) -> int:
    return random.Random(f"{master_seed}:{tag}:{index}").getrandbits(63)


def compare_methods(
    profile: UnitProfile,
    config: GaConfig,
    seeds: int,
    greedy_runs: int = 1000,
    master_seed: int = 0,
    generator: GeneratorConfig | None = None,
) -> list[MethodRow]:
    """Greedy vs SOGA vs balanced MOO on a freshly generated instance.

    Greedy reports its mean over ``greedy_runs`` runs; each GA reports its
    best-of-``seeds`` result (balanced front member for the MOO).
    """
    if seeds < 1:
        raise ValidationError("compare needs at least one GA seed")
    instance = generate_instance(profile, master_seed, generator)
    greedy = run_greedy_baseline(instance, greedy_runs, _derive_seed(master_seed, "greedy", 0))

    soga_best = None
    for i in range(seeds):
        result = run_soga(
            instance, replace(config, master_seed=_derive_seed(master_seed, "soga", i))
        )
        if soga_best is None or result.fitness.total < soga_best.total:
            soga_best = result.fitness

    moo_best = None
    for i in range(seeds):
        front = run_nsga2(
            instance, replace(config, master_seed=_derive_seed(master_seed, "moo", i))
        )
        fitnesses = [ind.fitness for ind in front]
        balanced = fitnesses[select_balanced(fitnesses)]
        if moo_best is None or balanced.total < moo_best.total:
            moo_best = balanced

    greedy_total = greedy.stats.mean_total

    def improvement(value: float, base: float) -> float | None:
        if base <= 0:
            return None
        return 100.0 * (base - value) / base

    return [
        MethodRow(
            unit_id=instance.unit_id,
            method="greedy",
            total=greedy_total,
            f1=greedy.stats.mean_f1,
            f2=greedy.stats.mean_f2,
            f3=greedy.stats.mean_f3,
            improvement_vs_greedy_pct=None,
            improvement_vs_soga_pct=None,
        ),
        MethodRow(
            unit_id=instance.unit_id,
            method="soga",
            total=soga_best.total,
            f1=soga_best.f1,
            f2=soga_best.f2,
            f3=soga_best.f3,
            improvement_vs_greedy_pct=improvement(soga_best.total, greedy_total),
            improvement_vs_soga_pct=None,
        ),
        MethodRow(
            unit_id=instance.unit_id,
            method="moo",
            total=moo_best.total,
            f1=moo_best.f1,
            f2=moo_best.f2,
            f3=moo_best.f3,
            improvement_vs_greedy_pct=improvement(moo_best.total, greedy_total),
            improvement_vs_soga_pct=improvement(moo_best.total, soga_best.total),
        ),
    ]


# ---------------------------------------------------------------------------
# CSV emission (fixed six-decimal float precision)


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    import csv

    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def emit_pareto_csv(report: RunReport, path: str) -> None:
    header = ["index", "selected", "f1", "f2", "f3", "total"] + list(
        report.front[0].fitness.breakdown.as_dict()
    )
    rows = []
    for i, member in enumerate(report.front):
        b = member.fitness.breakdown.as_dict()
        rows.append(
            [i, int(i == report.selected)]
            + [_fmt(member.fitness.f1), _fmt(member.fitness.f2), _fmt(member.fitness.f3)]
            + [_fmt(member.fitness.total)]
            + [_fmt(v) for v in b.values()]
        )
    _write_csv(path, header, rows)


def _resolve_member(report: RunReport, select: str | None) -> FrontMember:
    if select is None or select == "balanced":
        return report.front[select_balanced([m.fitness for m in report.front])]
    objective = {"f1": 1, "f2": 2, "f3": 3}.get(select)
    if objective is None:
        raise ValidationError("select must be one of balanced, f1, f2, f3")
    return report.front[select_extreme([m.fitness for m in report.front], objective)]


def emit_gantt_csv(report: RunReport, path: str, select: str | None = None) -> None:
    """Flat shift/unavailability records for the selected schedule."""
    member = _resolve_member(report, select)
    instance = report.instance
    rows = []
    for emp in instance.employees:
        for d in range(instance.days):
            for block in extract_blocks(member.schedule, instance, emp.id, d):
                rows.append(
                    [emp.id, d, block.start_slot, block.end_slot, emp.skill.name, "shift"]
                )
            run_start = None
            for t in range(SLOTS_PER_DAY):
                unavailable = bool(emp.unavailability[d, t])
                if unavailable and run_start is None:
                    run_start = t
                elif not unavailable and run_start is not None:
                    rows.append([emp.id, d, run_start, t - 1, emp.skill.name, "unavailable"])
                    run_start = None
            if run_start is not None:
                rows.append(
                    [emp.id, d, run_start, SLOTS_PER_DAY - 1, emp.skill.name, "unavailable"]
                )
    _write_csv(
        path, ["employee_id", "day", "start_slot", "end_slot", "skill", "kind"], rows
    )


def emit_coverage_csv(
    report: RunReport, path: str, per_skill: bool = False, select: str | None = None
) -> None:
    member = _resolve_member(report, select)
    instance = report.instance
    if not per_skill:
        matrix = coverage_matrix(member.schedule, instance)
        required = instance.demand.min_required.sum(axis=2)
        assigned = matrix + required
        rows = [
            [d, t, int(assigned[d, t]), int(required[d, t]), int(matrix[d, t])]
            for d in range(instance.days)
            for t in range(assigned.shape[1])
        ]
        _write_csv(path, ["day", "slot", "assigned", "required_min", "difference"], rows)
        return
    counts = Evaluator(instance).skill_counts(member.schedule)
    required = instance.demand.min_required
    rows = []
    for d in range(instance.days):
        for t in range(required.shape[1]):
            for s, skill in enumerate(("L1", "L2", "L3", "L4")):
                assigned = int(counts[s, d, t])
                need = int(required[d, t, s])
                rows.append([d, t, skill, assigned, need, assigned - need])
    _write_csv(
        path, ["day", "slot", "skill", "assigned", "required_min", "difference"], rows
    )


def emit_staff_csv(report: RunReport, path: str, select: str | None = None) -> None:
    member = _resolve_member(report, select)
    staff = (
        report.staff
        if member is report.selected_member
        else tuple(utilization_satisfaction(member.schedule, report.instance))
    )
    rows = [
        [
            s.employee_id,
            s.skill,
            _fmt(s.assigned_hours),
            _fmt(s.contracted_hours),
            _fmt(s.utilization_pct),
            _fmt(s.satisfaction_pct),
        ]
        for s in staff
    ]
    _write_csv(
        path,
        [
            "employee_id",
            "skill",
            "assigned_hours",
            "contracted_hours",
            "utilization_pct",
            "satisfaction_pct",
        ],
        rows,
    )


def emit_compare_csv(rows: Sequence[MethodRow], path: str) -> None:
    header = [
        "unit_id",
        "method",
        "total",
        "f1",
        "f2",
        "f3",
        "improvement_vs_greedy_pct",
        "improvement_vs_soga_pct",
    ]
    out = []
    for row in rows:
        out.append(
            [
                row.unit_id,
                row.method,
                _fmt(row.total),
                _fmt(row.f1),
                _fmt(row.f2),
                _fmt(row.f3),
                "" if row.improvement_vs_greedy_pct is None else _fmt(row.improvement_vs_greedy_pct),
                "" if row.improvement_vs_soga_pct is None else _fmt(row.improvement_vs_soga_pct),
            ]
        )
    _write_csv(path, header, out)
