"""Elitist NSGA-II machinery: dominance, sorting, crowding, the main loop.

Reproducibility: one integer master seed derives every random stream. The
initial population uses ``random.Random(f"{seed}:init")``; generation ``t``
draws one 64-bit sub-seed per offspring from ``random.Random(f"{seed}:gen:{t}")``
so fitness evaluation (which consumes no randomness) can run in any order or
concurrently without perturbing the variation sequence.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .codec import encode_schedule
from .errors import ConfigError, ValidationError
from .evaluation import Evaluator, FitnessVector
from .model import Instance, Schedule
from .variation import (
    crossover_day_point,
    crossover_two_point_slot,
    crossover_uniform,
    init_population,
    mutate,
)


@dataclass(frozen=True)
class CrossoverMix:
    """Probabilities of picking each crossover operator; must sum to 1."""

    day_point: float = 0.0
    uniform: float = 0.0
    two_point_slot: float = 1.0

    def __post_init__(self) -> None:
        probs = (self.day_point, self.uniform, self.two_point_slot)
        if min(probs) < 0:
            raise ConfigError("crossover mix probabilities must be non-negative")
        if abs(sum(probs) - 1.0) > 1e-9:
            raise ConfigError("crossover mix probabilities must sum to 1")


@dataclass(frozen=True)
class GaConfig:
    """Shared GA configuration for both the multi- and single-objective runs."""

    population_size: int = 400
    generations: int = 50
    tournament_size: int = 2
    mutation_rate: float = 0.1
    crossover_mix: CrossoverMix = CrossoverMix()
    elitism_count: int = 2
    random_p_work: float = 0.7
    master_seed: int = 0

    def __post_init__(self) -> None:
        if self.population_size < 2 or self.population_size % 2 != 0:
            raise ConfigError("population_size must be even and at least 2")
        if self.generations < 1:
            raise ConfigError("generations must be at least 1")
        if self.tournament_size < 1:
            raise ConfigError("tournament_size must be at least 1")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ConfigError("mutation_rate must be within [0, 1]")
        if not 0 <= self.elitism_count <= self.population_size:
            raise ConfigError("elitism_count must be within [0, population_size]")
        if not 0.0 <= self.random_p_work <= 1.0:
            raise ConfigError("random_p_work must be within [0, 1]")


@dataclass(frozen=True)
class RankedIndividual:
    """A schedule annotated with its non-domination rank and crowding distance."""

    schedule: Schedule
    fitness: FitnessVector
    rank: int
    crowding: float

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValidationError("rank must be >= 1")
        if self.crowding < 0:
            raise ValidationError("crowding must be >= 0 (math.inf for boundaries)")


@dataclass(frozen=True)
class ProgressRecord:
    """One line of the per-generation progress stream."""

    generation: int
    front_size: int
    min_f1: float
    min_f2: float
    min_f3: float
    best_total: float

    def as_dict(self) -> dict:
        return {
            "generation": self.generation,
            "front_size": self.front_size,
            "min_f1": self.min_f1,
            "min_f2": self.min_f2,
            "min_f3": self.min_f3,
            "best_total": self.best_total,
        }


ProgressCallback = Callable[[ProgressRecord], None]


def dominates(a: FitnessVector, b: FitnessVector) -> bool:
    """True iff ``a`` is no worse than ``b`` in every objective and better in one."""
    return (
        a.f1 <= b.f1
        and a.f2 <= b.f2
        and a.f3 <= b.f3
        and (a.f1 < b.f1 or a.f2 < b.f2 or a.f3 < b.f3)
    )


def fast_non_dominated_sort(fitnesses: Sequence[FitnessVector]) -> list[list[int]]:
    """Partition indices into non-domination fronts (front 1 first)."""
    n = len(fitnesses)
    if n == 0:
        raise ValidationError("cannot sort an empty population")
    objs = [(f.f1, f.f2, f.f3) for f in fitnesses]
    dominated: list[list[int]] = [[] for _ in range(n)]
    counts = [0] * n
    for p in range(n):
        ap = objs[p]
        for q in range(p + 1, n):
            aq = objs[q]
            if ap[0] <= aq[0] and ap[1] <= aq[1] and ap[2] <= aq[2] and ap != aq:
                dominated[p].append(q)
                counts[q] += 1
            elif aq[0] <= ap[0] and aq[1] <= ap[1] and aq[2] <= ap[2] and ap != aq:
                dominated[q].append(p)
                counts[p] += 1
    fronts = []
    current = [i for i in range(n) if counts[i] == 0]
    while current:
        fronts.append(current)
        nxt = []
        for p in current:
            for q in dominated[p]:
                counts[q] -= 1
                if counts[q] == 0:
                    nxt.append(q)
        nxt.sort()
        current = nxt
    return fronts


def crowding_distance(front: Sequence[FitnessVector]) -> list[float]:
    """Per-individual crowding distance within one front.

    Boundary individuals per objective get the infinity sentinel; degenerate
    objectives (max equals min) contribute zero to everyone. Fronts of one or
    two are all-boundary.
    """
    n = len(front)
    if n == 0:
        raise ValidationError("cannot compute crowding of an empty front")
    if n <= 2:
        return [math.inf] * n
    distances = [0.0] * n
    for key in (lambda f: f.f1, lambda f: f.f2, lambda f: f.f3):
        order = sorted(range(n), key=lambda i: key(front[i]))
        lo = key(front[order[0]])
        hi = key(front[order[-1]])
        if hi == lo:
            continue
        span = hi - lo
        distances[order[0]] = math.inf
        distances[order[-1]] = math.inf
        for j in range(1, n - 1):
            gap = key(front[order[j + 1]]) - key(front[order[j - 1]])
            distances[order[j]] += gap / span
    return distances


def tournament_select(
    ranked: Sequence[RankedIndividual], rng: random.Random, tournament_size: int = 2
) -> RankedIndividual:
    """Binary (by default) tournament: lower rank wins, then higher crowding,
    then lower population index."""
    if not ranked:
        raise ValidationError("cannot select from an empty population")
    best = None
    best_key = None
    for _ in range(tournament_size):
        i = rng.randrange(len(ranked))
        key = (ranked[i].rank, -ranked[i].crowding, i)
        if best_key is None or key < best_key:
            best = ranked[i]
            best_key = key
    return best


def rank_population(
    schedules: Sequence[Schedule], fitnesses: Sequence[FitnessVector]
) -> list[RankedIndividual]:
    """Annotate a population with ranks and crowding distances."""
    fronts = fast_non_dominated_sort(fitnesses)
    rank = [0] * len(fitnesses)
    crowd = [0.0] * len(fitnesses)
    for front_index, front in enumerate(fronts, start=1):
        cds = crowding_distance([fitnesses[i] for i in front])
        for i, cd in zip(front, cds):
            rank[i] = front_index
            crowd[i] = cd
    return [
        RankedIndividual(s, f, rank[i], crowd[i])
        for i, (s, f) in enumerate(zip(schedules, fitnesses))
    ]


def pick_crossover(mix: CrossoverMix, rng: random.Random):
    r = rng.random()
    if r < mix.day_point:
        return crossover_day_point
    if r < mix.day_point + mix.uniform:
        return crossover_uniform
    return crossover_two_point_slot


def make_offspring(
    ranked: Sequence[RankedIndividual],
    instance: Instance,
    config: GaConfig,
    rng: random.Random,
) -> Schedule:
    """Select two parents, cross them, then mutate the child."""
    p1 = tournament_select(ranked, rng, config.tournament_size)
    p2 = tournament_select(ranked, rng, config.tournament_size)
    op = pick_crossover(config.crossover_mix, rng)
    child = op(p1.schedule, p2.schedule, rng)
    return mutate(child, instance, config, rng)


def _check_runnable(instance: Instance, config: GaConfig) -> None:
    if not instance.employees:
        raise ConfigError("instance has no employees")
    if config.population_size % 2 != 0 or config.population_size < 2:
        raise ConfigError("population_size must be even and at least 2")
    if config.generations < 1:
        raise ConfigError("generations must be at least 1")


def _emit(
    progress: ProgressCallback | None,
    generation: int,
    ranked: Sequence[RankedIndividual],
) -> None:
    if progress is None:
        return
    fits = [ind.fitness for ind in ranked]
    progress(
        ProgressRecord(
            generation=generation,
            front_size=sum(1 for ind in ranked if ind.rank == 1),
            min_f1=min(f.f1 for f in fits),
            min_f2=min(f.f2 for f in fits),
            min_f3=min(f.f3 for f in fits),
            best_total=min(f.total for f in fits),
        )
    )


def run_nsga2(
    instance: Instance,
    config: GaConfig,
    progress: ProgressCallback | None = None,
) -> list[RankedIndividual]:
    """Run the elitist NSGA-II loop and return the deduplicated final front 1.

    Each generation builds N offspring by tournament + crossover + mutation,
    merges parents and offspring, re-sorts, and refills the population front
    by front, truncating the last partial front by descending crowding
    distance. Deterministic for a fixed master seed.
    """
    _check_runnable(instance, config)
    evaluator = Evaluator(instance)
    n = config.population_size
    root = str(config.master_seed)

    population = init_population(instance, config, random.Random(f"{root}:init"))
    fitnesses = [evaluator.evaluate(s) for s in population]
    ranked = rank_population(population, fitnesses)
    _emit(progress, 0, ranked)

    for t in range(1, config.generations + 1):
        gen_rng = random.Random(f"{root}:gen:{t}")
        seeds = [gen_rng.getrandbits(64) for _ in range(n)]
        offspring = [
            make_offspring(ranked, instance, config, random.Random(s)) for s in seeds
        ]
        off_fits = [evaluator.evaluate(s) for s in offspring]

        merged = population + offspring
        merged_fits = fitnesses + off_fits
        fronts = fast_non_dominated_sort(merged_fits)

        chosen: list[int] = []
        rank_of: dict[int, int] = {}
        crowd_of: dict[int, float] = {}
        for front_index, front in enumerate(fronts, start=1):
            cds = crowding_distance([merged_fits[i] for i in front])
            for i, cd in zip(front, cds):
                rank_of[i] = front_index
                crowd_of[i] = cd
            if len(chosen) + len(front) <= n:
                chosen.extend(front)
            else:
                room = n - len(chosen)
                order = sorted(range(len(front)), key=lambda j: (-cds[j], front[j]))
                chosen.extend(front[j] for j in order[:room])
            if len(chosen) == n:
                break

        population = [merged[i] for i in chosen]
        fitnesses = [merged_fits[i] for i in chosen]
        ranked = [
            RankedIndividual(merged[i], merged_fits[i], rank_of[i], crowd_of[i])
            for i in chosen
        ]
        _emit(progress, t, ranked)

    front_one = [ind for ind in ranked if ind.rank == 1]
    seen: set[str] = set()
    unique = []
    for ind in front_one:
        key = encode_schedule(ind.schedule, instance)
        if key not in seen:
            seen.add(key)
            unique.append(ind)
    return unique
