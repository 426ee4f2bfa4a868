"""Comparison baselines: repeated randomized greedy and the single-objective GA.

The SOGA shares the hybrid initialization and variation operators with the
multi-objective engine but selects on the scalar total fitness (the unweighted
sum f1 + f2 + f3) and carries the best ``elitism_count`` individuals unchanged
into each next generation, so its best total never increases.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import ConfigError
from .evaluation import Evaluator, FitnessVector
from .model import Instance, Schedule
from .nsga2 import GaConfig, ProgressCallback, ProgressRecord, pick_crossover
from .variation import greedy_construct, init_population, mutate


@dataclass(frozen=True)
class GreedyStats:
    """Total-fitness statistics over repeated greedy runs."""

    runs: int
    mean_total: float
    min_total: float
    max_total: float
    mean_f1: float
    mean_f2: float
    mean_f3: float


@dataclass(frozen=True)
class GreedyBaselineResult:
    best_schedule: Schedule
    best_fitness: FitnessVector
    stats: GreedyStats


@dataclass(frozen=True)
class SogaResult:
    schedule: Schedule
    fitness: FitnessVector


def run_greedy_baseline(
    instance: Instance, runs: int, seed: int
) -> GreedyBaselineResult:
    """Run the greedy constructor ``runs`` times on independent sub-streams.

    Returns the best schedule by total fitness plus mean/min/max statistics.
    """
    if runs < 1:
        raise ConfigError("greedy baseline needs at least one run")
    evaluator = Evaluator(instance)
    best_schedule = None
    best_fitness = None
    totals = []
    sums = [0.0, 0.0, 0.0]
    for i in range(runs):
        schedule = greedy_construct(instance, random.Random(f"{seed}:greedy:{i}"))
        fitness = evaluator.evaluate(schedule)
        totals.append(fitness.total)
        sums[0] += fitness.f1
        sums[1] += fitness.f2
        sums[2] += fitness.f3
        if best_fitness is None or fitness.total < best_fitness.total:
            best_schedule = schedule
            best_fitness = fitness
    stats = GreedyStats(
        runs=runs,
        mean_total=sum(totals) / runs,
        min_total=min(totals),
        max_total=max(totals),
        mean_f1=sums[0] / runs,
        mean_f2=sums[1] / runs,
        mean_f3=sums[2] / runs,
    )
    return GreedyBaselineResult(best_schedule, best_fitness, stats)


def _scalar_tournament(
    fitnesses: list[FitnessVector], rng: random.Random, tournament_size: int
) -> int:
    best = None
    best_key = None
    for _ in range(tournament_size):
        i = rng.randrange(len(fitnesses))
        key = (fitnesses[i].total, i)
        if best_key is None or key < best_key:
            best = i
            best_key = key
    return best


def run_soga(
    instance: Instance,
    config: GaConfig,
    seed: int | None = None,
    progress: ProgressCallback | None = None,
) -> SogaResult:
    """Single-objective GA minimizing total fitness; returns the final best."""
    if not instance.employees:
        raise ConfigError("instance has no employees")
    evaluator = Evaluator(instance)
    n = config.population_size
    root = str(config.master_seed if seed is None else seed)

    population = init_population(instance, config, random.Random(f"{root}:init"))
    fitnesses = [evaluator.evaluate(s) for s in population]
    _emit_scalar(progress, 0, fitnesses)

    for t in range(1, config.generations + 1):
        order = sorted(range(n), key=lambda i: (fitnesses[i].total, i))
        elites = [population[i] for i in order[: config.elitism_count]]
        elite_fits = [fitnesses[i] for i in order[: config.elitism_count]]

        gen_rng = random.Random(f"{root}:gen:{t}")
        seeds = [gen_rng.getrandbits(64) for _ in range(n - config.elitism_count)]
        children = []
        for s in seeds:
            rng = random.Random(s)
            p1 = population[_scalar_tournament(fitnesses, rng, config.tournament_size)]
            p2 = population[_scalar_tournament(fitnesses, rng, config.tournament_size)]
            child = pick_crossover(config.crossover_mix, rng)(p1, p2, rng)
            children.append(mutate(child, instance, config, rng))

        population = elites + children
        fitnesses = elite_fits + [evaluator.evaluate(c) for c in children]
        _emit_scalar(progress, t, fitnesses)

    best = min(range(n), key=lambda i: (fitnesses[i].total, i))
    return SogaResult(population[best], fitnesses[best])


def _emit_scalar(
    progress: ProgressCallback | None, generation: int, fitnesses: list[FitnessVector]
) -> None:
    if progress is None:
        return
    progress(
        ProgressRecord(
            generation=generation,
            front_size=1,
            min_f1=min(f.f1 for f in fitnesses),
            min_f2=min(f.f2 for f in fitnesses),
            min_f3=min(f.f3 for f in fitnesses),
            best_total=min(f.total for f in fitnesses),
        )
    )
