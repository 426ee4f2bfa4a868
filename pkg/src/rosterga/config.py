"""Config-file handling: GA parameters, penalty weights, generator knobs.

The config file is JSON with three optional sections (``ga``, ``weights``,
``generator``); every omitted key falls back to the package default. Any
malformed value raises :class:`ConfigError`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ConfigError, ValidationError
from .instances import GeneratorConfig
from .model import ConstraintParams, PenaltyWeights
from .nsga2 import CrossoverMix, GaConfig


@dataclass(frozen=True)
class AppConfig:
    ga: GaConfig
    weights: PenaltyWeights
    generator: GeneratorConfig


def default_config() -> AppConfig:
    return AppConfig(ga=GaConfig(), weights=PenaltyWeights(), generator=GeneratorConfig())


def config_to_doc(config: AppConfig) -> dict:
    ga = config.ga
    gen = config.generator
    return {
        "ga": {
            "population_size": ga.population_size,
            "generations": ga.generations,
            "tournament_size": ga.tournament_size,
            "mutation_rate": ga.mutation_rate,
            "crossover_mix": {
                "day_point": ga.crossover_mix.day_point,
                "uniform": ga.crossover_mix.uniform,
                "two_point_slot": ga.crossover_mix.two_point_slot,
            },
            "elitism_count": ga.elitism_count,
            "random_p_work": ga.random_p_work,
            "master_seed": ga.master_seed,
        },
        "weights": config.weights.as_dict(),
        "generator": {
            "days": gen.days,
            "operating_start": gen.operating_start,
            "operating_end": gen.operating_end,
            "base_demand_fraction": gen.base_demand_fraction,
            "midday_multiplier": gen.midday_multiplier,
            "weekend_multiplier": gen.weekend_multiplier,
            "midday_start": gen.midday_start,
            "midday_end": gen.midday_end,
            "weekend_days": list(gen.weekend_days),
            "supervision_floor": gen.supervision_floor,
            "demand_jitter": gen.demand_jitter,
            "ideal_offset": gen.ideal_offset,
            "day_off_probability": gen.day_off_probability,
            "half_day_probability": gen.half_day_probability,
            "half_day_slots": gen.half_day_slots,
            "max_daily_hours": gen.max_daily_hours,
            "max_weekly_hours": gen.max_weekly_hours,
            "contracted_weekly_hours": gen.contracted_weekly_hours,
            "min_shift_hours": gen.constraints.min_shift_hours,
            "max_shift_hours": gen.constraints.max_shift_hours,
            "min_rest_hours": gen.constraints.min_rest_hours,
        },
    }


def _section(doc: dict, name: str) -> dict:
    section = doc.get(name, {})
    if not isinstance(section, dict):
        raise ConfigError(f"config section {name!r} must be an object")
    return dict(section)


def _take(section: dict, defaults: dict, section_name: str) -> dict:
    unknown = set(section) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown {section_name} config keys: {sorted(unknown)}")
    merged = dict(defaults)
    merged.update(section)
    return merged


def doc_to_config(doc: dict) -> AppConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    unknown = set(doc) - {"ga", "weights", "generator"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    defaults = config_to_doc(default_config())

    ga_doc = _take(_section(doc, "ga"), defaults["ga"], "ga")
    mix_doc = ga_doc.pop("crossover_mix")
    if not isinstance(mix_doc, dict):
        raise ConfigError("ga.crossover_mix must be an object")
    mix_doc = _take(mix_doc, defaults["ga"]["crossover_mix"], "ga.crossover_mix")
    weights_doc = _take(_section(doc, "weights"), defaults["weights"], "weights")
    gen_doc = _take(_section(doc, "generator"), defaults["generator"], "generator")

    try:
        ga = GaConfig(crossover_mix=CrossoverMix(**mix_doc), **ga_doc)
        weights = PenaltyWeights(**weights_doc)
        constraints = ConstraintParams(
            min_shift_hours=gen_doc.pop("min_shift_hours"),
            max_shift_hours=gen_doc.pop("max_shift_hours"),
            min_rest_hours=gen_doc.pop("min_rest_hours"),
        )
        weekend_days = gen_doc.pop("weekend_days")
        if not isinstance(weekend_days, list):
            raise ConfigError("generator.weekend_days must be an array")
        generator = GeneratorConfig(
            weekend_days=tuple(weekend_days), constraints=constraints, **gen_doc
        )
    except ValidationError as exc:
        raise ConfigError(str(exc)) from None
    except TypeError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return AppConfig(ga=ga, weights=weights, generator=generator)


def load_config(path: str | None) -> AppConfig:
    """Load a config file, or the defaults when ``path`` is None."""
    if path is None:
        return default_config()
    try:
        with open(path) as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from None
    return doc_to_config(doc)
