"""Multi-objective genetic algorithm for hospital-unit staff rostering."""

from .baselines import (
    GreedyBaselineResult,
    GreedyStats,
    SogaResult,
    run_greedy_baseline,
    run_soga,
)
from .codec import (
    decode_instance,
    decode_schedule,
    encode_instance,
    encode_schedule,
)
from .errors import ConfigError, DecodeError, RosterError, ValidationError
from .evaluation import (
    Evaluator,
    FitnessVector,
    PenaltyBreakdown,
    cost_penalties,
    dissatisfaction_penalties,
    evaluate,
    service_penalties,
)
from .instances import (
    GeneratorConfig,
    UnitProfile,
    builtin_profiles,
    generate_instance,
    profile_by_name,
)
from .model import (
    ConstraintParams,
    DemandGrid,
    Employee,
    Instance,
    PenaltyWeights,
    Schedule,
    ShiftBlock,
    Skill,
    SKILLS,
    SLOTS_PER_DAY,
    extract_blocks,
    headcount,
)
from .nsga2 import (
    CrossoverMix,
    GaConfig,
    ProgressRecord,
    RankedIndividual,
    crowding_distance,
    dominates,
    fast_non_dominated_sort,
    run_nsga2,
    tournament_select,
)
from .reports import (
    MethodRow,
    RunReport,
    compare_methods,
    coverage_matrix,
    coverage_rate,
    select_balanced,
    select_extreme,
    solve,
    utilization_satisfaction,
)
from .variation import (
    crossover_day_point,
    crossover_two_point_slot,
    crossover_uniform,
    greedy_construct,
    init_population,
    mutate,
    random_schedule,
)

__version__ = "0.1.0"
