"""Corn planting schedules that keep weekly harvest close to storage capacity.

The library turns a set of seed populations (planting windows, GDU
requirements, expected yields) plus a daily GDU forecast into planting
schedules, searching with an integer-coded NSGA-II under three criterion
models, comparing the pooled Pareto fronts by exact hypervolume, and picking
one final schedule with TOPSIS.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    GduDataError,
    NoHarvestError,
    SchemaError,
    UnharvestableError,
)
from .forecast import (
    GDU_FLOOR,
    GduForecast,
    GduHistory,
    average_forecast,
    cumulative_gdu,
    horizon_dates,
)
from .model import (
    Instance,
    Schedule,
    SeedPopulation,
    WeeklyHarvest,
    schedule_in_windows,
    validate_instance,
)
from .harvest import harvest_day, harvest_days, week_of, weekly_harvest
from .objectives import (
    ObjectiveVector,
    eval_model1,
    eval_model2,
    eval_model3,
    eval_scenario2,
)
from .fronts import (
    Relation,
    ScaledFront,
    dominates,
    hypervolume,
    pareto_front,
    scale_to_unit,
    topsis_select,
)
from .nsga2 import (
    EvaluatedMember,
    EvaluatedPopulation,
    GaParams,
    crossover,
    crowding_distance,
    fast_nondominated_sort,
    mutate,
    run_nsga2,
)
from .pipeline import (
    StrategyReport,
    TuningGrid,
    baseline_schedule,
    build_grid,
    report_to_dict,
    run_strategy,
)
from .synth import SyntheticConfig, generate_instance

__all__ = [
    "ConfigError", "GduDataError", "NoHarvestError", "SchemaError", "UnharvestableError",
    "GDU_FLOOR", "GduForecast", "GduHistory", "average_forecast", "cumulative_gdu",
    "horizon_dates",
    "Instance", "Schedule", "SeedPopulation", "WeeklyHarvest", "schedule_in_windows",
    "validate_instance",
    "harvest_day", "harvest_days", "week_of", "weekly_harvest",
    "ObjectiveVector", "eval_model1", "eval_model2", "eval_model3", "eval_scenario2",
    "Relation", "ScaledFront", "dominates", "hypervolume", "pareto_front",
    "scale_to_unit", "topsis_select",
    "EvaluatedMember", "EvaluatedPopulation", "GaParams", "crossover",
    "crowding_distance", "fast_nondominated_sort", "mutate", "run_nsga2",
    "StrategyReport", "TuningGrid", "baseline_schedule", "build_grid",
    "report_to_dict", "run_strategy",
    "SyntheticConfig", "generate_instance",
    "__version__",
]
