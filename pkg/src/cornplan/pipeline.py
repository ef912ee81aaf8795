"""End-to-end solution strategy: tuning sweep per model, pooling, per-model
Pareto fronts, shared unit scaling, hypervolume model selection, and the
TOPSIS final pick.

All three models are swept over the full tuning grid; every resulting
schedule, no matter which model produced it, is re-evaluated under the base
model's criteria before fronts are formed, because the base model is the
yardstick the final solution is judged by. Hypervolumes of the per-model
fronts (scaled together, against a common reference point) decide which
model's front the final solution is drawn from.
"""

from __future__ import annotations

import dataclasses
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, TextIO

import numpy as np

from . import __version__ as _version
from .forecast import GduForecast
from .fronts import ScaledFront, apply_scaling, hypervolume, pareto_front, topsis_select
from .harvest import harvest_days, weekly_harvest
from .model import Instance, Schedule, validate_instance
from .nsga2 import GaParams, run_nsga2
from .objectives import model_values


@dataclass(frozen=True)
class TuningGrid:
    """Three levels per tuning parameter; the sweep takes their product.

    ``scale_factor`` shrinks population sizes and generation counts for
    desk-scale runs while keeping the full combination structure (the full
    grid is cluster-scale work).
    """

    crossover_rates: tuple[float, ...] = (0.5, 0.75, 1.0)
    mutation_rates: tuple[float, ...] = (0.001, 0.01, 0.1)
    population_multipliers: tuple[int, ...] = (1, 2, 3)
    generation_counts: tuple[int, ...] = (8000, 10000, 12000)
    penalty_powers: tuple[int, ...] = (1, 2, 3)
    scale_factor: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.scale_factor <= 1.0:
            raise ValueError(f"scale_factor must lie in (0, 1], got {self.scale_factor}")


def _even_size(x: float) -> int:
    return max(2, 2 * round(x / 2))


def derive_seed(base_seed: int, model_id: int, combo_index: int) -> int:
    """Stable per-combination seed so one base seed reproduces the sweep."""
    seq = np.random.SeedSequence([int(base_seed), int(model_id), int(combo_index)])
    return int(seq.generate_state(1, np.uint64)[0])


def build_grid(model_id: int, instance_size: int, grid: Optional[TuningGrid] = None,
               base_seed: int = 0) -> list[GaParams]:
    """Materialize the tuning grid for one model in deterministic order.

    Population levels are multiples of the instance size. Scaled sizes are
    rounded to the nearest even positive integer and scaled generation counts
    to a positive integer; combinations stay distinct even when scaling makes
    their numeric values coincide.
    """
    if instance_size < 1:
        raise ValueError("instance_size must be >= 1")
    grid = grid or TuningGrid()
    sf = grid.scale_factor
    sizes = [_even_size(mult * instance_size * sf) for mult in grid.population_multipliers]
    generations = [max(1, round(g * sf)) for g in grid.generation_counts]
    powers = grid.penalty_powers if model_id in (2, 3) else (1,)
    params = []
    combos = itertools.product(grid.crossover_rates, grid.mutation_rates, sizes, generations, powers)
    for index, (cx, mu, size, gens, power) in enumerate(combos):
        params.append(GaParams(
            population_size=size,
            generations=gens,
            crossover_rate=cx,
            mutation_rate=mu,
            penalty_power=power,
            rng_seed=derive_seed(base_seed, model_id, index),
        ))
    return params


def baseline_schedule(instance: Instance) -> Schedule:
    """The as-given planting days, clamped into each window."""
    days = []
    for p in instance.populations:
        if p.original_day is None:
            raise ValueError(f"population {p.id} has no original planting day")
        days.append(min(max(p.original_day, p.early_day), p.late_day))
    return Schedule(tuple(days))


@dataclass(frozen=True)
class ModelOutcome:
    model_id: int
    n_runs: int
    n_failed: int
    pooled_size: int
    front_values: np.ndarray
    front_schedules: tuple[Schedule, ...]
    front_combo_ids: tuple[int, ...]
    hypervolume: float


@dataclass(frozen=True)
class StrategyReport:
    scenario: int
    instance_hash: str
    base_seed: int
    reference: tuple[float, ...]
    outcomes: tuple[ModelOutcome, ...]
    selected_model: int
    selected_index: int
    selected_schedule: Schedule
    selected_values: tuple[float, ...]
    topsis_weights: tuple[float, ...]
    topsis_scores: tuple[float, ...]
    baseline: Optional[Schedule]
    baseline_values: Optional[tuple[float, ...]]
    weekly_totals: tuple[int, ...]
    first_week: int
    harvest_weeks: tuple[int, ...]
    run_manifest: tuple[dict, ...]
    warnings: tuple[str, ...] = ()

    def outcome(self, model_id: int) -> ModelOutcome:
        for o in self.outcomes:
            if o.model_id == model_id:
                return o
        raise KeyError(model_id)


def _execute_run(task):
    instance, forecast, model_id, params, capacity_bounds = task
    result = run_nsga2(instance, forecast, model_id, params, capacity_bounds=capacity_bounds)
    return [(m.schedule.days, m.schedule.capacity_hat) for m in result.members]


def _base_values(schedule: Schedule, instance: Instance, forecast: GduForecast,
                 capacity_bounds) -> tuple[float, ...]:
    """Base-model criteria for a schedule; capacity variant appends its own
    capacity as the fifth entry."""
    wh = weekly_harvest(schedule, instance, forecast)
    totals = np.asarray(wh.totals, dtype=np.int64)
    if capacity_bounds is not None:
        cap = float(schedule.capacity_hat)
        return tuple(model_values(totals, cap, 1)) + (cap,)
    return tuple(model_values(totals, float(instance.capacity), 1))


def run_strategy(instance: Instance, forecast: GduForecast, *,
                 grid: Optional[TuningGrid] = None,
                 base_seed: int = 0,
                 jobs: int = 1,
                 capacity_bounds: Optional[tuple[float, float]] = None,
                 reference_value: float = 2.0,
                 log: Optional[TextIO] = None) -> StrategyReport:
    """Full sweep-pool-select pipeline; deterministic for a fixed base seed
    at any worker count.

    Runs every grid combination of every model, pools each model's final
    populations, re-evaluates everything under the base criteria, extracts
    per-model Pareto fronts, scales the pooled fronts to the unit box,
    compares scaled fronts by exact hypervolume, and picks the final schedule
    from the winning front with TOPSIS under equal weights.
    """
    violations = validate_instance(instance, forecast)
    if violations:
        raise ValueError("instance fails validation: " + "; ".join(violations))
    scenario2 = capacity_bounds is not None
    if not scenario2 and (instance.capacity is None or instance.capacity <= 0):
        raise ValueError("instance has no capacity; pass capacity_bounds to co-optimize one")
    grid = grid or TuningGrid()
    jobs = max(1, int(jobs))
    arity = 5 if scenario2 else 4
    reference = (float(reference_value),) * arity

    tasks = []
    manifest = []
    for model_id in (1, 2, 3):
        for combo_id, params in enumerate(build_grid(model_id, instance.n, grid, base_seed)):
            tasks.append((model_id, combo_id, params))
            manifest.append({
                "model": model_id,
                "combo_id": combo_id,
                "population_size": params.population_size,
                "generations": params.generations,
                "crossover_rate": params.crossover_rate,
                "mutation_rate": params.mutation_rate,
                "penalty_power": params.penalty_power,
                "rng_seed": params.rng_seed,
            })

    payloads = [(instance, forecast, model_id, params, capacity_bounds)
                for (model_id, _, params) in tasks]
    results: dict[tuple[int, int], list] = {}
    warnings: list[str] = []
    if jobs == 1:
        outcomes_iter = []
        for payload in payloads:
            try:
                outcomes_iter.append(_execute_run(payload))
            except Exception as err:  # recorded, not fatal unless a model loses every run
                outcomes_iter.append(err)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_execute_run, payload) for payload in payloads]
            outcomes_iter = []
            for future in futures:
                try:
                    outcomes_iter.append(future.result())
                except Exception as err:
                    outcomes_iter.append(err)
    for (model_id, combo_id, params), outcome in zip(tasks, outcomes_iter):
        if isinstance(outcome, Exception):
            warnings.append(f"model {model_id} combination {combo_id} failed: {outcome}")
            continue
        results[(model_id, combo_id)] = outcome
        if log is not None:
            print(f"model {model_id} combination {combo_id} done "
                  f"({len(outcome)} members)", file=log)

    outcomes = []
    fronts_values = []
    for model_id in (1, 2, 3):
        pooled_schedules: list[Schedule] = []
        pooled_combo: list[int] = []
        n_runs = n_failed = 0
        for (mid, combo_id), members in sorted(results.items()):
            if mid != model_id:
                continue
            n_runs += 1
            for days, cap in members:
                pooled_schedules.append(Schedule(days, cap))
                pooled_combo.append(combo_id)
        n_failed = sum(1 for w in warnings if w.startswith(f"model {model_id} "))
        if n_runs == 0:
            raise RuntimeError(f"every run of model {model_id} failed; cannot continue")
        values = np.array([
            _base_values(s, instance, forecast, capacity_bounds) for s in pooled_schedules
        ])
        front_idx = pareto_front(values)
        outcomes.append(ModelOutcome(
            model_id=model_id,
            n_runs=n_runs,
            n_failed=n_failed,
            pooled_size=len(pooled_schedules),
            front_values=values[front_idx],
            front_schedules=tuple(pooled_schedules[i] for i in front_idx),
            front_combo_ids=tuple(pooled_combo[i] for i in front_idx),
            hypervolume=0.0,  # filled in after shared scaling
        ))
        fronts_values.append(values[front_idx])

    pooled_front_values = np.vstack(fronts_values)
    bounds_low = pooled_front_values.min(axis=0)
    bounds_high = pooled_front_values.max(axis=0)
    hypervolumes = []
    for outcome in outcomes:
        front = ScaledFront(
            values=apply_scaling(outcome.front_values, (bounds_low, bounds_high)),
            bounds_low=bounds_low,
            bounds_high=bounds_high,
            source_model=outcome.model_id,
            schedules=outcome.front_schedules,
        )
        hypervolumes.append(hypervolume(front.values, reference))
    outcomes = [
        dataclasses.replace(o, hypervolume=v)
        for o, v in zip(outcomes, hypervolumes)
    ]
    selected_model = int(np.argmax(hypervolumes)) + 1
    winner = outcomes[selected_model - 1]

    weights = (1.0 / arity,) * arity
    selected_index, scores = topsis_select(winner.front_values, weights)
    selected_schedule = winner.front_schedules[selected_index]
    selected_values = tuple(float(v) for v in winner.front_values[selected_index])

    baseline = baseline_values = None
    if all(p.original_day is not None for p in instance.populations):
        baseline = baseline_schedule(instance)
        if scenario2:
            # No given capacity to judge the baseline at; use the bounds midpoint.
            mid = 0.5 * (capacity_bounds[0] + capacity_bounds[1])
            baseline = Schedule(baseline.days, mid)
        baseline_values = _base_values(baseline, instance, forecast, capacity_bounds)

    wh = weekly_harvest(selected_schedule, instance, forecast)
    selected_harvest_days = harvest_days(selected_schedule.as_array(),
                                         instance.required_gdus, forecast)
    selected_weeks = (selected_harvest_days - 1) // 7 + 1 - wh.first_week + 1
    return StrategyReport(
        scenario=2 if scenario2 else 1,
        instance_hash=instance.fingerprint(),
        base_seed=base_seed,
        reference=reference,
        outcomes=tuple(outcomes),
        selected_model=selected_model,
        selected_index=selected_index,
        selected_schedule=selected_schedule,
        selected_values=selected_values,
        topsis_weights=weights,
        topsis_scores=tuple(float(s) for s in scores),
        baseline=baseline,
        baseline_values=baseline_values,
        weekly_totals=wh.totals,
        first_week=wh.first_week,
        harvest_weeks=tuple(int(w) for w in selected_weeks),
        run_manifest=tuple(manifest),
        warnings=tuple(warnings),
    )


def report_to_dict(report: StrategyReport, instance: Instance,
                   horizon_start=None, timing_seconds: Optional[float] = None) -> dict:
    """JSON-ready view of a strategy report. ``timing`` is the only
    nondeterministic field; strip it when comparing runs."""
    models = {}
    for o in report.outcomes:
        models[str(o.model_id)] = {
            "runs": o.n_runs,
            "failed": o.n_failed,
            "pooled_size": o.pooled_size,
            "front_size": int(o.front_values.shape[0]),
            "hypervolume": o.hypervolume,
            "front": [
                {
                    "values": [float(v) for v in o.front_values[i]],
                    "combo_id": o.front_combo_ids[i],
                    "schedule": list(o.front_schedules[i].days),
                    "capacity_hat": o.front_schedules[i].capacity_hat,
                }
                for i in range(o.front_values.shape[0])
            ],
        }
    out = {
        "schema_version": 1,
        "package_version": _version,
        "scenario": report.scenario,
        "instance": {
            "hash": report.instance_hash,
            "site": instance.site,
            "n_populations": instance.n,
            "horizon_days": instance.horizon_days,
            "capacity": instance.capacity,
            "horizon_start": horizon_start.isoformat() if horizon_start else None,
            "population_ids": [p.id for p in instance.populations],
        },
        "base_seed": report.base_seed,
        "reference": list(report.reference),
        "models": models,
        "selected_model": report.selected_model,
        "selected": {
            "index": report.selected_index,
            "values": list(report.selected_values),
            "schedule": list(report.selected_schedule.days),
            "capacity_hat": report.selected_schedule.capacity_hat,
            "weekly_totals": list(report.weekly_totals),
            "first_week": report.first_week,
            "harvest_weeks": list(report.harvest_weeks),
        },
        "topsis": {
            "weights": list(report.topsis_weights),
            "scores": list(report.topsis_scores),
        },
        "baseline": None,
        "run_manifest": list(report.run_manifest),
        "warnings": list(report.warnings),
    }
    if report.baseline is not None:
        out["baseline"] = {
            "schedule": list(report.baseline.days),
            "capacity_hat": report.baseline.capacity_hat,
            "values": list(report.baseline_values),
        }
    if timing_seconds is not None:
        out["timing"] = {"total_seconds": timing_seconds}
    return out
