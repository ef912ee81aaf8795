"""Integer-coded NSGA-II over planting-day genes with per-gene window bounds.

Genes are day indices constrained to each population's planting window, so
uniform gene exchange between two feasible parents and random-reset mutation
inside the window keep every candidate feasible by construction. Selection is
binary tournament on (rank, crowding distance), survivor truncation is the
usual front-then-crowding order, and the whole run is a pure function of the
instance, model and seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, TextIO

import numpy as np

from .forecast import GduForecast
from .fronts import as_objective_matrix
from .harvest import weekly_totals
from .model import Instance, Schedule
from .objectives import ObjectiveVector, model_values


@dataclass(frozen=True)
class GaParams:
    """Tuning parameters for one NSGA-II run."""

    population_size: int
    generations: int
    crossover_rate: float
    mutation_rate: float
    penalty_power: int = 1
    rng_seed: int = 0

    def __post_init__(self):
        if self.population_size < 2 or self.population_size % 2:
            raise ValueError(f"population_size must be even and >= 2, got {self.population_size}")
        if self.generations < 1:
            raise ValueError(f"generations must be >= 1, got {self.generations}")
        for name in ("crossover_rate", "mutation_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {rate}")
        if self.penalty_power not in (1, 2, 3):
            raise ValueError(f"penalty_power must be 1, 2 or 3, got {self.penalty_power}")


@dataclass(frozen=True)
class EvaluatedMember:
    schedule: Schedule
    objectives: ObjectiveVector
    rank: int
    crowding: float


@dataclass(frozen=True)
class EvaluatedPopulation:
    """Final population of a run, sorted by (rank, crowding desc)."""

    members: tuple[EvaluatedMember, ...]
    model_id: int
    params: GaParams
    best_history: Optional[np.ndarray] = None

    def first_front(self) -> list[EvaluatedMember]:
        return [m for m in self.members if m.rank == 0]


def fast_nondominated_sort(points) -> list[list[int]]:
    """Partition points into fronts; front k is dominated only by fronts < k."""
    pts = as_objective_matrix(points)
    n = pts.shape[0]
    dominated_by: list[np.ndarray] = []
    count = np.zeros(n, dtype=np.int64)
    for i in range(n):
        le = (pts[i] <= pts).all(axis=1)
        lt = (pts[i] < pts).any(axis=1)
        dom = np.flatnonzero(le & lt)
        dominated_by.append(dom)
        count[dom] += 1
    fronts: list[list[int]] = []
    current = np.flatnonzero(count == 0)
    while current.size:
        fronts.append([int(i) for i in current])
        count[current] = -1
        for i in current:
            count[dominated_by[i]] -= 1
        current = np.flatnonzero(count == 0)
    return fronts


def crowding_distance(points) -> np.ndarray:
    """Range-normalized nearest-neighbor gap sum per front member.

    Boundary members of every objective get +inf; fronts of one or two
    points are all +inf.
    """
    pts = as_objective_matrix(points)
    n, m = pts.shape
    if n <= 2:
        return np.full(n, np.inf)
    dist = np.zeros(n)
    for o in range(m):
        order = np.argsort(pts[:, o], kind="stable")
        col = pts[order, o]
        span = col[-1] - col[0]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (col[2:] - col[:-2]) / span
    return dist


def _swap_genes(a: np.ndarray, b: np.ndarray, rng) -> tuple[np.ndarray, np.ndarray]:
    mask = rng.random(a.size) < 0.5
    return np.where(mask, b, a), np.where(mask, a, b)


def _blend_capacity(cap_a: float, cap_b: float, rng) -> tuple[float, float]:
    mid = 0.5 * (cap_a + cap_b)
    half = 0.5 * abs(cap_a - cap_b)
    return mid + rng.uniform(-half, half), mid + rng.uniform(-half, half)


def crossover(parent_a: Schedule, parent_b: Schedule, rate: float, rng) -> tuple[Schedule, Schedule]:
    """Uniform per-gene exchange with probability ``rate``, else plain copies.

    Swapped genes come from schedules of the same instance, so window
    feasibility is preserved by construction. Capacity genes blend to the
    midpoint plus a uniform jitter inside the parents' span.
    """
    if len(parent_a.days) != len(parent_b.days) or (
        (parent_a.capacity_hat is None) != (parent_b.capacity_hat is None)
    ):
        raise ValueError("parents come from different instances")
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"crossover rate must lie in [0, 1], got {rate}")
    a = parent_a.as_array()
    b = parent_b.as_array()
    cap_a, cap_b = parent_a.capacity_hat, parent_b.capacity_hat
    if rng.random() < rate:
        child_a, child_b = _swap_genes(a, b, rng)
        if cap_a is not None:
            cap_a, cap_b = _blend_capacity(cap_a, cap_b, rng)
    else:
        child_a, child_b = a.copy(), b.copy()
    return (
        Schedule(tuple(int(x) for x in child_a), cap_a),
        Schedule(tuple(int(x) for x in child_b), cap_b),
    )


def _reset_genes(row: np.ndarray, low: np.ndarray, high: np.ndarray, rate: float, rng) -> np.ndarray:
    mask = rng.random(row.size) < rate
    draws = rng.integers(low, high, endpoint=True)
    return np.where(mask, draws, row)


def _mutate_capacity(cap: float, rate: float, rng, bounds) -> float:
    if rng.random() < rate:
        cap = cap * rng.uniform(0.9, 1.1)
        if bounds is not None:
            cap = min(max(cap, bounds[0]), bounds[1])
    return cap


def mutate(schedule: Schedule, instance: Instance, rate: float, rng, capacity_bounds=None) -> Schedule:
    """Reset each gene, independently with probability ``rate``, to a uniform
    random day in its window; a capacity gene rescales by a uniform factor in
    [0.9, 1.1] clamped to its bounds."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"mutation rate must lie in [0, 1], got {rate}")
    if len(schedule.days) != instance.n:
        raise ValueError("schedule length does not match the instance")
    row = _reset_genes(schedule.as_array(), instance.early_days, instance.late_days, rate, rng)
    cap = schedule.capacity_hat
    if cap is not None:
        cap = _mutate_capacity(cap, rate, rng, capacity_bounds)
    return Schedule(tuple(int(x) for x in row), cap)


def _rank_and_crowd(objs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    fronts = fast_nondominated_sort(objs)
    ranks = np.empty(objs.shape[0], dtype=np.int64)
    crowd = np.empty(objs.shape[0])
    for k, front in enumerate(fronts):
        idx = np.asarray(front, dtype=np.int64)
        ranks[idx] = k
        crowd[idx] = crowding_distance(objs[idx])
    return ranks, crowd


def _tournament_winners(ranks: np.ndarray, crowd: np.ndarray, count: int, rng) -> np.ndarray:
    pairs = rng.integers(0, ranks.size, size=(count, 2))
    a, b = pairs[:, 0], pairs[:, 1]
    a_wins = (
        (ranks[a] < ranks[b])
        | ((ranks[a] == ranks[b]) & (crowd[a] > crowd[b]))
        | ((ranks[a] == ranks[b]) & (crowd[a] == crowd[b]) & (a <= b))
    )
    return np.where(a_wins, a, b)


class _Evaluator:
    """Maps gene rows to criterion rows. Pure; safe to call from anywhere."""

    def __init__(self, instance: Instance, forecast: GduForecast, model_id: int,
                 power: int, scenario2: bool):
        if model_id not in (1, 2, 3):
            raise ValueError(f"model_id must be 1, 2 or 3, got {model_id}")
        self.instance = instance
        self.forecast = forecast
        self.model_id = model_id
        self.power = power
        self.scenario2 = scenario2
        self.arity = 5 if scenario2 else 4
        if not scenario2 and (instance.capacity is None or instance.capacity <= 0):
            raise ValueError("instance has no capacity; pass capacity_bounds for scenario 2")

    def rows(self, pop: np.ndarray, caps: Optional[np.ndarray]) -> np.ndarray:
        out = np.empty((pop.shape[0], self.arity))
        for i in range(pop.shape[0]):
            totals, _ = weekly_totals(pop[i], self.instance, self.forecast)
            capacity = float(caps[i]) if self.scenario2 else float(self.instance.capacity)
            out[i, :4] = model_values(totals, capacity, self.model_id, self.power)
            if self.scenario2:
                out[i, 4] = capacity
        return out

    def to_vector(self, row: np.ndarray) -> ObjectiveVector:
        model_id = "S2" if self.scenario2 else str(self.model_id)
        return ObjectiveVector(tuple(float(v) for v in row), model_id=model_id,
                               penalty_power=self.power)


def run_nsga2(instance: Instance, forecast: GduForecast, model_id: int, params: GaParams, *,
              capacity_bounds: Optional[tuple[float, float]] = None,
              seed_with_original: bool = False,
              track_best: bool = False,
              log: Optional[TextIO] = None) -> EvaluatedPopulation:
    """Run NSGA-II and return the final evaluated population.

    Passing ``capacity_bounds`` switches to the capacity-as-decision-variable
    variant: every candidate carries a capacity gene inside the bounds and the
    criterion vector gains the capacity as a fifth minimized entry. The result
    is fully deterministic given ``params.rng_seed``; candidate evaluation is
    pure and consumes no randomness. With ``track_best`` the returned
    population carries the per-generation minima of each objective over the
    current first front.
    """
    scenario2 = capacity_bounds is not None
    if scenario2:
        lo, hi = float(capacity_bounds[0]), float(capacity_bounds[1])
        if not 0 < lo <= hi:
            raise ValueError(f"capacity bounds must satisfy 0 < lo <= hi, got ({lo}, {hi})")
    evaluator = _Evaluator(instance, forecast, model_id, params.penalty_power, scenario2)
    low, high = instance.early_days, instance.late_days
    size = params.population_size
    rng = np.random.default_rng(params.rng_seed)

    pop = rng.integers(low, high, size=(size, instance.n), endpoint=True)
    caps = rng.uniform(lo, hi, size=size) if scenario2 else None
    if seed_with_original:
        original = [p.original_day for p in instance.populations]
        if any(day is None for day in original):
            raise ValueError("seed_with_original requires original_day on every population")
        pop[0] = np.clip(np.array(original, dtype=np.int64), low, high)
    try:
        objs = evaluator.rows(pop, caps)
    except Exception as err:
        raise RuntimeError(f"evaluation failed on the initial population: {err}") from err
    ranks, crowd = _rank_and_crowd(objs)

    history = []
    if track_best:
        history.append(objs[ranks == 0].min(axis=0))

    for gen in range(1, params.generations + 1):
        winners = _tournament_winners(ranks, crowd, size, rng)
        children = np.empty_like(pop)
        child_caps = np.empty(size) if scenario2 else None
        for k in range(0, size, 2):
            pa, pb = pop[winners[k]], pop[winners[k + 1]]
            if rng.random() < params.crossover_rate:
                ca, cb = _swap_genes(pa, pb, rng)
                if scenario2:
                    cap_a, cap_b = _blend_capacity(caps[winners[k]], caps[winners[k + 1]], rng)
            else:
                ca, cb = pa.copy(), pb.copy()
                if scenario2:
                    cap_a, cap_b = caps[winners[k]], caps[winners[k + 1]]
            ca = _reset_genes(ca, low, high, params.mutation_rate, rng)
            cb = _reset_genes(cb, low, high, params.mutation_rate, rng)
            if scenario2:
                cap_a = _mutate_capacity(cap_a, params.mutation_rate, rng, (lo, hi))
                cap_b = _mutate_capacity(cap_b, params.mutation_rate, rng, (lo, hi))
                child_caps[k], child_caps[k + 1] = cap_a, cap_b
            children[k], children[k + 1] = ca, cb
        assert np.all((children >= low) & (children <= high)), "operator left a window"

        try:
            child_objs = evaluator.rows(children, child_caps)
        except Exception as err:
            raise RuntimeError(f"evaluation failed at generation {gen}: {err}") from err
        merged = np.vstack([pop, children])
        merged_caps = np.concatenate([caps, child_caps]) if scenario2 else None
        merged_objs = np.vstack([objs, child_objs])
        m_ranks, m_crowd = _rank_and_crowd(merged_objs)
        order = np.lexsort((np.arange(merged.shape[0]), -m_crowd, m_ranks))
        keep = order[:size]
        pop, objs = merged[keep], merged_objs[keep]
        caps = merged_caps[keep] if scenario2 else None
        ranks, crowd = m_ranks[keep], m_crowd[keep]

        if track_best:
            history.append(objs[ranks == 0].min(axis=0))
        if log is not None:
            best = objs[ranks == 0].min(axis=0)
            front_size = int((ranks == 0).sum())
            values = " ".join(f"{v:.6g}" for v in best)
            print(f"gen {gen} front0 {front_size} best {values}", file=log)

    # Recompute on the survivors so ranks and crowding describe the returned set.
    ranks, crowd = _rank_and_crowd(objs)
    order = np.lexsort((np.arange(size), -crowd, ranks))
    members = []
    for i in order:
        schedule = Schedule(tuple(int(x) for x in pop[i]),
                            float(caps[i]) if scenario2 else None)
        members.append(EvaluatedMember(
            schedule=schedule,
            objectives=evaluator.to_vector(objs[i]),
            rank=int(ranks[i]),
            crowding=float(crowd[i]),
        ))
    return EvaluatedPopulation(
        members=tuple(members),
        model_id=model_id,
        params=params,
        best_history=np.array(history) if track_best else None,
    )
