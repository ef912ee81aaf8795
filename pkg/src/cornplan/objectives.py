"""Criterion evaluation of weekly harvests against a storage capacity.

Three model variants share the same inputs. The base model tracks the median
and maximum absolute deviation of weekly totals from capacity, the number of
nonzero harvest weeks, and the total overcapacity waste. The first penalty
model splits deviations into overcapacity amounts (averaged after raising to
a power) and undercapacity amounts (plain average). The second penalty model
raises the median/max deviations to a power and adds the standard deviation
of the signed deviations, pushing solutions toward uniform weekly output.

Weekly statistics range over nonzero-harvest weeks only; waste sums over all
weeks (zero weeks contribute nothing either way).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoHarvestError
from .model import Schedule, WeeklyHarvest

MODEL_IDS = ("1", "2", "3", "S2")


@dataclass(frozen=True)
class ObjectiveVector:
    """Criterion values for one schedule under one model, all minimized."""

    values: tuple[float, ...]
    model_id: str
    penalty_power: int = 1

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if self.model_id not in MODEL_IDS:
            raise ValueError(f"unknown model_id {self.model_id!r}")
        arity = 5 if self.model_id == "S2" else 4
        if len(values) != arity:
            raise ValueError(f"model {self.model_id} expects {arity} values, got {len(values)}")
        if any(not math.isfinite(v) or v < 0 for v in values):
            raise ValueError(f"criterion values must be finite and nonnegative: {values}")
        if self.penalty_power not in (1, 2, 3):
            raise ValueError(f"penalty power must be 1, 2 or 3, got {self.penalty_power}")

    @property
    def arity(self) -> int:
        return len(self.values)


def _as_totals(h) -> np.ndarray:
    totals = np.asarray(h.totals if isinstance(h, WeeklyHarvest) else h, dtype=float)
    if totals.ndim != 1 or totals.size == 0:
        raise ValueError("weekly totals must be a non-empty one-dimensional sequence")
    if np.any(totals < 0) or not np.all(np.isfinite(totals)):
        raise ValueError("weekly totals must be finite and nonnegative")
    return totals


def _nonzero_weeks(totals: np.ndarray) -> np.ndarray:
    nz = totals[totals > 0]
    if nz.size == 0:
        raise NoHarvestError("no week has a positive harvest")
    return nz


def model1_values(totals: np.ndarray, capacity: float) -> tuple[float, float, float, float]:
    nz = _nonzero_weeks(totals)
    dev = np.abs(capacity - nz)
    surplus = totals - capacity
    waste = float(surplus[surplus > 0].sum())
    return float(np.median(dev)), float(dev.max()), float(nz.size), waste


def model2_values(totals: np.ndarray, capacity: float, power: int) -> tuple[float, float, float, float]:
    nz = _nonzero_weeks(totals)
    median_dev = float(np.median(np.abs(capacity - nz)))
    over = nz[nz > capacity] - capacity
    under = capacity - nz[nz < capacity]
    # Empty-set convention: no overcapacity (or undercapacity) weeks is the
    # best outcome, so the corresponding average penalty is zero.
    over_penalty = float((over ** power).sum() / over.size) if over.size else 0.0
    under_penalty = float(under.sum() / under.size) if under.size else 0.0
    return median_dev, over_penalty, under_penalty, float(nz.size)


def model3_values(totals: np.ndarray, capacity: float, power: int) -> tuple[float, float, float, float]:
    nz = _nonzero_weeks(totals)
    powered = np.abs(capacity - nz) ** power
    # Population standard deviation of the signed deviations.
    spread = float(np.std(capacity - nz))
    return float(np.median(powered)), float(powered.max()), spread, float(nz.size)


def model_values(totals: np.ndarray, capacity: float, model_id: int, power: int = 1):
    if model_id == 1:
        return model1_values(totals, capacity)
    if model_id == 2:
        return model2_values(totals, capacity, power)
    if model_id == 3:
        return model3_values(totals, capacity, power)
    raise ValueError(f"model_id must be 1, 2 or 3, got {model_id}")


def _check_capacity(capacity) -> float:
    capacity = float(capacity)
    if not capacity > 0:
        raise ValueError(f"capacity must be positive, got {capacity}")
    return capacity


def _check_power(power: int) -> int:
    if power not in (1, 2, 3):
        raise ValueError(f"penalty power must be 1, 2 or 3, got {power}")
    return power


def eval_model1(h, capacity) -> ObjectiveVector:
    """Base criteria: median and max |capacity - weekly total| over harvest
    weeks, the number of harvest weeks, and total overcapacity waste."""
    return ObjectiveVector(model1_values(_as_totals(h), _check_capacity(capacity)), model_id="1")


def eval_model2(h, capacity, power: int) -> ObjectiveVector:
    """First penalty variant: median deviation, powered-average overcapacity,
    average undercapacity, and the harvest-week count."""
    values = model2_values(_as_totals(h), _check_capacity(capacity), _check_power(power))
    return ObjectiveVector(values, model_id="2", penalty_power=power)


def eval_model3(h, capacity, power: int) -> ObjectiveVector:
    """Second penalty variant: powered median/max deviations, the standard
    deviation of signed deviations, and the harvest-week count."""
    values = model3_values(_as_totals(h), _check_capacity(capacity), _check_power(power))
    return ObjectiveVector(values, model_id="3", penalty_power=power)


def eval_scenario2(h, schedule: Schedule, model_id: int, power: int = 1) -> ObjectiveVector:
    """Capacity-as-decision-variable variant.

    Evaluates the chosen base model against the schedule's own capacity and
    appends that capacity as a fifth minimized criterion.
    """
    if schedule.capacity_hat is None:
        raise ValueError("schedule carries no capacity_hat; scenario 2 requires one")
    capacity = _check_capacity(schedule.capacity_hat)
    base = model_values(_as_totals(h), capacity, model_id, _check_power(power))
    return ObjectiveVector(base + (capacity,), model_id="S2", penalty_power=power)
