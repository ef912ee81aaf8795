"""Schedule-to-weekly-harvest simulation.

A population planted on day p is harvested on the first day d with
cumulative predicted GDUs over [p, d] strictly exceeding its requirement
(strictly: landing exactly on the requirement is not enough). Harvest days
are binned into fixed 7-day calendar weeks anchored at horizon day 1, then
re-indexed so week 1 is the first week containing any harvest.
"""

from __future__ import annotations

import numpy as np

from .errors import NoHarvestError, UnharvestableError
from .forecast import GduForecast
from .model import Instance, Schedule, WeeklyHarvest


def harvest_day(plant_day: int, required_gdu: float, forecast: GduForecast) -> int:
    """First day whose accumulated GDUs since planting strictly exceed the need.

    Binary search over the cached prefix sums; the comparison is done on the
    prefix-sum difference so scalar and vectorized paths agree bit for bit.
    """
    d = forecast.horizon_days
    if not (1 <= plant_day <= d):
        raise IndexError(f"plant_day {plant_day} outside horizon [1, {d}]")
    if required_gdu < 0:
        raise ValueError(f"required_gdu must be nonnegative, got {required_gdu}")
    cum = forecast.cum
    base = cum[plant_day - 1]
    if not cum[d] - base > required_gdu:
        raise UnharvestableError(
            f"no day in [{plant_day}, {d}] accumulates more than {required_gdu} GDUs",
            plant_day=plant_day,
            required_gdu=required_gdu,
        )
    lo, hi = plant_day, d
    while lo < hi:
        mid = (lo + hi) // 2
        if cum[mid] - base > required_gdu:
            hi = mid
        else:
            lo = mid + 1
    return lo


def harvest_days(plant_days, required_gdus, forecast: GduForecast) -> np.ndarray:
    """Vectorized :func:`harvest_day` over aligned arrays."""
    cum = forecast.cum
    d = forecast.horizon_days
    plant = np.asarray(plant_days, dtype=np.int64)
    req = np.asarray(required_gdus, dtype=float)
    if plant.size and (plant.min() < 1 or plant.max() > d):
        raise IndexError("plant day outside horizon")
    base = cum[plant - 1]
    feasible = cum[d] - base > req
    if not np.all(feasible):
        i = int(np.flatnonzero(~feasible)[0])
        raise UnharvestableError(
            f"no day in [{plant[i]}, {d}] accumulates more than {req[i]} GDUs",
            plant_day=int(plant[i]),
            required_gdu=float(req[i]),
            index=i,
        )
    lo = plant.copy()
    hi = np.full_like(lo, d)
    while True:
        active = lo < hi
        if not active.any():
            break
        mid = (lo + hi) >> 1
        ok = cum[mid] - base > req
        hi = np.where(active & ok, mid, hi)
        lo = np.where(active & ~ok, mid + 1, lo)
    return lo


def week_of(day: int, week_origin: int) -> int:
    """Week index of a day, relative to an origin calendar week.

    Calendar weeks are consecutive 7-day bins with days 1..7 forming week 1;
    the result is calendar week minus origin plus 1.
    """
    if day < 1:
        raise ValueError(f"day must be >= 1, got {day}")
    return (day - 1) // 7 + 1 - week_origin + 1


def weekly_totals(plant_days, instance: Instance, forecast: GduForecast) -> tuple[np.ndarray, int]:
    """Shared core of :func:`weekly_harvest`: totals array plus origin week."""
    days = harvest_days(plant_days, instance.required_gdus, forecast)
    weeks = (days - 1) // 7 + 1
    origin = int(weeks.min())
    rel = weeks - origin
    totals = np.zeros(int(rel.max()) + 1, dtype=np.int64)
    np.add.at(totals, rel, instance.harvest_qtys)
    return totals, origin


def weekly_harvest(schedule: Schedule, instance: Instance, forecast: GduForecast) -> WeeklyHarvest:
    """Weekly harvest totals for a schedule, trimmed to the harvest span."""
    if len(schedule.days) != instance.n:
        raise ValueError(
            f"schedule has {len(schedule.days)} days but the instance has {instance.n} populations"
        )
    if instance.n == 0:
        raise NoHarvestError("instance has no populations")
    try:
        totals, origin = weekly_totals(schedule.as_array(), instance, forecast)
    except UnharvestableError as err:
        if err.index is not None:
            pop = instance.populations[err.index]
            raise UnharvestableError(
                f"population {pop.id}: {err}", population_id=pop.id,
                plant_day=err.plant_day, required_gdu=err.required_gdu, index=err.index,
            ) from None
        raise
    return WeeklyHarvest(totals=tuple(int(t) for t in totals), first_week=origin)
