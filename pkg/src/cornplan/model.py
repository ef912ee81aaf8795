"""Problem-instance data types: populations, instances, schedules, weekly totals.

Day indices are 1-based positions on a single linear horizon; calendar dates
are converted to indices at the ingestion boundary and never reappear in the
core. Sites are optimized as independent instances.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .forecast import GduForecast


@dataclass(frozen=True)
class SeedPopulation:
    """One plantable unit: a seed batch with a window, a GDU need and a yield.

    ``early_day`` and ``late_day`` bound the allowed planting day (inclusive);
    ``original_day`` is the baseline planting day when one is known.
    """

    id: str
    site: int
    early_day: int
    late_day: int
    required_gdu: float
    harvest_qty: int
    original_day: Optional[int] = None


@dataclass(frozen=True)
class Instance:
    """A single-site problem instance. Immutable once constructed."""

    populations: tuple[SeedPopulation, ...]
    horizon_days: int
    capacity: Optional[int]
    site: int = 0

    def __post_init__(self):
        object.__setattr__(self, "populations", tuple(self.populations))
        # Cached per-population arrays for the evaluation hot path.
        object.__setattr__(
            self, "early_days", np.array([p.early_day for p in self.populations], dtype=np.int64)
        )
        object.__setattr__(
            self, "late_days", np.array([p.late_day for p in self.populations], dtype=np.int64)
        )
        object.__setattr__(
            self, "required_gdus", np.array([p.required_gdu for p in self.populations], dtype=float)
        )
        object.__setattr__(
            self, "harvest_qtys", np.array([p.harvest_qty for p in self.populations], dtype=np.int64)
        )
        for name in ("early_days", "late_days", "required_gdus", "harvest_qtys"):
            getattr(self, name).flags.writeable = False

    @property
    def n(self) -> int:
        return len(self.populations)

    def total_harvest(self) -> int:
        return int(sum(p.harvest_qty for p in self.populations))

    def fingerprint(self) -> str:
        """Stable content hash used in run manifests."""
        payload = {
            "site": self.site,
            "horizon_days": self.horizon_days,
            "capacity": self.capacity,
            "populations": [
                [p.id, p.site, p.early_day, p.late_day, p.required_gdu, p.harvest_qty, p.original_day]
                for p in self.populations
            ],
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True)
class Schedule:
    """A candidate solution: one planting day per population, in instance order.

    ``capacity_hat`` carries the co-optimized weekly capacity when the storage
    limit is a decision variable rather than a given.
    """

    days: tuple[int, ...]
    capacity_hat: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "days", tuple(int(d) for d in self.days))

    def as_array(self) -> np.ndarray:
        return np.array(self.days, dtype=np.int64)


@dataclass(frozen=True)
class WeeklyHarvest:
    """Weekly harvest totals, indexed from the first week with any harvest.

    The vector is trimmed so the first and last entries are positive; interior
    zero weeks are kept. ``first_week`` is the calendar week (7-day bins
    anchored at horizon day 1) the relative index 1 corresponds to.
    """

    totals: tuple[int, ...]
    first_week: int

    def __post_init__(self):
        totals = tuple(int(t) for t in self.totals)
        object.__setattr__(self, "totals", totals)
        if not totals:
            raise ValueError("weekly harvest needs at least one week")
        if min(totals) < 0:
            raise ValueError("weekly totals must be nonnegative")
        if totals[0] <= 0 or totals[-1] <= 0:
            raise ValueError("weekly totals must start and end with a harvest week")

    @property
    def weeks(self) -> int:
        return len(self.totals)


def schedule_in_windows(schedule: Schedule, instance: Instance) -> bool:
    days = schedule.as_array()
    return bool(
        days.size == instance.n
        and np.all(days >= instance.early_days)
        and np.all(days <= instance.late_days)
    )


def validate_instance(instance: Instance, forecast: GduForecast) -> list[str]:
    """Check every instance invariant against the forecast.

    Returns a deterministic, order-stable list of human-readable violations;
    an empty list means the instance is usable. Violations are data, not
    failures, so nothing is raised here.
    """
    violations: list[str] = []
    d = instance.horizon_days
    if d < 1:
        violations.append(f"horizon_days must be positive, got {d}")
    if instance.capacity is not None and instance.capacity <= 0:
        violations.append(f"capacity must be positive, got {instance.capacity}")
    if forecast.horizon_days < d:
        violations.append(
            f"forecast covers {forecast.horizon_days} days but the horizon needs {d}"
        )
    if not instance.populations:
        violations.append("instance has no populations")
    seen: set[str] = set()
    for p in instance.populations:
        if p.id in seen:
            violations.append(f"population {p.id}: duplicate id")
        seen.add(p.id)
        if p.site != instance.site:
            violations.append(f"population {p.id}: site {p.site} differs from instance site {instance.site}")
        if p.early_day > p.late_day:
            violations.append(
                f"population {p.id}: window inverted ({p.early_day} > {p.late_day})"
            )
        if p.required_gdu <= 0:
            violations.append(f"population {p.id}: required_gdu must be positive, got {p.required_gdu}")
        if p.harvest_qty < 0:
            violations.append(f"population {p.id}: harvest_qty must be nonnegative, got {p.harvest_qty}")
        days_in_range = True
        for label, day in (("early_day", p.early_day), ("late_day", p.late_day), ("original_day", p.original_day)):
            if day is None:
                continue
            if not (1 <= day <= d):
                violations.append(f"population {p.id}: {label} {day} outside horizon [1, {d}]")
                days_in_range = False
        # Harvestability from the latest allowed planting day. Cumulative GDUs
        # from day p to the end shrink as p grows, so late_day is the binding case.
        if (
            days_in_range
            and p.early_day <= p.late_day
            and p.required_gdu > 0
            and forecast.horizon_days >= d
        ):
            available = float(forecast.cum[d] - forecast.cum[p.late_day - 1])
            if not available > p.required_gdu:
                violations.append(
                    f"population {p.id}: unharvestable from late_day {p.late_day} "
                    f"(needs more than {p.required_gdu} GDUs, forecast supplies {available:.3f})"
                )
    return violations
