"""Deterministic synthetic instances: seasonal GDU history plus windowed
populations. Real field data of this kind is usually proprietary, so tests
and demos run on instances produced here."""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError
from .forecast import GduHistory, average_forecast, horizon_dates
from .model import Instance, SeedPopulation, validate_instance


@dataclass(frozen=True)
class SyntheticConfig:
    n_populations: int = 50
    horizon_days: int = 280
    horizon_start: dt.date = dt.date(2020, 1, 1)
    site: int = 0
    gdu_mean: float = 12.0
    gdu_amplitude: float = 5.0
    gdu_noise_sd: float = 1.5
    window_width: tuple[int, int] = (10, 30)
    required_gdu: tuple[float, float] = (649.0, 1414.0)
    harvest_qty: tuple[int, int] = (400, 1600)
    capacity: Optional[int] = 2000
    history_years: tuple[int, int] = (2009, 2019)
    rng_seed: int = 42


def _seasonal_level(day_of_year: int, config: SyntheticConfig) -> float:
    # Southern-hemisphere flavor: warmest around mid January.
    angle = 2.0 * math.pi * (day_of_year - 15) / 365.0
    return config.gdu_mean + config.gdu_amplitude * math.cos(angle)


def generate_instance(config: SyntheticConfig) -> tuple[Instance, GduHistory]:
    """Build a synthetic instance and its GDU history, deterministically.

    The history is a sinusoid-plus-noise daily series over the configured
    years (no leap days are emitted), so its per-day averages make a smooth
    forecast. Windows are placed so every population can still reach its
    required GDUs when planted on its latest allowed day.
    """
    if config.n_populations < 1:
        raise ConfigError("n_populations must be >= 1")
    if config.horizon_days < 7:
        raise ConfigError("horizon must cover at least one week")
    if config.capacity is not None and config.capacity <= 0:
        raise ConfigError("capacity must be positive when given")
    lo_w, hi_w = config.window_width
    if not 0 <= lo_w <= hi_w:
        raise ConfigError(f"bad window_width range ({lo_w}, {hi_w})")

    rng = np.random.default_rng(config.rng_seed)
    first_year, last_year = config.history_years
    records: dict[tuple[int, int, int], float] = {}
    for year in range(first_year, last_year + 1):
        day = dt.date(year, 1, 1)
        day_of_year = 0
        while day.year == year:
            if not (day.month == 2 and day.day == 29):
                day_of_year += 1
                level = _seasonal_level(day_of_year, config)
                value = max(0.5, level + rng.normal(0.0, config.gdu_noise_sd))
                records[(year, day.month, day.day)] = float(value)
            day += dt.timedelta(days=1)
    history = GduHistory(site=config.site, records=records)
    forecast = average_forecast(history, config.horizon_start, config.horizon_days)

    cum = forecast.cum
    d = config.horizon_days
    populations = []
    for i in range(config.n_populations):
        required = float(rng.uniform(*config.required_gdu))
        qty = int(rng.integers(config.harvest_qty[0], config.harvest_qty[1], endpoint=True))
        width = int(rng.integers(lo_w, hi_w, endpoint=True))
        # Latest day from which `required` is still reachable: the largest day
        # whose remaining forecast total strictly exceeds the requirement.
        cutoff = cum[d] - required
        latest = min(int(np.searchsorted(cum, cutoff, side="left")), d)
        if latest < 1:
            raise ConfigError(
                f"required_gdu {required:.1f} is unreachable within the "
                f"{d}-day horizon (forecast total {cum[d]:.1f})"
            )
        if latest < width + 1:
            raise ConfigError(
                f"window width {width} does not fit before the latest feasible "
                f"planting day {latest}"
            )
        late = int(rng.integers(width + 1, latest, endpoint=True))
        early = late - width
        original = int(rng.integers(early, late, endpoint=True))
        populations.append(SeedPopulation(
            id=f"sp{i:04d}",
            site=config.site,
            early_day=early,
            late_day=late,
            required_gdu=required,
            harvest_qty=qty,
            original_day=original,
        ))
    instance = Instance(
        populations=tuple(populations),
        horizon_days=config.horizon_days,
        capacity=config.capacity,
        site=config.site,
    )
    violations = validate_instance(instance, forecast)
    if violations:
        raise ConfigError("generated instance fails validation: " + "; ".join(violations))
    return instance, history
