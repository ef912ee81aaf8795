"""Daily GDU prediction from historical records by per-calendar-day averaging.

The predictor is deliberately simple: the forecast for any horizon day is the
mean of the historical values recorded on the same month/day across all years
in the history, so the same average is reused when the horizon wraps into a
second year. Leap days never enter the horizon; Feb 29 records are tolerated
in the input and ignored.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .errors import GduDataError

# Lower clamp for forecast values. A zero-GDU day would make the cumulative
# curve flat and stall the harvest-day search, so the floor keeps prefix sums
# strictly increasing.
GDU_FLOOR = 1e-9


def horizon_dates(start: dt.date, n_days: int) -> list[dt.date]:
    """Enumerate ``n_days`` calendar dates from ``start``, skipping Feb 29."""
    if n_days < 1:
        raise ValueError("horizon must contain at least one day")
    out: list[dt.date] = []
    day = start
    while len(out) < n_days:
        if not (day.month == 2 and day.day == 29):
            out.append(day)
        day += dt.timedelta(days=1)
    return out


@dataclass(frozen=True)
class GduHistory:
    """Historical daily GDU records for one site, keyed by (year, month, day)."""

    site: int
    records: Mapping[tuple[int, int, int], float]

    @property
    def years(self) -> list[int]:
        return sorted({y for (y, _, _) in self.records})


@dataclass(frozen=True, eq=False)
class GduForecast:
    """Predicted daily GDUs over the horizon, with cached prefix sums.

    ``daily[d - 1]`` is the prediction for horizon day ``d`` (days are
    1-based); ``cum[d]`` is the sum of the first ``d`` predictions with
    ``cum[0] == 0``.
    """

    daily: np.ndarray
    cum: np.ndarray
    start: Optional[dt.date] = None
    site: int = 0

    @classmethod
    def from_daily(cls, daily, start: Optional[dt.date] = None, site: int = 0) -> "GduForecast":
        arr = np.array(daily, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("forecast needs a one-dimensional, non-empty daily series")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("daily GDU values must be finite and nonnegative")
        arr = np.maximum(arr, GDU_FLOOR)
        # Sequential (non-reassociated) prefix sums so results are
        # bit-reproducible regardless of vectorized reduction strategies.
        cum = np.empty(arr.size + 1, dtype=float)
        cum[0] = 0.0
        total = 0.0
        for i in range(arr.size):
            total += arr[i]
            cum[i + 1] = total
        arr.flags.writeable = False
        cum.flags.writeable = False
        return cls(daily=arr, cum=cum, start=start, site=site)

    @property
    def horizon_days(self) -> int:
        return int(self.daily.size)

    def __len__(self) -> int:
        return int(self.daily.size)


def average_forecast(history: GduHistory, horizon_start: dt.date, horizon_days: int) -> GduForecast:
    """Build a forecast by averaging each calendar day over all history years.

    Every (month, day) appearing in the horizon must be present for every
    year of the history; a gap raises :class:`GduDataError` naming the first
    missing record. Years are averaged in sorted order, which makes the
    result independent of the order the history was assembled in.
    """
    years = history.years
    if not years:
        raise GduDataError("history contains no records")
    cache: dict[tuple[int, int], float] = {}
    daily = np.empty(horizon_days, dtype=float)
    for i, day in enumerate(horizon_dates(horizon_start, horizon_days)):
        key = (day.month, day.day)
        if key not in cache:
            values = []
            for year in years:
                rec = history.records.get((year, day.month, day.day))
                if rec is None:
                    raise GduDataError(
                        f"history for site {history.site} is missing "
                        f"{year:04d}-{day.month:02d}-{day.day:02d}"
                    )
                values.append(rec)
            cache[key] = float(np.mean(values))
        daily[i] = cache[key]
    return GduForecast.from_daily(daily, start=horizon_start, site=history.site)


def cumulative_gdu(forecast: GduForecast, from_day: int, to_day: int) -> float:
    """Inclusive sum of predicted GDUs over [from_day, to_day], O(1)."""
    d = forecast.horizon_days
    if not (1 <= from_day <= to_day <= d):
        raise IndexError(f"day range ({from_day}, {to_day}) outside horizon [1, {d}]")
    return float(forecast.cum[to_day] - forecast.cum[from_day - 1])
