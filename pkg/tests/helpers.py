"""Small builders shared across test modules."""

import numpy as np

import cornplan as cp


def constant_forecast(days: int, value: float = 10.0) -> cp.GduForecast:
    return cp.GduForecast.from_daily(np.full(days, float(value)))


def dyadic_forecast(days: int, seed: int = 0) -> cp.GduForecast:
    """Random forecast whose values are exact multiples of 1/4, so prefix
    sums and running sums agree bit for bit."""
    rng = np.random.default_rng(seed)
    return cp.GduForecast.from_daily(rng.integers(4, 161, size=days) / 4.0)


def tiny_instance(windows, required, qtys, horizon_days, capacity=1000, site=0, originals=None):
    populations = tuple(
        cp.SeedPopulation(
            id=f"p{i}",
            site=site,
            early_day=lo,
            late_day=hi,
            required_gdu=float(g),
            harvest_qty=int(q),
            original_day=None if originals is None else originals[i],
        )
        for i, ((lo, hi), g, q) in enumerate(zip(windows, required, qtys))
    )
    return cp.Instance(populations=populations, horizon_days=horizon_days,
                       capacity=capacity, site=site)


class ScriptedRng:
    """Plays back queued values for the generator methods the operators use."""

    def __init__(self, script):
        self.script = list(script)

    def _next(self, kind):
        assert self.script, f"script exhausted, wanted {kind}"
        name, value = self.script.pop(0)
        assert name == kind, f"script expected {name}, operator asked for {kind}"
        return value

    def random(self, size=None):
        value = self._next("random")
        return np.asarray(value, dtype=float) if size is not None else float(value)

    def uniform(self, low, high, size=None):
        value = self._next("uniform")
        return np.asarray(value, dtype=float) if size is not None else float(value)

    def integers(self, low, high, size=None, endpoint=False):
        return np.asarray(self._next("integers"), dtype=np.int64)
