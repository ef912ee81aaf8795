"""Independent reference implementations used to cross-check the library.

Everything here is written as plainly as possible (day-by-day loops, full
pairwise dominance matrices, Monte-Carlo volume estimation) and shares no
code path with the package.
"""

import statistics

import numpy as np


def naive_harvest_day(daily, plant_day, required_gdu):
    """Day-by-day accumulation; None when the horizon runs out first."""
    total = 0.0
    for day in range(plant_day, len(daily) + 1):
        total += daily[day - 1]
        if total > required_gdu:
            return day
    return None


def naive_model1(totals, capacity):
    harvested = [t for t in totals if t > 0]
    deviations = [abs(capacity - t) for t in harvested]
    waste = sum(max(t - capacity, 0) for t in totals)
    return (float(statistics.median(deviations)), float(max(deviations)),
            float(len(harvested)), float(waste))


def naive_model2(totals, capacity, power):
    harvested = [t for t in totals if t > 0]
    median_dev = statistics.median([abs(capacity - t) for t in harvested])
    over = [t - capacity for t in harvested if t > capacity]
    under = [capacity - t for t in harvested if t < capacity]
    over_penalty = sum(a ** power for a in over) / len(over) if over else 0.0
    under_penalty = sum(under) / len(under) if under else 0.0
    return (float(median_dev), float(over_penalty), float(under_penalty),
            float(len(harvested)))


def naive_model3(totals, capacity, power):
    harvested = [t for t in totals if t > 0]
    powered = [abs(capacity - t) ** power for t in harvested]
    signed = [capacity - t for t in harvested]
    mean = sum(signed) / len(signed)
    sd = (sum((x - mean) ** 2 for x in signed) / len(signed)) ** 0.5
    return (float(statistics.median(powered)), float(max(powered)), float(sd),
            float(len(harvested)))


def dominance_matrix(points):
    """dom[i, j] is True when point i dominates point j (minimization)."""
    pts = np.asarray(points, dtype=float)
    le = (pts[:, None, :] <= pts[None, :, :]).all(axis=2)
    lt = (pts[:, None, :] < pts[None, :, :]).any(axis=2)
    return le & lt


def brute_force_front(points):
    dom = dominance_matrix(points)
    return [j for j in range(dom.shape[1]) if not dom[:, j].any()]


def brute_force_fronts(points):
    """Peel fronts by repeatedly removing the nondominated remainder."""
    dom = dominance_matrix(points)
    remaining = np.ones(dom.shape[0], dtype=bool)
    fronts = []
    while remaining.any():
        idx = np.flatnonzero(remaining)
        sub = dom[np.ix_(idx, idx)]
        nondominated = idx[~sub.any(axis=0)]
        fronts.append([int(i) for i in nondominated])
        remaining[nondominated] = False
    return fronts


def monte_carlo_hypervolume(points, reference, n_samples=10_000_000, seed=0,
                            chunk=1_000_000):
    """Estimate the dominated volume by uniform sampling over the bounding box.

    A sample counts once if it lands inside any [point, reference] box; points
    are visited biggest box first and classified samples are dropped so later
    comparisons touch ever fewer samples.
    """
    pts = np.asarray(points, dtype=float)
    ref = np.asarray(reference, dtype=float)
    lower = pts.min(axis=0)
    box_volume = float(np.prod(ref - lower))
    order = np.argsort([-float(np.prod(ref - p)) for p in pts], kind="stable")
    # float32 sampling: the ~1e-7 relative boundary fuzz is orders of
    # magnitude below the statistical resolution of the estimate.
    pts32 = pts[order].astype(np.float32)
    lower32 = lower.astype(np.float32)
    span32 = (ref - lower).astype(np.float32)
    rng = np.random.default_rng(seed)
    hits = 0
    remaining = n_samples
    while remaining > 0:
        take = min(chunk, remaining)
        unclassified = rng.random((take, pts.shape[1]), dtype=np.float32)
        unclassified *= span32
        unclassified += lower32
        for p in pts32:
            inside = (unclassified >= p).all(axis=1)
            hits += int(inside.sum())
            unclassified = unclassified[~inside]
            if unclassified.shape[0] == 0:
                break
        remaining -= take
    return box_volume * hits / n_samples
