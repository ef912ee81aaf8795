"""Pareto-front utilities: dominance tests, front extraction, unit scaling,
exact hypervolume, and TOPSIS final-solution selection. All criteria are
minimized throughout."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class Relation(Enum):
    DOMINATES = "dominates"
    WEAKLY_DOMINATES = "weakly_dominates"
    DOMINATED = "dominated"
    INCOMPARABLE = "incomparable"


def as_objective_matrix(points) -> np.ndarray:
    """Coerce objective vectors (or anything row-like) to a float matrix."""
    if isinstance(points, np.ndarray) and points.ndim == 2:
        if points.shape[0] == 0:
            raise ValueError("no points")
        return np.asarray(points, dtype=float)
    rows = []
    for p in points:
        values = p.values if hasattr(p, "values") else p
        rows.append(tuple(float(v) for v in values))
    if not rows:
        raise ValueError("no points")
    arity = len(rows[0])
    if any(len(r) != arity for r in rows):
        raise ValueError("points have mixed objective arities")
    return np.array(rows, dtype=float)


def dominates(a, b) -> Relation:
    """Classify a against b under componentwise minimization.

    ``DOMINATES`` means a <= b everywhere and strictly better somewhere;
    equal vectors weakly dominate each other.
    """
    av = np.asarray(a.values if hasattr(a, "values") else a, dtype=float)
    bv = np.asarray(b.values if hasattr(b, "values") else b, dtype=float)
    if av.shape != bv.shape:
        raise ValueError(f"arity mismatch: {av.shape} vs {bv.shape}")
    if np.all(av <= bv):
        return Relation.DOMINATES if np.any(av < bv) else Relation.WEAKLY_DOMINATES
    if np.all(bv <= av):
        # b is everywhere as good and (since the first branch failed) somewhere
        # strictly better, so a is dominated.
        return Relation.DOMINATED
    return Relation.INCOMPARABLE


def pareto_front(points) -> list[int]:
    """Indices of points not dominated by any other point.

    Duplicate coordinates are all retained; they weakly dominate each other
    but dominate nothing.
    """
    pts = as_objective_matrix(points)
    keep: list[int] = []
    for i in range(pts.shape[0]):
        le = (pts <= pts[i]).all(axis=1)
        lt = (pts < pts[i]).any(axis=1)
        if not np.any(le & lt):
            keep.append(i)
    return keep


def scale_to_unit(points) -> tuple[np.ndarray, tuple[np.ndarray, np.ndarray]]:
    """Scale each objective to [0, 1] over the pooled point set.

    Returns the scaled matrix and the (min, max) bounds used. An objective
    that is constant across the pool carries no information and is mapped to
    0 for every point.
    """
    pts = as_objective_matrix(points)
    low = pts.min(axis=0)
    high = pts.max(axis=0)
    return apply_scaling(pts, (low, high)), (low, high)


def apply_scaling(points, bounds: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    pts = as_objective_matrix(points)
    low, high = (np.asarray(b, dtype=float) for b in bounds)
    span = high - low
    scaled = np.zeros_like(pts)
    ok = span > 0
    scaled[:, ok] = (pts[:, ok] - low[ok]) / span[ok]
    return scaled


@dataclass(frozen=True, eq=False)
class ScaledFront:
    """A Pareto front scaled to the unit box, tagged with its source model."""

    values: np.ndarray
    bounds_low: np.ndarray
    bounds_high: np.ndarray
    source_model: int
    schedules: tuple = field(default=())

    def __post_init__(self):
        values = as_objective_matrix(self.values)
        object.__setattr__(self, "values", values)
        if np.any(values < 0) or np.any(values > 1):
            raise ValueError("scaled front values must lie in [0, 1]")
        if len(pareto_front(values)) != values.shape[0]:
            raise ValueError("scaled front contains dominated points")
        if self.schedules and len(self.schedules) != values.shape[0]:
            raise ValueError("schedules misaligned with front values")

    def __len__(self) -> int:
        return int(self.values.shape[0])


def _pareto_unique_rows(pts: np.ndarray) -> np.ndarray:
    """Drop duplicate and dominated rows (for hypervolume internals only)."""
    uniq = np.unique(pts, axis=0)
    keep = pareto_front(uniq)
    return uniq[keep]


def _hv_recurse(pts: np.ndarray, ref: np.ndarray) -> float:
    n = pts.shape[0]
    if n == 0:
        return 0.0
    if n == 1:
        return float(np.prod(ref - pts[0]))
    if n == 2:
        va = np.prod(ref - pts[0])
        vb = np.prod(ref - pts[1])
        overlap = np.prod(ref - np.maximum(pts[0], pts[1]))
        return float(va + vb - overlap)
    total = 0.0
    for i in range(n):
        total += _exclusive_volume(pts[i], pts[i + 1:], ref)
    return total


def _exclusive_volume(point: np.ndarray, rest: np.ndarray, ref: np.ndarray) -> float:
    volume = float(np.prod(ref - point))
    if rest.shape[0] == 0:
        return volume
    limited = _pareto_unique_rows(np.maximum(rest, point))
    return volume - _hv_recurse(limited, ref)


def hypervolume(points, reference) -> float:
    """Exact measure of the region weakly dominated by a front.

    Computes the Lebesgue measure of the union of boxes [point, reference]
    with the WFG exclusive-volume recursion. Exact up to float rounding,
    never sampled, and deterministic (points are processed in lexicographic
    order regardless of input order).
    """
    pts = as_objective_matrix(points)
    ref = np.asarray(reference, dtype=float)
    if ref.shape != (pts.shape[1],):
        raise ValueError(f"reference arity {ref.shape} does not match points ({pts.shape[1]})")
    if np.any(pts > ref):
        raise ValueError("every front point must be componentwise <= the reference")
    pts = _pareto_unique_rows(pts)
    order = np.lexsort(pts.T[::-1])
    return _hv_recurse(pts[order], ref)


def topsis_select(front, weights) -> tuple[int, np.ndarray]:
    """Pick the front member closest to the ideal and farthest from the worst.

    Columns are vector-normalized, weighted, and compared against the
    per-objective best (minimum) and worst (maximum); the score is the
    relative closeness to the worst point, and the highest score wins with
    ties broken by the lowest index. An all-zero column normalizes to zeros,
    and a front whose members all coincide scores 0.5 everywhere.
    """
    pts = as_objective_matrix(front)
    w = np.asarray(weights, dtype=float)
    if w.shape != (pts.shape[1],):
        raise ValueError(f"need one weight per objective ({pts.shape[1]}), got {w.shape}")
    if np.any(w < 0) or not np.any(w > 0):
        raise ValueError("weights must be nonnegative and not all zero")
    norms = np.sqrt((pts ** 2).sum(axis=0))
    normalized = np.divide(pts, norms, out=np.zeros_like(pts), where=norms > 0)
    weighted = normalized * w
    ideal = weighted.min(axis=0)
    worst = weighted.max(axis=0)
    dist_ideal = np.sqrt(((weighted - ideal) ** 2).sum(axis=1))
    dist_worst = np.sqrt(((weighted - worst) ** 2).sum(axis=1))
    denominator = dist_ideal + dist_worst
    scores = np.full(pts.shape[0], 0.5)
    ok = denominator > 0
    scores[ok] = dist_worst[ok] / denominator[ok]
    return int(np.argmax(scores)), scores
