"""Pareto-front quality indicators and run aggregation.

All indicators treat objectives as minimized. Hypervolume is exact for two
objectives (sorted strip sweep); fronts here stay small, so no incremental
structures are needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

Vector = tuple[float, ...]


@dataclass(frozen=True, slots=True)
class MetricBundle:
    """Per-run front quality: HV (raw and normalized), spread, spacing, CV.

    `spacing` is None when the run's front has fewer than two valid points;
    aggregation reports how many runs were excluded for that reason.
    """

    hypervolume: float
    normalized_hv: float
    overall_spread: float
    spacing: float | None
    constraint_violations: float


def hypervolume_2d(front: Sequence[Sequence[float]], ref: Sequence[float]) -> float:
    """Exact area dominated by `front` and bounded by the reference point.

    Points with any coordinate beyond the reference point contribute
    nothing. Dominated or duplicate points are handled by the sweep.
    """
    if len(ref) != 2:
        raise ValueError("hypervolume_2d requires a 2-objective reference point")
    r1, r2 = ref
    pts = []
    for p in front:
        if len(p) != 2:
            raise ValueError("hypervolume_2d requires 2-objective vectors")
        if p[0] <= r1 and p[1] <= r2:
            pts.append((p[0], p[1]))
    pts.sort()
    area = 0.0
    best_f2 = r2
    for f1, f2 in pts:
        if f2 < best_f2:
            area += (r1 - f1) * (best_f2 - f2)
            best_f2 = f2
    return area


def normalized_hypervolume(front: Sequence[Sequence[float]], ref: Sequence[float],
                           hv_max: float) -> float:
    """Hypervolume relative to a maximal value, clamped to [0, 1]."""
    if hv_max <= 0:
        raise ValueError("hv_max must be > 0")
    ratio = hypervolume_2d(front, ref) / hv_max
    return min(1.0, max(0.0, ratio))


def overall_spread(front: Sequence[Sequence[float]], ideal: Sequence[float],
                   maximal: Sequence[float]) -> float:
    """Product over objectives of front extent relative to the ideal-maximal box.

    A degenerate box coordinate (ideal == maximal) zeroes the product; an
    empty or singleton front has no extent and scores 0.
    """
    if len(ideal) != len(maximal):
        raise ValueError("ideal and maximal vectors must have equal length")
    for lo, hi in zip(ideal, maximal):
        if lo > hi:
            raise ValueError("ideal must be coordinatewise <= maximal")
    if not front:
        return 0.0
    value = 1.0
    for i in range(len(ideal)):
        denom = abs(maximal[i] - ideal[i])
        if denom == 0:
            return 0.0
        values = [p[i] for p in front]
        value *= abs(max(values) - min(values)) / denom
    return value


def spacing(front: Sequence[Sequence[float]]) -> float | None:
    """Deviation of nearest-neighbour Manhattan distances within a front.

    Returns sqrt(sum((mean - d_j)^2) / (|front| - 1)) where d_j is point j's
    minimal L1 distance to the rest; None for fronts smaller than two.
    """
    size = len(front)
    if size < 2:
        return None
    nearest = []
    for j in range(size):
        best = math.inf
        pj = front[j]
        for k in range(size):
            if k == j:
                continue
            d = sum(abs(a - b) for a, b in zip(pj, front[k]))
            if d < best:
                best = d
        nearest.append(best)
    mean = math.fsum(nearest) / size
    return math.sqrt(math.fsum((mean - d) ** 2 for d in nearest) / (size - 1))


def aggregate_runs(per_run: Sequence[float]) -> tuple[float, float]:
    """Mean and 95% confidence half-width (1.96 * sigma / sqrt(n)).

    Sigma is the population standard deviation (divisor n).
    """
    if not per_run:
        raise ValueError("aggregate_runs requires at least one value")
    n = len(per_run)
    mean = math.fsum(per_run) / n
    sigma = math.sqrt(math.fsum((x - mean) ** 2 for x in per_run) / n)
    return mean, 1.96 * sigma / math.sqrt(n)


def reference_point_from_union(all_valid: Sequence[Sequence[float]]) -> Vector:
    """Coordinatewise maximum over the union of valid objective vectors."""
    if not all_valid:
        raise ValueError("no valid solutions to derive a reference point from")
    length = len(all_valid[0])
    if any(len(v) != length for v in all_valid):
        raise ValueError("objective vectors must share one length")
    return tuple(max(v[i] for v in all_valid) for i in range(length))
