"""Pareto dominance primitives and the non-dominated archive.

All objectives are minimized. Vectors are plain tuples of floats; dominance,
sorting into fronts, crowding distances and archive maintenance are the
building blocks used both by the search and by the evaluation metrics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

Vector = tuple[float, ...]


@dataclass(frozen=True, slots=True)
class Solution:
    """A terminal move sequence with its evaluation.

    `policy_index` records which policy of the active policy set produced
    the sequence; it drives per-policy adaptation.
    """

    moves: tuple
    objectives: Vector
    violations: int
    policy_index: int = 0


class InsertOutcome(str, Enum):
    ACCEPTED = "accepted"
    REJECTED_DOMINATED = "rejected-dominated"
    REJECTED_DUPLICATE = "rejected-duplicate"


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True iff `a` Pareto-dominates `b` (minimization).

    `a` dominates `b` when a_i <= b_i for every objective and a_j < b_j for
    at least one. Equal vectors do not dominate each other.
    """
    if len(a) != len(b):
        raise ValueError(f"objective length mismatch: {len(a)} vs {len(b)}")
    strictly_better = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strictly_better = True
    return strictly_better


def non_dominated_sort(population: Sequence[Sequence[float]]) -> list[list[int]]:
    """Partition a population of objective vectors into ranked fronts.

    Returns index fronts F_0, F_1, ... where F_0 holds the vectors with no
    dominator in the population and every member of F_{i+1} is dominated by
    at least one member of F_i. An empty population yields an empty list.
    """
    if not population:
        return []
    arr = np.asarray(population, dtype=float)
    if arr.ndim != 2:
        raise ValueError("population must contain equal-length objective vectors")
    a = arr[:, None, :]
    b = arr[None, :, :]
    dom = np.all(a <= b, axis=2) & np.any(a < b, axis=2)  # dom[i, j]: i dominates j
    counts = dom.sum(axis=0).astype(np.int64)
    fronts: list[list[int]] = []
    current = np.flatnonzero(counts == 0)
    while current.size:
        fronts.append([int(i) for i in current])
        counts[current] = -1
        counts -= dom[current].sum(axis=0)
        current = np.flatnonzero(counts == 0)
    return fronts


def crowding_distance(front: Sequence[Sequence[float]]) -> list[float]:
    """Crowding distances for a set of mutually non-dominated vectors.

    Per objective the set is sorted (ties broken by the following objectives,
    then by input position); the first and last of the sorted order receive
    +inf and each interior point accumulates the gap between its two sorted
    neighbours normalized by the objective's span. An objective with zero
    span contributes nothing. Mutual non-dominance of the input is assumed,
    not checked. Output order matches input order.
    """
    size = len(front)
    if size == 0:
        return []
    if size <= 2:
        return [math.inf] * size
    n_obj = len(front[0])
    dist = [0.0] * size
    indices = list(range(size))
    for m in range(n_obj):

        def sort_key(i: int, m: int = m) -> tuple:
            v = front[i]
            return tuple(v[(m + j) % n_obj] for j in range(n_obj)) + (i,)

        order = sorted(indices, key=sort_key)
        dist[order[0]] = math.inf
        dist[order[-1]] = math.inf
        span = front[order[-1]][m] - front[order[0]][m]
        if span <= 0.0:
            continue
        for k in range(1, size - 1):
            i = order[k]
            if dist[i] != math.inf:
                dist[i] += (front[order[k + 1]][m] - front[order[k - 1]][m]) / span
    return dist


class ParetoArchive:
    """Unbounded archive of mutually non-dominated solutions.

    Solutions with equal objective vectors but distinct move sequences are
    all retained; re-inserting an identical move sequence is a no-op. The
    archive preserves insertion order, which downstream tie-breaking relies
    on. A single archive must not be mutated concurrently.
    """

    def __init__(self, solutions: Iterable[Solution] = ()):
        self._solutions: list[Solution] = []
        self._moves_seen: set = set()
        for sol in solutions:
            self.insert(sol)

    def __len__(self) -> int:
        return len(self._solutions)

    def __iter__(self):
        return iter(self._solutions)

    @property
    def front(self) -> list[Solution]:
        """Current non-dominated solutions, in insertion order."""
        return list(self._solutions)

    def vectors(self) -> list[Vector]:
        return [s.objectives for s in self._solutions]

    def insert(self, candidate: Solution) -> InsertOutcome:
        """Insert a candidate, dropping any members it dominates."""
        if self._solutions and len(candidate.objectives) != len(self._solutions[0].objectives):
            raise ValueError("candidate objective length does not match archive")
        if candidate.moves in self._moves_seen:
            return InsertOutcome.REJECTED_DUPLICATE
        obj = candidate.objectives
        for member in self._solutions:
            if dominates(member.objectives, obj):
                return InsertOutcome.REJECTED_DOMINATED
        survivors = []
        for member in self._solutions:
            if dominates(obj, member.objectives):
                self._moves_seen.discard(member.moves)
            else:
                survivors.append(member)
        survivors.append(candidate)
        self._solutions = survivors
        self._moves_seen.add(candidate.moves)
        return InsertOutcome.ACCEPTED


def policy_representatives(population: Sequence[Solution], n_policies: int) -> dict[int, Solution]:
    """Best-ranked solution per policy within a population.

    Fronts are scanned in rank order; the first solution encountered for a
    policy becomes its representative, so policies present in F_0 are
    represented by their F_0 members. Policies that produced no solution are
    absent from the result.
    """
    if not population:
        return {}
    for sol in population:
        if not 0 <= sol.policy_index < n_policies:
            raise ValueError(f"policy index {sol.policy_index} out of range [0, {n_policies})")
    fronts = non_dominated_sort([s.objectives for s in population])
    reps: dict[int, Solution] = {}
    for front in fronts:
        for i in front:
            k = population[i].policy_index
            if k not in reps:
                reps[k] = population[i]
        if len(reps) == n_policies:
            break
    return reps
