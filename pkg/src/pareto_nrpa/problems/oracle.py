"""Exact Pareto front of small TSPTW instances by full tour enumeration."""

from __future__ import annotations

import math
from itertools import permutations

from ..pareto import ParetoArchive, Solution
from .tsptw import MoTsptwInstance, MoTsptwProblem

MAX_ORACLE_CITIES = 11


def enumerate_tours(instance: MoTsptwInstance, check_depot_return: bool = True):
    """Yield one Solution per tour, in lexicographic permutation order."""
    problem = MoTsptwProblem(instance, check_depot_return=check_depot_return)
    for perm in permutations(range(1, instance.n)):
        state = problem.root()
        for move in perm:
            state = problem.play(state, move)
        state = problem.play(state, 0)
        objectives, violations = problem.evaluate(state)
        yield Solution(perm + (0,), objectives, violations)


def brute_force_front(instance: MoTsptwInstance, check_depot_return: bool = True) -> list[Solution]:
    """Exact non-dominated set over all tours of a small instance.

    Enumerates every (n-1)! tour; if any tour is violation-free the front is
    taken over violation-free tours only, otherwise over all tours. Refuses
    instances with more than 11 cities.
    """
    if instance.n > MAX_ORACLE_CITIES:
        raise ValueError(
            f"brute force limited to {MAX_ORACLE_CITIES} cities, got {instance.n}"
        )
    solutions = list(enumerate_tours(instance, check_depot_return=check_depot_return))
    valid = [s for s in solutions if s.violations == 0]
    pool = valid if valid else solutions
    archive = ParetoArchive()
    for sol in pool:
        archive.insert(sol)
    return archive.front


def oracle_evaluations(instance: MoTsptwInstance) -> int:
    """Number of tours the oracle evaluates."""
    return math.factorial(instance.n - 1)
