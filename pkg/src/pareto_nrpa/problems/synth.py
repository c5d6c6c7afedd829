"""Seeded synthetic TSPTW instance construction.

Cities are placed uniformly in a square; primary costs are Euclidean
distances rounded to two decimals. Time windows are cut around the visit
times of a hidden reference tour, so every instance admits at least one
violation-free tour by construction; window width controls how hard that
tour (or a neighbour of it) is to find. Secondary costs come from
`generate_secondary_costs`, i.e. fresh coordinates drawn with a shifted
seed.
"""

from __future__ import annotations

import math

import numpy as np

from .tsptw import MoTsptwInstance, generate_secondary_costs


def synthesize_instance(
    n: int,
    seed: int,
    window_low: float,
    window_high: float,
    depot_slack: float,
    box: float = 100.0,
    reference: str = "greedy",
) -> MoTsptwInstance:
    """Build an instance whose windows follow a hidden reference tour.

    Each non-depot city's window is [t - lo, t + hi] where t is the city's
    visit time along the reference tour and lo, hi are uniform draws from
    [window_low, window_high]. The depot window is [0, makespan +
    depot_slack]. The reference tour is nearest-neighbour ("greedy",
    resembling route-derived benchmark instances) or a uniform random
    permutation ("random"). Deterministic in `seed`.
    """
    if n < 2:
        raise ValueError("need at least 2 cities")
    if not 0 < window_low <= window_high:
        raise ValueError("window bounds must satisfy 0 < low <= high")
    if reference not in ("greedy", "random"):
        raise ValueError(f"unknown reference tour kind {reference!r}")
    rng = np.random.Generator(np.random.PCG64(seed))
    coords = rng.uniform(0.0, box, size=(n, 2))
    diff = coords[:, None, :] - coords[None, :, :]
    cost1 = np.round(np.hypot(diff[..., 0], diff[..., 1]), 2)

    if reference == "greedy":
        order = [0]
        unvisited = set(range(1, n))
        while unvisited:
            here = order[-1]
            order.append(min(unvisited, key=lambda c: (cost1[here][c], c)))
            unvisited.remove(order[-1])
    else:
        order = [0] + [int(c) + 1 for c in rng.permutation(n - 1)]
    visit_time = {}
    clock = 0.0
    previous = 0
    for city in order[1:]:
        clock += float(cost1[previous][city])
        visit_time[city] = clock
        previous = city
    makespan = clock + float(cost1[previous][0])

    windows = [(0.0, round(makespan + depot_slack, 2))]
    for city in range(1, n):
        lo = rng.uniform(window_low, window_high)
        hi = rng.uniform(window_low, window_high)
        earliest = round(max(0.0, visit_time[city] - lo), 2)
        latest = round(visit_time[city] + hi, 2)
        windows.append((earliest, latest))

    instance = MoTsptwInstance(
        n,
        tuple(tuple(float(v) for v in row) for row in cost1),
        tuple(tuple(0.0 for _ in range(n)) for _ in range(n)),
        tuple(windows),
    )
    instance = generate_secondary_costs(instance, seed + 1_000_003)
    if tour_violations(instance, order[1:] + [0]) != 0:
        raise AssertionError("reference tour violates its own windows")
    return instance


def tour_violations(instance: MoTsptwInstance, moves) -> int:
    """Window violations of a complete tour given as non-depot moves + 0."""
    from .tsptw import MoTsptwProblem

    problem = MoTsptwProblem(instance)
    state = problem.root()
    for move in moves:
        state = problem.play(state, move)
    return state.violations


def mean_window_width(instance: MoTsptwInstance) -> float:
    """Average non-depot window width, a rough tightness indicator."""
    widths = [latest - earliest for earliest, latest in instance.windows[1:]]
    return math.fsum(widths) / len(widths)
