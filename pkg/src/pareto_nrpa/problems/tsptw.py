"""Bi-objective traveling salesman with time windows.

A tour starts and ends at the depot (city 0), visits every other city exactly
once and should reach each city inside its time window. Arriving early means
waiting until the window opens; arriving late counts one constraint violation
for that city. Two independent edge-cost matrices give the two objectives:

    f1 = sum of primary edge costs  + 1e6 * violations
    f2 = sum of secondary edge costs + 1e6 * violations

so any violation-free tour dominates any tour with violations as long as raw
tour costs stay below the penalty unit.

Instance file format (UTF-8 text, '#' lines are comments):

    line 1:           n  (city count including the depot)
    next n lines:     primary cost matrix, n reals per line
    next n lines:     secondary cost matrix, n reals per line
    next n lines:     "e l" time window per city, depot first

The classic single-matrix format (n, then the primary matrix, then windows;
parsed as a token stream since rows may wrap) is accepted by
`parse_classic_instance` and upgraded to the bi-objective format with
`generate_secondary_costs`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base import SequenceProblem

PENALTY = 1e6


class InstanceParseError(ValueError):
    """Malformed instance text; the message names the offending line."""


@dataclass(frozen=True)
class MoTsptwInstance:
    """Immutable bi-objective TSPTW instance."""

    n: int
    cost1: tuple[tuple[float, ...], ...]
    cost2: tuple[tuple[float, ...], ...]
    windows: tuple[tuple[float, float], ...]


class TourState:
    """Partial tour: current city, clock, violations and remaining cities."""

    __slots__ = ("remaining", "current", "elapsed_time", "violations", "moves")

    def __init__(self, remaining, current, elapsed_time, violations, moves):
        self.remaining = remaining
        self.current = current
        self.elapsed_time = elapsed_time
        self.violations = violations
        self.moves = moves

    @property
    def visited(self) -> set:
        return {m for m in self.moves if m != 0}


class MoTsptwProblem(SequenceProblem):
    """Playout interface over a `MoTsptwInstance`.

    Move codes are `current * n + move`, i.e. one code per directed edge.
    The bias of an edge is -10 times its primary cost normalized by the
    largest primary cost in the instance. `check_depot_return` controls
    whether the depot's own window is checked (and counted) on the final
    return leg.
    """

    n_objectives = 2

    def __init__(self, instance: MoTsptwInstance, check_depot_return: bool = True):
        self.instance = instance
        self.n = instance.n
        self.check_depot_return = check_depot_return
        self._cost1 = [list(row) for row in instance.cost1]
        self._cost2 = [list(row) for row in instance.cost2]
        self._open = [w[0] for w in instance.windows]
        self._close = [w[1] for w in instance.windows]
        d_max = max(max(row) for row in instance.cost1)
        if d_max > 0:
            self._bias_rows = [[-10.0 * c / d_max for c in row] for row in self._cost1]
        else:
            self._bias_rows = [[0.0] * self.n for _ in range(self.n)]
        self._all_cities = tuple(range(1, self.n))

    def root(self) -> TourState:
        return TourState(self._all_cities, 0, 0.0, 0, ())

    def is_terminal(self, state: TourState) -> bool:
        return not state.remaining and state.current == 0 and len(state.moves) == self.n

    def legal_moves(self, state: TourState) -> list:
        if state.remaining:
            return list(state.remaining)
        if self.is_terminal(state):
            return []
        return [0]

    def play(self, state: TourState, move) -> TourState:
        if state.remaining:
            if move not in state.remaining:
                raise ValueError(f"illegal move {move} from city {state.current}")
            remaining = tuple(c for c in state.remaining if c != move)
        else:
            if move != 0 or self.is_terminal(state):
                raise ValueError(f"illegal move {move} from city {state.current}")
            remaining = ()
        arrival = state.elapsed_time + self._cost1[state.current][move]
        violations = state.violations
        if arrival > self._close[move] and (move != 0 or self.check_depot_return):
            violations += 1
        window_open = self._open[move]
        elapsed = arrival if arrival >= window_open else window_open
        return TourState(remaining, move, elapsed, violations, state.moves + (move,))

    def evaluate(self, state: TourState) -> tuple[tuple[float, float], int]:
        if not self.is_terminal(state):
            raise ValueError("evaluate requires a terminal state")
        f1 = 0.0
        f2 = 0.0
        current = 0
        for move in state.moves:
            f1 += self._cost1[current][move]
            f2 += self._cost2[current][move]
            current = move
        penalty = PENALTY * state.violations
        return (f1 + penalty, f2 + penalty), state.violations

    def code(self, state: TourState, move) -> int:
        return state.current * self.n + move

    def bias(self, state: TourState, move) -> float:
        return self._bias_rows[state.current][move]

    def move_entries(self, state: TourState) -> list[tuple]:
        base = state.current * self.n
        bias_row = self._bias_rows[state.current]
        remaining = state.remaining
        if remaining:
            return [(m, base + m, bias_row[m]) for m in remaining]
        if self.is_terminal(state):
            return []
        return [(0, base, bias_row[0])]


def _parse_real(token: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise InstanceParseError(f"line {line_no}: non-numeric token {token!r}") from None
    if not math.isfinite(value):
        raise InstanceParseError(f"line {line_no}: non-finite value {token!r}")
    return value


def parse_instance(text: str) -> MoTsptwInstance:
    """Parse the bi-objective instance format documented in this module."""
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)]
    data = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not data:
        raise InstanceParseError("line 1: empty instance file")

    pos = 0
    line_no, header = data[pos]
    pos += 1
    tokens = header.split()
    if len(tokens) != 1 or not tokens[0].lstrip("+").isdigit():
        raise InstanceParseError(f"line {line_no}: expected the city count, got {header!r}")
    n = int(tokens[0])
    if n < 2:
        raise InstanceParseError(f"line {line_no}: need at least 2 cities, got {n}")

    def read_matrix(label: str) -> tuple[tuple[float, ...], ...]:
        nonlocal pos
        rows = []
        for r in range(n):
            if pos >= len(data):
                raise InstanceParseError(f"line {data[-1][0]}: unexpected end of file in {label} row {r}")
            line_no, ln = data[pos]
            pos += 1
            tokens = ln.split()
            if len(tokens) != n:
                raise InstanceParseError(
                    f"line {line_no}: {label} row {r} has {len(tokens)} entries, expected {n}"
                )
            row = [_parse_real(t, line_no) for t in tokens]
            for c, value in enumerate(row):
                if value < 0:
                    raise InstanceParseError(f"line {line_no}: negative cost {value} in {label}")
                if c == r and value != 0:
                    raise InstanceParseError(f"line {line_no}: nonzero diagonal {value} in {label}")
            rows.append(tuple(row))
        return tuple(rows)

    cost1 = read_matrix("primary cost matrix")
    cost2 = read_matrix("secondary cost matrix")

    windows = []
    for r in range(n):
        if pos >= len(data):
            raise InstanceParseError(f"line {data[-1][0]}: unexpected end of file in window row {r}")
        line_no, ln = data[pos]
        pos += 1
        tokens = ln.split()
        if len(tokens) != 2:
            raise InstanceParseError(f"line {line_no}: window row {r} has {len(tokens)} entries, expected 2")
        earliest = _parse_real(tokens[0], line_no)
        latest = _parse_real(tokens[1], line_no)
        if earliest > latest:
            raise InstanceParseError(f"line {line_no}: window opens after it closes ({earliest} > {latest})")
        windows.append((earliest, latest))
    if pos < len(data):
        line_no, _ = data[pos]
        raise InstanceParseError(f"line {line_no}: unexpected trailing content")
    return MoTsptwInstance(n, cost1, cost2, tuple(windows))


def serialize_instance(instance: MoTsptwInstance) -> str:
    """Render an instance in the format `parse_instance` reads, losslessly."""
    out = [str(instance.n)]
    for matrix in (instance.cost1, instance.cost2):
        for row in matrix:
            out.append(" ".join(f"{v:.17g}" for v in row))
    for earliest, latest in instance.windows:
        out.append(f"{earliest:.17g} {latest:.17g}")
    return "\n".join(out) + "\n"


def parse_classic_instance(text: str) -> MoTsptwInstance:
    """Parse a classic single-cost TSPTW file (token stream, rows may wrap).

    The secondary matrix is zero-filled; follow with
    `generate_secondary_costs` to obtain a usable bi-objective instance.
    """
    tokens: list[tuple[int, str]] = []
    for i, ln in enumerate(text.splitlines(), 1):
        stripped = ln.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens.extend((i, t) for t in stripped.split())
    if not tokens:
        raise InstanceParseError("line 1: empty instance file")
    line_no, tok = tokens[0]
    try:
        n = int(tok)
    except ValueError:
        raise InstanceParseError(f"line {line_no}: expected the city count, got {tok!r}") from None
    if n < 2:
        raise InstanceParseError(f"line {line_no}: need at least 2 cities, got {n}")
    needed = 1 + n * n + 2 * n
    if len(tokens) < needed:
        raise InstanceParseError(f"line {tokens[-1][0]}: unexpected end of file, expected {needed} values")
    if len(tokens) > needed:
        raise InstanceParseError(f"line {tokens[needed][0]}: unexpected trailing content")
    values = [_parse_real(t, ln) for ln, t in tokens[1:]]
    cost1 = tuple(tuple(values[r * n : (r + 1) * n]) for r in range(n))
    for r in range(n):
        for c in range(n):
            if cost1[r][c] < 0:
                raise InstanceParseError(f"negative cost {cost1[r][c]} at row {r}")
            if r == c and cost1[r][c] != 0:
                raise InstanceParseError(f"nonzero diagonal {cost1[r][c]} at row {r}")
    zeros = tuple(tuple(0.0 for _ in range(n)) for _ in range(n))
    windows = []
    base = n * n
    for r in range(n):
        earliest, latest = values[base + 2 * r], values[base + 2 * r + 1]
        if earliest > latest:
            raise InstanceParseError(f"window {r} opens after it closes ({earliest} > {latest})")
        windows.append((earliest, latest))
    return MoTsptwInstance(n, cost1, zeros, tuple(windows))


def generate_secondary_costs(instance: MoTsptwInstance, seed: int) -> MoTsptwInstance:
    """Replace the secondary matrix with seeded Euclidean distances.

    One planar coordinate per city is drawn uniformly from a square whose
    side equals the largest primary cost; the secondary cost of an edge is
    the Euclidean distance between its endpoints. Deterministic in `seed`.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    side = max(max(row) for row in instance.cost1)
    coords = rng.uniform(0.0, side, size=(instance.n, 2))
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    cost2 = tuple(tuple(float(v) for v in row) for row in dist)
    return MoTsptwInstance(instance.n, instance.cost1, cost2, instance.windows)
