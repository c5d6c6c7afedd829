"""Small fixed-tree problems with known leaf objectives, for tests."""

from __future__ import annotations

import random

from .base import SequenceProblem


class ToyTreeProblem(SequenceProblem):
    """Complete tree of given depth and branching factor.

    States are tuples of moves taken so far; leaves carry fixed objective
    vectors, so the exact non-dominated set is enumerable. Move codes are
    `depth_index * branching + move`, giving each tree level its own code
    block.
    """

    def __init__(self, depth: int, branching: int, leaf_objectives, biases=None):
        if depth < 1 or branching < 1:
            raise ValueError("depth and branching must be >= 1")
        self.depth = depth
        self.branching = branching
        self.leaves = tuple(tuple(v) for v in leaf_objectives)
        if len(self.leaves) != branching**depth:
            raise ValueError(f"expected {branching ** depth} leaf vectors, got {len(self.leaves)}")
        self.n_objectives = len(self.leaves[0])
        if any(len(v) != self.n_objectives for v in self.leaves):
            raise ValueError("leaf vectors must share one length")
        self._biases = biases  # optional map code -> bias

    def root(self):
        return ()

    def is_terminal(self, state) -> bool:
        return len(state) == self.depth

    def legal_moves(self, state) -> list:
        if self.is_terminal(state):
            return []
        return list(range(self.branching))

    def play(self, state, move):
        if not 0 <= move < self.branching:
            raise ValueError(f"illegal move {move}")
        return state + (move,)

    def leaf_index(self, state) -> int:
        idx = 0
        for move in state:
            idx = idx * self.branching + move
        return idx

    def evaluate(self, state):
        if not self.is_terminal(state):
            raise ValueError("evaluate requires a terminal state")
        return self.leaves[self.leaf_index(state)], 0

    def code(self, state, move) -> int:
        return len(state) * self.branching + move

    def bias(self, state, move) -> float:
        if self._biases is None:
            return 0.0
        return self._biases.get(self.code(state, move), 0.0)

    def enumerate_leaves(self):
        """All (moves, objectives) pairs, in leaf-index order."""
        out = []

        def walk(state):
            if self.is_terminal(state):
                out.append((state, self.leaves[self.leaf_index(state)]))
                return
            for move in range(self.branching):
                walk(state + (move,))

        walk(())
        return out


def toy_line_problem(depth: int, branching: int, leaf_objectives=None, n_objectives: int = 2,
                     seed: int = 0) -> ToyTreeProblem:
    """Build a toy tree; leaf vectors default to seeded uniform draws."""
    if leaf_objectives is None:
        rng = random.Random(seed)
        leaf_objectives = [
            tuple(round(rng.uniform(0.0, 10.0), 6) for _ in range(n_objectives))
            for _ in range(branching**depth)
        ]
    return ToyTreeProblem(depth, branching, leaf_objectives)
