"""Sequential decision problem interface consumed by the playout engine."""

from __future__ import annotations


class SequenceProblem:
    """Finite-horizon sequential decision problem.

    A problem exposes a root state, legal moves, a transition function and a
    terminal evaluation returning one objective vector (all objectives
    minimized) plus a constraint-violation count. Every move carries an
    integer code identifying the (state class, move) pair for policy-weight
    lookup; codes of distinct legal moves at one state must differ. Every
    trajectory from the root must reach a terminal state in finitely many
    moves.
    """

    n_objectives: int = 1

    def root(self):
        raise NotImplementedError

    def legal_moves(self, state) -> list:
        raise NotImplementedError

    def is_terminal(self, state) -> bool:
        raise NotImplementedError

    def play(self, state, move):
        raise NotImplementedError

    def evaluate(self, state) -> tuple[tuple[float, ...], int]:
        raise NotImplementedError

    def code(self, state, move) -> int:
        raise NotImplementedError

    def bias(self, state, move) -> float:
        """Domain logit offset added to a move's weight when bias is enabled."""
        return 0.0

    def move_entries(self, state) -> list[tuple]:
        """(move, code, bias) triples for all legal moves at `state`.

        Subclasses may override with a faster equivalent; the result must
        match the per-move `code`/`bias` accessors exactly.
        """
        return [(m, self.code(state, m), self.bias(state, m)) for m in self.legal_moves(state)]


class PrimaryObjectiveView(SequenceProblem):
    """Single-objective view of a multi-objective problem (first objective)."""

    n_objectives = 1

    def __init__(self, problem: SequenceProblem):
        self.problem = problem

    def root(self):
        return self.problem.root()

    def legal_moves(self, state):
        return self.problem.legal_moves(state)

    def is_terminal(self, state):
        return self.problem.is_terminal(state)

    def play(self, state, move):
        return self.problem.play(state, move)

    def evaluate(self, state):
        objectives, violations = self.problem.evaluate(state)
        return (objectives[0],), violations

    def code(self, state, move):
        return self.problem.code(state, move)

    def bias(self, state, move):
        return self.problem.bias(state, move)

    def move_entries(self, state):
        return self.problem.move_entries(state)
