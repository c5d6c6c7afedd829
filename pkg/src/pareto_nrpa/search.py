"""Softmax playout policies and nested policy-adaptation search.

Two search drivers share the same playout and adaptation machinery:

* `nrpa` is the classical single-objective nested search: each level runs
  lower-level searches, keeps the best (maximized) score, and gradient-steps
  a local policy copy toward the stored best sequence after every iteration.
* `pareto_nrpa` is the multi-objective generalization: a set of policies, a
  per-level non-dominated archive instead of a best score, and adaptation of
  each policy toward the archived sequences it produced, weighted by their
  crowding distance.

With one objective, one policy, crowding-distance weighting off and
one-sequence adaptation, `pareto_nrpa` reduces exactly to `nrpa` (same RNG
stream, bitwise-identical policy tables).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .pareto import ParetoArchive, Solution, crowding_distance, policy_representatives

ADAPT_ALL = "all"
ADAPT_ONE = "one"
_ADAPT_ALIASES = {
    "all": ADAPT_ALL,
    "all-sequences": ADAPT_ALL,
    "one": ADAPT_ONE,
    "one-sequence": ADAPT_ONE,
}


@dataclass(slots=True)
class PolicyTable:
    """Sparse move-code -> weight map; absent codes read as weight 0."""

    weights: dict = field(default_factory=dict)

    def get(self, code) -> float:
        return self.weights.get(code, 0.0)

    def copy(self) -> "PolicyTable":
        return PolicyTable(dict(self.weights))


def uniform_policies(n_policies: int) -> list[PolicyTable]:
    """Fresh all-zero (i.e. uniform) policy set."""
    if n_policies < 1:
        raise ValueError("need at least one policy")
    return [PolicyTable() for _ in range(n_policies)]


@dataclass(slots=True)
class EvalCounter:
    """Count of objective evaluations consumed; `budget=None` is unlimited."""

    budget: int | None = None
    used: int = 0

    def exhausted(self) -> bool:
        return self.budget is not None and self.used >= self.budget

    def consume(self) -> None:
        if self.exhausted():
            raise ValueError("evaluation budget exhausted")
        self.used += 1


@dataclass
class SearchConfig:
    level: int = 4
    alpha: float = 0.5
    n_policies: int = 4
    iterations_per_level: int = 100
    eval_budget: int = 100_000
    use_bias: bool = True
    cd_weighting: bool = True
    adapt_strategy: str = ADAPT_ALL
    cd_clip: float = 2.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be >= 1")
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")
        if self.n_policies < 1:
            raise ValueError("n_policies must be >= 1")
        if self.iterations_per_level < 1:
            raise ValueError("iterations_per_level must be >= 1")
        if self.eval_budget < 1:
            raise ValueError("eval_budget must be >= 1")
        if self.cd_clip <= 0:
            raise ValueError("cd_clip must be > 0")
        try:
            self.adapt_strategy = _ADAPT_ALIASES[self.adapt_strategy]
        except KeyError:
            raise ValueError(f"unknown adapt strategy {self.adapt_strategy!r}") from None


def _softmax(logits: list) -> list:
    peak = max(logits)
    exps = [math.exp(x - peak) for x in logits]
    total = sum(exps)
    return [e / total for e in exps]


def action_probabilities(policy: PolicyTable, legal_moves, use_bias: bool = False) -> list:
    """Softmax over policy weights (plus bias when enabled).

    `legal_moves` holds (move, code, bias) triples as returned by a
    problem's `move_entries`. Probabilities are strictly positive and sum to
    one up to floating-point rounding.
    """
    if not legal_moves:
        raise ValueError("legal_moves must be non-empty")
    weight = policy.weights.get
    if use_bias:
        logits = [weight(code, 0.0) + bias for _, code, bias in legal_moves]
    else:
        logits = [weight(code, 0.0) for _, code, _ in legal_moves]
    return _softmax(logits)


def playout(problem, policy: PolicyTable, rng, *, counter: EvalCounter | None = None,
            use_bias: bool = False, policy_index: int = 0) -> Solution:
    """Sample one root-to-terminal trajectory under a policy.

    Consumes exactly one evaluation from `counter` (when given) and one RNG
    draw per decision step.
    """
    if counter is not None:
        counter.consume()
    weight = policy.weights.get
    state = problem.root()
    moves = []
    is_terminal = problem.is_terminal
    move_entries = problem.move_entries
    play = problem.play
    while not is_terminal(state):
        entries = move_entries(state)
        if not entries:
            raise ValueError("non-terminal state has no legal moves")
        if use_bias:
            logits = [weight(code, 0.0) + bias for _, code, bias in entries]
        else:
            logits = [weight(code, 0.0) for _, code, _ in entries]
        probs = _softmax(logits)
        draw = rng.random()
        chosen = entries[-1][0]
        acc = 0.0
        for (move, _, _), p in zip(entries, probs):
            acc += p
            if draw < acc:
                chosen = move
                break
        state = play(state, chosen)
        moves.append(chosen)
    objectives, violations = problem.evaluate(state)
    return Solution(tuple(moves), tuple(objectives), violations, policy_index)


def adapt_single(policy: PolicyTable, solution: Solution, problem, alpha: float,
                 weight: float = 1.0, use_bias: bool = False) -> PolicyTable:
    """One gradient step of the policy toward a sequence.

    Replays the sequence from the root; at every step the played move's code
    gains `alpha * weight` and each legal move's code loses `alpha * weight *
    p(move)`, with probabilities taken from the policy as it was *before*
    the whole update. Returns a new table; the input is untouched.
    """
    step = alpha * weight
    if step == 0.0:
        return policy.copy()
    old_weight = policy.weights.get
    new = dict(policy.weights)
    state = problem.root()
    for move in solution.moves:
        entries = problem.move_entries(state)
        played_code = None
        for m, code, _ in entries:
            if m == move:
                played_code = code
                break
        if played_code is None:
            raise ValueError(f"sequence replays illegal move {move!r}")
        if use_bias:
            logits = [old_weight(code, 0.0) + bias for _, code, bias in entries]
        else:
            logits = [old_weight(code, 0.0) for _, code, _ in entries]
        probs = _softmax(logits)
        new[played_code] = new.get(played_code, 0.0) + step
        for (_, code, _), p in zip(entries, probs):
            new[code] = new.get(code, 0.0) - step * p
        state = problem.play(state, move)
    return PolicyTable(new)


def pareto_adapt(policies: list[PolicyTable], adapt_set: list[Solution], problem,
                 config: SearchConfig) -> list[PolicyTable]:
    """Adapt each policy toward the archived sequences it produced.

    Crowding distances are computed over the whole adapt set; each
    sequence's update weight is its distance clipped to `cd_clip` (1 when
    distance weighting is off). Under the one-sequence strategy a policy
    adapts only toward its highest-distance sequence, later-archived
    sequences winning ties.
    """
    if not adapt_set:
        return list(policies)
    n_policies = len(policies)
    for sol in adapt_set:
        if not 0 <= sol.policy_index < n_policies:
            raise ValueError(f"policy index {sol.policy_index} out of range [0, {n_policies})")
    distances = crowding_distance([s.objectives for s in adapt_set])

    if config.adapt_strategy == ADAPT_ONE:
        best_by_policy: dict[int, tuple] = {}
        for position, (sol, cd) in enumerate(zip(adapt_set, distances)):
            key = (cd, position)
            k = sol.policy_index
            if k not in best_by_policy or key > best_by_policy[k][0]:
                best_by_policy[k] = (key, sol, cd)
        targets = [(sol, cd) for _, sol, cd in
                   (best_by_policy[k] for k in sorted(best_by_policy))]
    else:
        targets = list(zip(adapt_set, distances))

    new_policies = list(policies)
    for sol, cd in targets:
        w = min(cd, config.cd_clip) if config.cd_weighting else 1.0
        new_policies[sol.policy_index] = adapt_single(
            new_policies[sol.policy_index], sol, problem, config.alpha, w, config.use_bias
        )
    return new_policies


def _build_adapt_set(front: list[Solution], recent: list[Solution], n_policies: int) -> list[Solution]:
    """Archive front plus, per policy missing from it, its best-ranked solution."""
    represented = {s.policy_index for s in front}
    adapt_set = list(front)
    if len(represented) >= n_policies:
        return adapt_set
    population = front + [s for s in recent if s not in front]
    reps = policy_representatives(population, n_policies)
    for k in sorted(reps):
        if k not in represented:
            adapt_set.append(reps[k])
    return adapt_set


def _pareto_search(level: int, policies: list[PolicyTable], problem, counter: EvalCounter,
                   config: SearchConfig, rng, trace=None, archive: ParetoArchive | None = None
                   ) -> list[Solution]:
    if level == 0:
        if counter.exhausted():
            return []
        k = rng.randrange(len(policies)) if len(policies) > 1 else 0
        sol = playout(problem, policies[k], rng, counter=counter,
                      use_bias=config.use_bias, policy_index=k)
        return [sol]
    local = archive if archive is not None else ParetoArchive()
    pols = [p.copy() for p in policies]
    n_policies = len(pols)
    for iteration in range(config.iterations_per_level):
        if counter.exhausted():
            break
        child = _pareto_search(level - 1, pols, problem, counter, config, rng, trace)
        for sol in child:
            local.insert(sol)
        if counter.exhausted():
            break
        front = local.front
        adapt_set = _build_adapt_set(front, child, n_policies)
        pols = pareto_adapt(pols, adapt_set, problem, config)
        if trace is not None:
            trace(level, iteration, pols)
    return local.front


def pareto_nrpa(level: int, policies: list[PolicyTable], problem, archive: ParetoArchive,
                counter: EvalCounter, config: SearchConfig, rng, trace=None) -> ParetoArchive:
    """Nested multi-policy search; results accumulate in `archive`.

    At level 0 a uniformly drawn policy guides a single playout (the draw is
    skipped when there is only one policy). At level >= 1 the invocation
    maintains its own non-dominated set (the passed archive serves as the
    top invocation's), merging each lower-level result and adapting a local
    copy of the policy set after every iteration. The search hard-stops once
    `counter` reaches its budget.
    """
    if level < 0:
        raise ValueError("level must be >= 0")
    if level == 0:
        for sol in _pareto_search(0, policies, problem, counter, config, rng, trace):
            archive.insert(sol)
        return archive
    _pareto_search(level, policies, problem, counter, config, rng, trace, archive=archive)
    return archive


def nrpa(level: int, policy: PolicyTable, problem, counter: EvalCounter,
         config: SearchConfig, rng, trace=None) -> tuple[float, Solution | None]:
    """Classical nested rollout policy adaptation (single objective).

    Scores are maximized internally, so the problem's minimized objective is
    negated. Returns the best score and sequence found, or (-inf, None) when
    the budget was already exhausted.
    """
    if problem.n_objectives != 1:
        raise ValueError("nrpa requires a single-objective problem")
    if level < 0:
        raise ValueError("level must be >= 0")
    if level == 0:
        if counter.exhausted():
            return (-math.inf, None)
        sol = playout(problem, policy, rng, counter=counter, use_bias=config.use_bias)
        return (-sol.objectives[0], sol)
    pol = policy.copy()
    best_score = -math.inf
    best_sol: Solution | None = None
    for iteration in range(config.iterations_per_level):
        if counter.exhausted():
            break
        score, sol = nrpa(level - 1, pol, problem, counter, config, rng, trace)
        if sol is not None and score >= best_score:
            best_score, best_sol = score, sol
        if counter.exhausted():
            break
        if best_sol is not None:
            pol = adapt_single(pol, best_sol, problem, config.alpha, 1.0, config.use_bias)
        if trace is not None:
            trace(level, iteration, pol)
    return best_score, best_sol
