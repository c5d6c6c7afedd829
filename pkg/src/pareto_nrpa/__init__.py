"""Multi-policy nested rollout policy adaptation for multi-objective search.

Public surface: Pareto primitives (`pareto`), the search engine (`search`),
problem definitions including the bi-objective TSPTW benchmark (`problems`),
front-quality metrics (`metrics`) and the experiment harness (`harness`).
"""

from importlib import resources
from pathlib import Path

from .pareto import (
    InsertOutcome,
    ParetoArchive,
    Solution,
    crowding_distance,
    dominates,
    non_dominated_sort,
    policy_representatives,
)
from .search import (
    EvalCounter,
    PolicyTable,
    SearchConfig,
    action_probabilities,
    adapt_single,
    nrpa,
    pareto_adapt,
    pareto_nrpa,
    playout,
    uniform_policies,
)

__version__ = "0.1.0"


def bundled_instances() -> dict[str, Path]:
    """Name -> path of the instance files shipped with the package."""
    root = resources.files("pareto_nrpa").joinpath("instances")
    out = {}
    for entry in root.iterdir():
        if entry.name.endswith(".txt"):
            out[entry.name[: -len(".txt")]] = Path(str(entry))
    return dict(sorted(out.items()))


def bundled_instance_path(name: str) -> Path:
    """Path of one bundled instance, e.g. ``rc_206.1``."""
    try:
        return bundled_instances()[name]
    except KeyError:
        raise KeyError(f"no bundled instance named {name!r}") from None


__all__ = [
    "EvalCounter",
    "InsertOutcome",
    "ParetoArchive",
    "PolicyTable",
    "SearchConfig",
    "Solution",
    "action_probabilities",
    "adapt_single",
    "bundled_instance_path",
    "bundled_instances",
    "crowding_distance",
    "dominates",
    "non_dominated_sort",
    "nrpa",
    "pareto_adapt",
    "pareto_nrpa",
    "playout",
    "policy_representatives",
    "uniform_policies",
]
