"""Seeded, budgeted experiment driver with machine-readable reports.

Runs one algorithm over a set of instances for `n_runs` independent seeded
runs each, computes per-run front metrics against a normalization pool
shared by all runs of an instance, aggregates across runs with 95%
confidence intervals, and writes CSV or JSON. Everything except wall-time
fields is a pure function of the experiment spec, whether runs execute
serially or on a worker pool.
"""

from __future__ import annotations

import dataclasses
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .metrics import (
    MetricBundle,
    aggregate_runs,
    hypervolume_2d,
    normalized_hypervolume,
    overall_spread,
    reference_point_from_union,
    spacing,
)
from .pareto import ParetoArchive, Solution, non_dominated_sort
from .problems import (
    MAX_ORACLE_CITIES,
    MoTsptwProblem,
    PrimaryObjectiveView,
    brute_force_front,
    oracle_evaluations,
    parse_instance,
)
from .search import EvalCounter, PolicyTable, SearchConfig, nrpa, pareto_nrpa, playout, uniform_policies

ALGORITHMS = ("pareto-nrpa", "nrpa", "random-playout", "oracle")
RNG_NAME = "python-random-mt19937"


@dataclass
class ExperimentSpec:
    instances: tuple[str, ...]
    algorithm: str
    config: SearchConfig
    n_runs: int
    base_seed: int
    out: str | None = None
    fmt: str = "json"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.n_runs < 1:
            raise ValueError("n_runs must be >= 1")
        if not self.instances:
            raise ValueError("no instances given")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.fmt!r}")
        self.instances = tuple(self.instances)
        stems = [Path(p).stem for p in self.instances]
        if len(set(stems)) != len(stems):
            raise ValueError("instance file names must be unique (stems collide)")

    def seed_for(self, run_index: int) -> int:
        return self.base_seed + run_index


@dataclass
class RunReport:
    instance: str
    cities: int
    run_index: int
    seed: int
    evaluations: int
    wall_time_s: float
    front: list[Solution]
    metrics: MetricBundle | None = None


def _load_instance(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read instance file {path}: {exc}") from exc
    return parse_instance(text)


def execute_run(instance_path: str, algorithm: str, config: SearchConfig, seed: int,
                run_index: int) -> RunReport:
    """One independent seeded run of one algorithm on one instance."""
    instance = _load_instance(instance_path)
    problem = MoTsptwProblem(instance)
    rng = random.Random(seed)
    started = time.perf_counter()

    if algorithm == "oracle":
        front = brute_force_front(instance)
        evaluations = oracle_evaluations(instance)
    elif algorithm == "pareto-nrpa":
        counter = EvalCounter(config.eval_budget)
        archive = ParetoArchive()
        pareto_nrpa(config.level, uniform_policies(config.n_policies), problem,
                    archive, counter, config, rng)
        front = archive.front
        evaluations = counter.used
    elif algorithm == "nrpa":
        counter = EvalCounter(config.eval_budget)
        _, best = nrpa(config.level, PolicyTable(), PrimaryObjectiveView(problem),
                       counter, config, rng)
        front = []
        if best is not None:
            state = problem.root()
            for move in best.moves:
                state = problem.play(state, move)
            objectives, violations = problem.evaluate(state)
            front = [Solution(best.moves, objectives, violations, 0)]
        evaluations = counter.used
    elif algorithm == "random-playout":
        counter = EvalCounter(config.eval_budget)
        archive = ParetoArchive()
        policy = PolicyTable()
        while not counter.exhausted():
            archive.insert(playout(problem, policy, rng, counter=counter, use_bias=False))
        front = archive.front
        evaluations = counter.used
    else:  # pragma: no cover - guarded by ExperimentSpec
        raise ValueError(f"unknown algorithm {algorithm!r}")

    wall = time.perf_counter() - started
    return RunReport(
        instance=Path(instance_path).stem,
        cities=instance.n,
        run_index=run_index,
        seed=seed,
        evaluations=evaluations,
        wall_time_s=wall,
        front=front,
    )


def _execute_task(task) -> RunReport:
    return execute_run(*task)


def _front_of(vectors: list) -> list:
    fronts = non_dominated_sort(vectors)
    return [vectors[i] for i in fronts[0]] if fronts else []


def _normalization_pool(instance_path: str, reports: list[RunReport], algorithm: str):
    """Valid objective vectors that define ref point, bounds and max HV.

    The union of all runs' valid front points, extended by the exact oracle
    front whenever the instance is small enough to enumerate.
    """
    pool = [s.objectives for r in reports for s in r.front if s.violations == 0]
    source = "runs-union"
    instance = _load_instance(instance_path)
    if instance.n <= MAX_ORACLE_CITIES and algorithm != "oracle":
        pool.extend(s.objectives for s in brute_force_front(instance) if s.violations == 0)
        source = "oracle"
    elif algorithm == "oracle":
        source = "oracle"
    return pool, source


def attach_metrics(instance_path: str, reports: list[RunReport], algorithm: str) -> dict:
    """Fill each report's MetricBundle; returns the normalization record."""
    pool, source = _normalization_pool(instance_path, reports, algorithm)
    if not pool:
        for r in reports:
            cv = (sum(s.violations for s in r.front) / len(r.front)) if r.front else 0.0
            r.metrics = MetricBundle(0.0, 0.0, 0.0, None, cv)
        return {"source": source, "ref_point": None, "ideal": None, "maximal": None,
                "hv_max": None}

    ref = reference_point_from_union(pool)
    length = len(ref)
    ideal = tuple(min(v[i] for v in pool) for i in range(length))
    maximal = ref
    hv_max = hypervolume_2d(_front_of(pool), ref)

    for r in reports:
        valid = [s.objectives for s in r.front if s.violations == 0]
        hv = hypervolume_2d(valid, ref)
        norm = normalized_hypervolume(valid, ref, hv_max) if hv_max > 0 else 0.0
        os_value = overall_spread(valid, ideal, maximal)
        sp = spacing(valid)
        cv = (sum(s.violations for s in r.front) / len(r.front)) if r.front else 0.0
        r.metrics = MetricBundle(hv, norm, os_value, sp, cv)
    return {"source": source, "ref_point": list(ref), "ideal": list(ideal),
            "maximal": list(maximal), "hv_max": hv_max}


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> tuple[list[RunReport], dict]:
    """All runs of the experiment; returns (reports, normalization metadata).

    Reports are ordered by (instance position, run index) regardless of how
    the worker pool schedules them.
    """
    tasks = [
        (path, spec.algorithm, spec.config, spec.seed_for(run), run)
        for path in spec.instances
        for run in range(spec.n_runs)
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_execute_task, tasks))
    else:
        reports = [_execute_task(t) for t in tasks]

    normalization = {}
    for path in spec.instances:
        stem = Path(path).stem
        group = [r for r in reports if r.instance == stem]
        normalization[stem] = attach_metrics(path, group, spec.algorithm)
    return reports, normalization


CSV_COLUMNS = (
    "instance", "cities", "algorithm", "hv_mean", "hv_ci", "os_mean", "os_ci",
    "sp_mean", "sp_ci", "cv_mean", "cv_ci", "n_runs", "excluded_spacing_runs",
)


def aggregate_reports(reports: list[RunReport], algorithm: str) -> list[dict]:
    """Per-instance mean +/- ci95 rows over runs, in first-appearance order."""
    order: list[str] = []
    groups: dict[str, list[RunReport]] = {}
    for r in reports:
        if r.instance not in groups:
            order.append(r.instance)
            groups[r.instance] = []
        groups[r.instance].append(r)

    rows = []
    for instance in order:
        group = sorted(groups[instance], key=lambda r: r.run_index)
        hv_mean, hv_ci = aggregate_runs([r.metrics.normalized_hv for r in group])
        os_mean, os_ci = aggregate_runs([r.metrics.overall_spread for r in group])
        defined = [r.metrics.spacing for r in group if r.metrics.spacing is not None]
        excluded = len(group) - len(defined)
        if defined:
            sp_mean, sp_ci = aggregate_runs(defined)
        else:
            sp_mean = sp_ci = None
        cv_mean, cv_ci = aggregate_runs([r.metrics.constraint_violations for r in group])
        rows.append({
            "instance": instance,
            "cities": group[0].cities,
            "algorithm": algorithm,
            "hv_mean": hv_mean, "hv_ci": hv_ci,
            "os_mean": os_mean, "os_ci": os_ci,
            "sp_mean": sp_mean, "sp_ci": sp_ci,
            "cv_mean": cv_mean, "cv_ci": cv_ci,
            "n_runs": len(group),
            "excluded_spacing_runs": excluded,
        })
    return rows


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def render_csv(summary: list[dict]) -> str:
    if not summary:
        raise ValueError("summary is empty")
    lines = [",".join(CSV_COLUMNS)]
    for row in summary:
        lines.append(",".join(_fmt_cell(row[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _solution_dict(sol: Solution) -> dict:
    return {
        "moves": list(sol.moves),
        "objectives": list(sol.objectives),
        "violations": sol.violations,
        "policy": sol.policy_index,
    }


def _run_dict(report: RunReport) -> dict:
    m = report.metrics
    return {
        "instance": report.instance,
        "cities": report.cities,
        "run_index": report.run_index,
        "seed": report.seed,
        "evaluations": report.evaluations,
        "wall_time_s": report.wall_time_s,
        "front": [_solution_dict(s) for s in report.front],
        "metrics": {
            "hypervolume": m.hypervolume,
            "normalized_hv": m.normalized_hv,
            "overall_spread": m.overall_spread,
            "spacing": m.spacing,
            "constraint_violations": m.constraint_violations,
        },
    }


def render_json(summary: list[dict], reports: list[RunReport] | None = None,
                metadata: dict | None = None) -> str:
    payload = {
        "metadata": metadata or {},
        "summary": summary,
        "runs": [_run_dict(r) for r in (reports or [])],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def experiment_metadata(spec: ExperimentSpec, normalization: dict) -> dict:
    return {
        "algorithm": spec.algorithm,
        "config": dataclasses.asdict(spec.config),
        "base_seed": spec.base_seed,
        "n_runs": spec.n_runs,
        "instances": list(spec.instances),
        "rng": RNG_NAME,
        "sigma_divisor": "n",
        "normalization": normalization,
    }


def emit_report(summary: list[dict], fmt: str, path: str,
                reports: list[RunReport] | None = None,
                metadata: dict | None = None) -> None:
    """Write the aggregated summary (and, for JSON, per-run fronts) to a file."""
    if fmt == "csv":
        text = render_csv(summary)
    elif fmt == "json":
        text = render_json(summary, reports, metadata)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    out = Path(path)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
