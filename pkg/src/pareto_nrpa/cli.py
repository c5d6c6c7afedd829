"""Command-line experiment driver."""

from __future__ import annotations

import glob as globlib
import json
from pathlib import Path

import click

from .harness import (
    ExperimentSpec,
    aggregate_reports,
    emit_report,
    experiment_metadata,
    run_experiment,
)
from .problems import (
    brute_force_front,
    generate_secondary_costs,
    oracle_evaluations,
    parse_classic_instance,
    parse_instance,
    serialize_instance,
)
from .search import SearchConfig


@click.group()
def main():
    """Multi-objective nested policy-adaptation search experiments."""


@main.command()
@click.option("--instances", required=True, help="Glob over instance files.")
@click.option("--algo", type=click.Choice(["pareto-nrpa", "nrpa", "random-playout", "oracle"]),
              default="pareto-nrpa", show_default=True)
@click.option("--level", type=int, default=4, show_default=True)
@click.option("--alpha", type=float, default=0.5, show_default=True)
@click.option("--n-policies", type=int, default=4, show_default=True)
@click.option("--iters", type=int, default=100, show_default=True)
@click.option("--budget", type=int, default=100_000, show_default=True)
@click.option("--runs", type=int, default=30, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--bias/--no-bias", default=True, show_default=True)
@click.option("--cd-weighting/--no-cd-weighting", default=True, show_default=True)
@click.option("--adapt-strategy", type=click.Choice(["all", "one"]), default="all",
              show_default=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json",
              show_default=True)
@click.option("--workers", type=int, default=1, show_default=True,
              help="Run worker pool size; output is identical for any value.")
def run(instances, algo, level, alpha, n_policies, iters, budget, runs, seed, bias,
        cd_weighting, adapt_strategy, out, fmt, workers):
    """Run seeded searches over instances and write a metrics report."""
    paths = sorted(globlib.glob(instances))
    if not paths:
        raise click.ClickException(f"no instance files match {instances!r}")
    config = SearchConfig(
        level=level, alpha=alpha, n_policies=n_policies, iterations_per_level=iters,
        eval_budget=budget, use_bias=bias, cd_weighting=cd_weighting,
        adapt_strategy=adapt_strategy, rng_seed=seed,
    )
    spec = ExperimentSpec(tuple(paths), algo, config, runs, seed, out, fmt)
    reports, normalization = run_experiment(spec, workers=workers)
    summary = aggregate_reports(reports, algo)
    emit_report(summary, fmt, out, reports, experiment_metadata(spec, normalization))
    for row in summary:
        sp = "-" if row["sp_mean"] is None else f"{row['sp_mean']:.2f} +/- {row['sp_ci']:.2f}"
        click.echo(
            f"{row['instance']} ({row['cities']} cities, {row['n_runs']} runs): "
            f"hv {row['hv_mean']:.2f} +/- {row['hv_ci']:.2f}  "
            f"os {row['os_mean']:.2f} +/- {row['os_ci']:.2f}  "
            f"sp {sp}  cv {row['cv_mean']:.2f} +/- {row['cv_ci']:.2f}"
        )
    click.echo(f"report written to {out}")


@main.command()
@click.option("--classic", type=click.Path(exists=True), required=True,
              help="Classic single-cost TSPTW file.")
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(), required=True)
def convert(classic, seed, out):
    """Derive a bi-objective instance from a classic TSPTW file."""
    instance = parse_classic_instance(Path(classic).read_text())
    instance = generate_secondary_costs(instance, seed)
    Path(out).write_text(serialize_instance(instance))
    click.echo(f"wrote {out} ({instance.n} cities, secondary costs seeded with {seed})")


@main.command()
@click.option("--instance", "instance_path", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True)
def oracle(instance_path, out):
    """Write the exact Pareto front of a small instance."""
    instance = parse_instance(Path(instance_path).read_text())
    front = brute_force_front(instance)
    payload = {
        "instance": Path(instance_path).stem,
        "cities": instance.n,
        "evaluations": oracle_evaluations(instance),
        "front": [
            {"moves": list(s.moves), "objectives": list(s.objectives),
             "violations": s.violations}
            for s in front
        ],
    }
    Path(out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    click.echo(f"oracle front of {payload['instance']}: {len(front)} points "
               f"({payload['evaluations']} tours)")


if __name__ == "__main__":
    main()
