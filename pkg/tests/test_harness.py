"""Experiment driver: determinism, reports, aggregation, CLI."""

import json
import math

import pytest
from click.testing import CliRunner

from pareto_nrpa.cli import main as cli_main
from pareto_nrpa.harness import (
    CSV_COLUMNS,
    ExperimentSpec,
    aggregate_reports,
    emit_report,
    execute_run,
    experiment_metadata,
    render_csv,
    render_json,
    run_experiment,
)
from pareto_nrpa.problems import (
    parse_instance,
    serialize_instance,
    synthesize_instance,
)
from pareto_nrpa.search import SearchConfig


@pytest.fixture(scope="module")
def small_instance(tmp_path_factory):
    # seed chosen so the exact front has 3 feasible points (positive HV)
    path = tmp_path_factory.mktemp("instances") / "tiny_4.txt"
    instance = synthesize_instance(4, seed=53, window_low=50, window_high=200,
                                   depot_slack=400)
    path.write_text(serialize_instance(instance))
    return str(path)


@pytest.fixture(scope="module")
def medium_instance(tmp_path_factory):
    path = tmp_path_factory.mktemp("instances") / "mid_7.txt"
    instance = synthesize_instance(7, seed=43, window_low=30, window_high=120,
                                   depot_slack=240)
    path.write_text(serialize_instance(instance))
    return str(path)


def small_spec(path, algorithm="pareto-nrpa", runs=2, budget=200, seed=0):
    config = SearchConfig(level=2, iterations_per_level=10, eval_budget=budget,
                          n_policies=2)
    return ExperimentSpec((path,), algorithm, config, runs, seed)


def strip_wall_times(payload):
    if isinstance(payload, dict):
        return {k: strip_wall_times(v) for k, v in payload.items()
                if not k.startswith("wall_time")}
    if isinstance(payload, list):
        return [strip_wall_times(v) for v in payload]
    return payload


class TestSpecValidation:
    def test_bad_algorithm(self, small_instance):
        with pytest.raises(ValueError):
            small_spec(small_instance, algorithm="annealing")

    def test_bad_runs(self, small_instance):
        with pytest.raises(ValueError):
            small_spec(small_instance, runs=0)

    def test_zero_budget_rejected(self):
        with pytest.raises(ValueError):
            SearchConfig(eval_budget=0)

    def test_seed_derivation(self, small_instance):
        spec = small_spec(small_instance, seed=100)
        assert [spec.seed_for(i) for i in range(3)] == [100, 101, 102]


class TestRunExperiment:
    def test_budget_respected(self, medium_instance):
        spec = small_spec(medium_instance, budget=100, runs=3)
        reports, _ = run_experiment(spec)
        assert all(r.evaluations <= 100 for r in reports)
        assert all(r.metrics is not None for r in reports)

    def test_deterministic_repeat(self, small_instance):
        spec = small_spec(small_instance)
        first, norm1 = run_experiment(spec)
        second, norm2 = run_experiment(spec)
        meta = experiment_metadata(spec, norm1)
        a = render_json(aggregate_reports(first, spec.algorithm), first, meta)
        b = render_json(aggregate_reports(second, spec.algorithm), second,
                        experiment_metadata(spec, norm2))
        assert strip_wall_times(json.loads(a)) == strip_wall_times(json.loads(b))

    def test_parallel_matches_serial(self, small_instance):
        spec = small_spec(small_instance, runs=4)
        serial, norm_s = run_experiment(spec, workers=1)
        parallel, norm_p = run_experiment(spec, workers=2)
        a = render_json(aggregate_reports(serial, spec.algorithm), serial,
                        experiment_metadata(spec, norm_s))
        b = render_json(aggregate_reports(parallel, spec.algorithm), parallel,
                        experiment_metadata(spec, norm_p))
        assert strip_wall_times(json.loads(a)) == strip_wall_times(json.loads(b))

    def test_run_independence(self, small_instance):
        spec = small_spec(small_instance, runs=3)
        reports, _ = run_experiment(spec)
        redo = execute_run(small_instance, spec.algorithm, spec.config,
                           spec.seed_for(1), 1)
        original = next(r for r in reports if r.run_index == 1)
        assert [s.objectives for s in redo.front] == [s.objectives for s in original.front]
        assert redo.evaluations == original.evaluations

    def test_oracle_algorithm(self, small_instance):
        spec = small_spec(small_instance, algorithm="oracle", runs=1)
        reports, norm = run_experiment(spec)
        assert reports[0].evaluations == math.factorial(3)
        assert reports[0].metrics.normalized_hv == pytest.approx(1.0)
        assert norm[reports[0].instance]["source"] == "oracle"

    def test_random_playout_front_valid_shape(self, small_instance):
        spec = small_spec(small_instance, algorithm="random-playout", runs=1,
                          budget=50)
        reports, _ = run_experiment(spec)
        assert reports[0].evaluations == 50
        assert len(reports[0].front) >= 1

    def test_nrpa_single_objective_path(self, medium_instance):
        spec = small_spec(medium_instance, algorithm="nrpa", runs=2, budget=150)
        reports, _ = run_experiment(spec)
        for r in reports:
            assert len(r.front) == 1
            assert len(r.front[0].objectives) == 2  # reported on both objectives

    def test_unreadable_instance(self):
        spec = small_spec("/nonexistent/file.txt")
        with pytest.raises(ValueError, match="file.txt"):
            run_experiment(spec)


class TestAggregation:
    def test_identical_runs_have_zero_ci(self, small_instance):
        spec = small_spec(small_instance, runs=3, budget=50)
        reports, _ = run_experiment(spec)
        for r in reports[1:]:  # same seed base, different run seeds: force equality
            r.metrics = reports[0].metrics
        rows = aggregate_reports(reports, spec.algorithm)
        assert rows[0]["hv_ci"] == 0.0
        assert rows[0]["cv_ci"] == 0.0

    def test_order_invariance(self, small_instance):
        spec = small_spec(small_instance, runs=3)
        reports, _ = run_experiment(spec)
        rows = aggregate_reports(reports, spec.algorithm)
        rows_reversed = aggregate_reports(list(reversed(reports)), spec.algorithm)
        assert rows == rows_reversed

    def test_spacing_exclusion_counted(self, small_instance):
        spec = small_spec(small_instance, runs=2, budget=50)
        reports, _ = run_experiment(spec)
        from pareto_nrpa.metrics import MetricBundle

        reports[0].metrics = MetricBundle(0.0, 0.0, 0.0, None, 3.0)
        reports[1].metrics = MetricBundle(0.0, 0.0, 0.0, 1.5, 3.0)
        rows = aggregate_reports(reports, spec.algorithm)
        assert rows[0]["excluded_spacing_runs"] == 1
        assert rows[0]["sp_mean"] == pytest.approx(1.5)
        reports[1].metrics = MetricBundle(0.0, 0.0, 0.0, None, 3.0)
        rows = aggregate_reports(reports, spec.algorithm)
        assert rows[0]["sp_mean"] is None
        assert rows[0]["excluded_spacing_runs"] == 2


class TestEmit:
    def test_csv_shape(self, small_instance, medium_instance, tmp_path):
        config = SearchConfig(level=1, iterations_per_level=5, eval_budget=30,
                              n_policies=2)
        spec = ExperimentSpec((small_instance, medium_instance), "pareto-nrpa",
                              config, 1, 0)
        reports, _ = run_experiment(spec)
        rows = aggregate_reports(reports, spec.algorithm)
        out = tmp_path / "report.csv"
        emit_report(rows, "csv", str(out))
        lines = out.read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 3

    def test_csv_renders_undefined_spacing_as_empty(self):
        row = {c: 1 for c in CSV_COLUMNS}
        row.update(instance="x", algorithm="a", sp_mean=None, sp_ci=None)
        data_line = render_csv([row]).splitlines()[1]
        assert data_line == "x,1,a,1,1,1,1,,,1,1,1,1"

    def test_json_round_trip(self, small_instance, tmp_path):
        spec = small_spec(small_instance, runs=2, budget=40)
        reports, norm = run_experiment(spec)
        rows = aggregate_reports(reports, spec.algorithm)
        meta = experiment_metadata(spec, norm)
        out = tmp_path / "report.json"
        emit_report(rows, "json", str(out), reports, meta)
        loaded = json.loads(out.read_text())
        assert loaded == json.loads(render_json(rows, reports, meta))
        assert loaded["metadata"]["algorithm"] == "pareto-nrpa"
        assert len(loaded["runs"]) == 2
        assert loaded["runs"][0]["front"]

    def test_empty_summary_rejected(self):
        with pytest.raises(ValueError):
            render_csv([])


class TestCli:
    def test_run_command(self, small_instance, tmp_path):
        out = tmp_path / "cli.json"
        runner = CliRunner()
        result = runner.invoke(cli_main, [
            "run", "--instances", small_instance, "--algo", "pareto-nrpa",
            "--level", "2", "--alpha", "0.5", "--n-policies", "2", "--iters", "5",
            "--budget", "60", "--runs", "2", "--seed", "3", "--bias",
            "--cd-weighting", "--adapt-strategy", "all",
            "--out", str(out), "--format", "json",
        ])
        assert result.exit_code == 0, result.output
        payload = json.loads(out.read_text())
        assert payload["metadata"]["config"]["eval_budget"] == 60
        assert {r["seed"] for r in payload["runs"]} == {3, 4}

    def test_run_csv_output(self, small_instance, tmp_path):
        out = tmp_path / "cli.csv"
        runner = CliRunner()
        result = runner.invoke(cli_main, [
            "run", "--instances", small_instance, "--budget", "30", "--level", "1",
            "--iters", "5", "--runs", "1", "--out", str(out), "--format", "csv",
        ])
        assert result.exit_code == 0, result.output
        assert out.read_text().splitlines()[0] == ",".join(CSV_COLUMNS)

    def test_no_match_fails(self, tmp_path):
        runner = CliRunner()
        result = runner.invoke(cli_main, [
            "run", "--instances", str(tmp_path / "none-*.txt"),
            "--out", str(tmp_path / "x.json"),
        ])
        assert result.exit_code != 0

    def test_convert_and_oracle(self, tmp_path):
        classic = tmp_path / "classic.txt"
        classic.write_text("3\n0 3 7\n9 0 4\n5 8 0\n0 1000\n0 1000\n0 1000\n")
        converted = tmp_path / "converted.txt"
        runner = CliRunner()
        result = runner.invoke(cli_main, [
            "convert", "--classic", str(classic), "--seed", "5",
            "--out", str(converted),
        ])
        assert result.exit_code == 0, result.output
        instance = parse_instance(converted.read_text())
        assert instance.n == 3
        assert any(v > 0 for row in instance.cost2 for v in row)

        again = tmp_path / "converted2.txt"
        runner.invoke(cli_main, ["convert", "--classic", str(classic), "--seed", "5",
                                 "--out", str(again)])
        assert converted.read_text() == again.read_text()

        front_file = tmp_path / "front.json"
        result = runner.invoke(cli_main, [
            "oracle", "--instance", str(converted), "--out", str(front_file),
        ])
        assert result.exit_code == 0, result.output
        payload = json.loads(front_file.read_text())
        assert payload["evaluations"] == 2
        assert payload["front"]
