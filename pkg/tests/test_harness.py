"""Experiment harness: statistics, configuration, reports, CLI and projection."""

from __future__ import annotations

import hashlib
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catqae.harness import cli
from catqae.harness.acceptance import check_report
from catqae.harness.config import (
    ConfigError,
    build_config,
    default_config,
    load_overrides,
)
from catqae.harness.experiments import run_experiment
from catqae.harness.projection import resource_projection
from catqae.harness.report import ExperimentReport, write_report
from catqae.harness.stats import fit_loglog_slope, rmse, speedup, summarize
from catqae.rng import derive_seed, make_rng

TINY_EXP1 = {"k_values": [0, 1, 2], "shots": 50, "repetitions": 4, "bootstrap_resamples": 200}


def power_law_errors(budgets, exponent, reps=64, c=1000.0):
    """Signed errors whose RMSE is exactly c * B**exponent at each budget."""
    signs = np.where(np.arange(reps) % 2 == 0, 1.0, -1.0)
    return [c * b**exponent * signs for b in budgets]


class TestStats:
    """RMSE, summaries and slope fits."""

    def test_rmse_trivial(self):
        assert rmse([3.0, 3.0], 3.0) == 0.0
        assert rmse([1.0, 3.0], 2.0) == 1.0
        assert rmse([5.0], 2.0) == 3.0
        with pytest.raises(ValueError):
            rmse([], 0.0)

    def test_summary(self):
        s = summarize([1.0, 3.0], 1.0)
        assert s == {"rmse": math.sqrt(2.0), "mean": 2.0, "std": 1.0, "bias": 1.0}

    def test_speedup(self):
        assert speedup(4.0, 2.0) == 2.0
        assert math.isnan(speedup(1.0, 0.0))

    @pytest.mark.parametrize("exponent", [-0.5, -1.0])
    def test_exact_power_law(self, exponent):
        budgets = [2**j for j in range(6, 16)]
        fit = fit_loglog_slope(budgets, power_law_errors(budgets, exponent))
        assert fit.slope == pytest.approx(exponent, abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0)
        assert fit.ci_low == pytest.approx(exponent) and fit.ci_high == pytest.approx(exponent)

    def test_noisy_power_law_ci(self):
        rng = np.random.default_rng(5)
        budgets = [500 * 2**j for j in range(7)]
        errs = [rng.normal(0, 100 / math.sqrt(b), 2000) for b in budgets]
        fit = fit_loglog_slope(budgets, errs, seed=1)
        assert abs(fit.slope + 0.5) < 0.02
        assert fit.ci_low < fit.slope < fit.ci_high

    def test_zero_rmse_budget_excluded(self):
        budgets = [1, 2, 4, 8]
        errs = power_law_errors(budgets, -0.5)
        errs[3] = np.zeros(64)
        with pytest.warns(UserWarning):
            fit = fit_loglog_slope(budgets, errs)
        assert fit.excluded_budgets == [8.0] and fit.n_points == 3

    def test_needs_points_and_reps(self):
        with pytest.raises(ValueError):
            fit_loglog_slope([1, 2], power_law_errors([1, 2], -0.5))
        with pytest.raises(ValueError):
            fit_loglog_slope([1, 2, 4], [np.ones(1)] * 3)

    def test_bootstrap_reproducible(self):
        budgets = [10, 100, 1000]
        errs = [np.random.default_rng(b).normal(size=20) / b for b in budgets]
        a = fit_loglog_slope(budgets, errs, resamples=300, seed=9)
        b = fit_loglog_slope(budgets, errs, resamples=300, seed=9)
        assert a == b


class TestSeeds:
    """Schedule-independent seed derivation."""

    def test_sha256_prefix(self):
        want = int.from_bytes(hashlib.sha256(b"42|exp1|quantum|0|3").digest()[:8], "big")
        assert derive_seed(42, "exp1", "quantum", 0, 3) == want

    @settings(max_examples=50)
    @given(st.integers(0, 10**6), st.integers(0, 100), st.integers(0, 100))
    def test_distinct_keys_distinct_streams(self, master, a, b):
        if a == b:
            return
        assert derive_seed(master, "x", a) != derive_seed(master, "x", b)

    def test_make_rng_reproducible(self):
        assert make_rng(1, "a").random() == make_rng(1, "a").random()


class TestConfig:
    """Defaults, fast mode and override precedence."""

    def test_defaults(self):
        c = default_config("exp1")
        assert c.k_values == list(range(7)) and c.shots == 1000 and c.repetitions == 30
        assert default_config("exp7").scheme == "quantile"
        assert default_config("exp2").noise == ["noiseless", "low", "medium", "high"]

    def test_fast_mode(self):
        c = default_config("exp6", fast=True)
        assert c.repetitions == 10 and max(c.n_values) == 6

    def test_precedence(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"shots": 77, "master_seed": 1}))
        c = build_config("exp1", load_overrides(path), {"master_seed": 9, "dataset": None})
        assert c.shots == 77 and c.master_seed == 9 and c.dataset == "synthetic"

    @pytest.mark.parametrize("bad", [
        {"repetitions": 1}, {"percentiles": [100.0]}, {"noise": ["loud"]},
        {"scheme": "odd"}, {"k_values": [-1]}, {"workers": 0},
    ])
    def test_invalid(self, bad):
        with pytest.raises(ConfigError):
            default_config("exp1", **bad)

    def test_unknown_fields_and_ids(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"colour": "red"}))
        with pytest.raises(ConfigError):
            load_overrides(path)
        with pytest.raises(ConfigError):
            default_config("exp99")


class TestExperiments:
    """Small end-to-end runs."""

    def test_convergence_rows_and_invariants(self):
        rep = run_experiment(default_config("exp1", **TINY_EXP1))
        assert [r["k"] for r in rep.rows] == [0, 1, 2]
        assert all(r["queries"] == 50 * (2 * r["k"] + 1) for r in rep.rows)
        inv = [c for c in check_report(rep) if c.criterion == "inv"]
        assert inv[0].passed

    def test_k_beyond_k_max_refused(self):
        with pytest.raises(ConfigError, match="k_max"):
            run_experiment(default_config("exp1", **{**TINY_EXP1, "k_values": [0, 1, 10]}))

    def test_worker_count_does_not_change_results(self):
        a = run_experiment(default_config("exp1", **TINY_EXP1))
        b = run_experiment(default_config("exp1", **TINY_EXP1, workers=3))
        assert a.rows == b.rows

    def test_report_files_byte_identical(self, tmp_path):
        for out in ("a", "b"):
            write_report(run_experiment(default_config("exp1", **TINY_EXP1)), tmp_path / out)
        files = sorted(p.relative_to(tmp_path / "a")
                       for p in (tmp_path / "a").rglob("*") if p.is_file())
        assert {str(f) for f in files} >= {"exp1/report.csv", "exp1/summary.json",
                                           "exp1/figures/convergence.png"}
        for f in files:
            assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()

    def test_summary_json_has_no_nan(self, tmp_path):
        rep = ExperimentReport("exp1", ["x"])
        rep.add_row(x=float("nan"))
        rep.meta["v"] = float("inf")
        root = write_report(rep, tmp_path)
        assert json.loads((root / "summary.json").read_text())["meta"]["v"] is None
        assert (root / "report.csv").read_text() == "x\nnan\n"

    def test_add_row_enforces_columns(self):
        rep = ExperimentReport("exp1", ["a", "b"])
        with pytest.raises(KeyError):
            rep.add_row(a=1)
        with pytest.raises(KeyError):
            rep.add_row(a=1, b=2, c=3)


class TestCli:
    """Exit codes and subcommands."""

    def test_run_ok(self, tmp_path, capsys):
        cfg = tmp_path / "tiny.json"
        cfg.write_text(json.dumps(TINY_EXP1))
        code = cli.main(["run", "exp1", "--config", str(cfg), "--out", str(tmp_path / "r"),
                         "--no-figures"])
        assert code == 0
        assert (tmp_path / "r" / "exp1" / "report.csv").exists()

    def test_check_failure_exit_4(self, tmp_path, capsys):
        cfg = tmp_path / "tiny.json"
        cfg.write_text(json.dumps(TINY_EXP1))
        code = cli.main(["run", "exp1", "--config", str(cfg), "--out", str(tmp_path),
                         "--no-figures", "--check"])
        assert code == 4
        assert "[FAIL] criterion 7" in capsys.readouterr().out

    def test_config_error_exit_2(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"repetitions": 0}))
        assert cli.main(["run", "exp1", "--config", str(cfg), "--out", str(tmp_path)]) == 2
        assert "config error" in capsys.readouterr().err

    def test_offline_missing_data_exit_3(self, tmp_path, capsys):
        code = cli.main(["run", "exp4a", "--offline", "--cache", str(tmp_path / "empty"),
                         "--out", str(tmp_path)])
        assert code == 3
        assert "StormEvents_details" in capsys.readouterr().err

    def test_ingest_synthetic_export(self, tmp_path, capsys):
        out = tmp_path / "syn.txt"
        assert cli.main(["ingest", "synthetic", "--count", "100", "--export", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 100

    def test_ingest_noaa_offline_cache(self, noaa_cache, capsys):
        assert cli.main(["ingest", "noaa", "--offline", "--cache", str(noaa_cache)]) == 0
        assert "noaa: 58028 records" in capsys.readouterr().out

    def test_project_resources(self, capsys):
        code = cli.main(["project-resources", "--classical-n", "10000", "--classical-cost", "60",
                         "--depth", "200000", "--gate-time", "1e-6", "--json"])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["ratio"] == pytest.approx(3e4)

    def test_project_resources_bad_input(self, capsys):
        code = cli.main(["project-resources", "--classical-n", "0", "--classical-cost", "60",
                         "--depth", "1", "--gate-time", "1"])
        assert code == 2


class TestProjection:
    """Best-case wall-clock projection."""

    def test_reference_case(self):
        rep = resource_projection(10_000, 60.0, 200_000, 1e-6)
        assert rep.quantum_queries == 100.0
        assert rep.classical_time_s == 600_000.0
        assert rep.quantum_time_s == pytest.approx(20.0)
        assert rep.ratio == pytest.approx(3e4)

    def test_render_lists_caveats(self):
        text = resource_projection(100, 1.0, 10, 1e-3).render()
        assert text.count("# - ") == 5
        assert "ratio" in text

    @settings(max_examples=100)
    @given(st.floats(1, 1e12), st.floats(1e-6, 1e3), st.floats(1, 1e9), st.floats(1e-9, 1e-3))
    def test_ratio_formula(self, n, tc, depth, tg):
        rep = resource_projection(n, tc, depth, tg)
        assert rep.ratio == pytest.approx(math.sqrt(n) * tc / (depth * tg), rel=1e-9)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            resource_projection(10, -1.0, 1, 1)
