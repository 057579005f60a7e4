"""Classical Monte Carlo baselines."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import qmc

from catqae.baselines import (
    ESTIMATORS,
    binned_mc,
    open_uniform,
    qmc_sobol,
    resample_mc,
    sobol_sequence,
    star_discrepancy,
    tilt_shift,
)
from catqae.dist import (
    BinnedDistribution,
    LognormalParams,
    analytic_excess,
    discretize,
    exact_on_bins,
)

PARAMS = LognormalParams(11.484554263925352, 0.6670036723564001)
M95 = 362700.1926048609
TRUTH = analytic_excess(PARAMS, M95)


def rmse_over_seeds(fn, budget, reps=40):
    est = np.array([fn(PARAMS, M95, budget, seed).estimate for seed in range(reps)])
    return float(np.sqrt(np.mean((est - TRUTH) ** 2))), float(est.mean())


class TestSobol:
    """First-dimension Sobol points and discrepancy."""

    def test_matches_scipy_unscrambled(self):
        ref = qmc.Sobol(d=1, scramble=False).random(2048)[1:1025, 0]
        assert np.array_equal(sobol_sequence(1024, scramble=False), ref)

    def test_discrepancy_near_one_over_n(self):
        for n in (64, 1024):
            assert star_discrepancy(sobol_sequence(n, scramble=False)) <= 2.0 / n

    def test_scrambled_points_differ_by_seed_but_stay_stratified(self):
        a, b = sobol_sequence(256, 1), sobol_sequence(256, 2)
        assert not np.array_equal(a, b)
        assert star_discrepancy(a) < 4.0 / 256

    def test_discrepancy_of_grid(self):
        pts = (np.arange(10) + 0.5) / 10
        assert star_discrepancy(pts) == pytest.approx(0.05)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            sobol_sequence(0)


class TestEstimators:
    """Unbiasedness, reproducibility and budgets."""

    @pytest.mark.parametrize("name", sorted(ESTIMATORS))
    def test_budget_and_reproducibility(self, name):
        fn = ESTIMATORS[name]
        a, b = fn(PARAMS, M95, 512, 99), fn(PARAMS, M95, 512, 99)
        assert a.estimate == b.estimate
        assert a.queries == 512
        with pytest.raises(ValueError):
            fn(PARAMS, M95, 0, 1)

    @pytest.mark.parametrize("name", sorted(ESTIMATORS))
    def test_unbiased(self, name):
        fn = ESTIMATORS[name]
        est = np.array([fn(PARAMS, M95, 4096, s).estimate for s in range(60)])
        se = est.std(ddof=1) / np.sqrt(est.size)
        assert abs(est.mean() - TRUTH) < 4 * se + 1e-9

    def test_variance_reduction_ordering(self):
        naive, _ = rmse_over_seeds(ESTIMATORS["naive_mc"], 2048)
        ct, _ = rmse_over_seeds(ESTIMATORS["conditional_tail_mc"], 2048)
        qmc_r, _ = rmse_over_seeds(qmc_sobol, 2048)
        assert ct < naive and qmc_r < naive

    def test_tilt_shift(self):
        assert tilt_shift(PARAMS, M95) > 0
        assert tilt_shift(PARAMS, 1.0) == 0.0

    def test_binned_mc_targets_bins(self):
        b = discretize(PARAMS, "equal_width", 3)
        est = np.mean([binned_mc(b, M95, 4000, s).estimate for s in range(200)])
        assert est == pytest.approx(exact_on_bins(b, M95), rel=0.05)

    def test_resample_mc(self):
        data = np.array([1.0, 2.0, 3.0, 10.0])
        est = np.mean([resample_mc(data, 2.5, 1000, s).estimate for s in range(50)])
        assert est == pytest.approx(0.25 * 0.5 + 0.25 * 7.5, rel=0.05)

    @settings(max_examples=50)
    @given(st.integers(0, 2**63 - 1), st.integers(1, 500))
    def test_open_uniform_strictly_inside(self, seed, n):
        u = open_uniform(np.random.default_rng(seed), n)
        assert np.all((u > 0) & (u < 1))


class TestWorkedExamples:
    """Limits and identities of the individual estimators."""

    def test_first_four_sobol_points(self):
        assert list(sobol_sequence(4, scramble=False)) == [0.5, 0.75, 0.25, 0.375]

    def test_scrambled_points_distinct_in_unit_interval(self):
        u = sobol_sequence(1024, 5)
        assert np.all((u >= 0) & (u < 1)) and np.unique(u).size == u.size

    @pytest.mark.parametrize("name", sorted(ESTIMATORS))
    def test_point_mass_limit(self, name):
        p = LognormalParams(2.0, 1e-12)
        m = 5.0
        est = ESTIMATORS[name](p, m, 64, 3).estimate
        assert est == pytest.approx(math.exp(2.0) - m, rel=1e-9)

    def test_naive_zero_threshold_is_mean(self):
        est = np.mean([ESTIMATORS["naive_mc"](PARAMS, 0.0, 8192, s).estimate
                       for s in range(20)])
        assert est == pytest.approx(PARAMS.mean, rel=0.01)

    def test_tail_with_no_mass_is_zero(self):
        assert ESTIMATORS["conditional_tail_mc"](PARAMS, 1e300, 100, 0).estimate == 0.0

    def test_untilted_importance_sampling_is_naive(self):
        m = 1000.0
        assert tilt_shift(PARAMS, m) == 0.0
        a = ESTIMATORS["importance_sampling_mc"](PARAMS, m, 1000, 8).estimate
        b = ESTIMATORS["naive_mc"](PARAMS, m, 1000, 8).estimate
        assert a == pytest.approx(b, rel=1e-12)

    def test_importance_weights_average_to_one(self):
        w = np.array([ESTIMATORS["importance_sampling_mc"](PARAMS, M95, 4096, s)
                      .extra["mean_weight"] for s in range(50)])
        assert abs(w.mean() - 1.0) < 3 * w.std(ddof=1) / math.sqrt(w.size)

    def test_single_bin_is_deterministic(self):
        b = BinnedDistribution(0, np.array([1.0]), np.array([10.0]), np.array([0.0, 20.0]),
                               "point")
        assert {binned_mc(b, 4.0, 100, s).estimate for s in range(5)} == {6.0}
