"""Classical excess-loss estimators at an exact sample budget.

Every estimator draws exactly ``budget`` samples and reports that count as
its query cost, so results can be compared against the quantum estimator at
matched budgets.  ``seed`` is anything ``numpy.random.default_rng`` accepts.
"""

from __future__ import annotations

import math

import numpy as np

from .dist import (
    BinnedDistribution,
    LognormalParams,
    lognormal_inv_cdf,
    lognormal_sf,
    norm_isf,
    norm_ppf,
)
from .result import EstimatorResult

_BITS = 32


def _check_budget(budget: int) -> None:
    if budget < 1:
        raise ValueError("budget must be >= 1")


def open_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniforms on the open interval (0, 1) (53-bit grid, cell centres)."""
    return (rng.integers(0, 1 << 53, size=size) + 0.5) / float(1 << 53)


def _result(name, estimate, budget, seed, rep_index, **extra):
    return EstimatorResult(float(estimate), int(budget), name,
                           seed if isinstance(seed, int) else 0, rep_index, extra)


def naive_mc(params: LognormalParams, threshold: float, budget: int, seed,
             rep_index: int = 0) -> EstimatorResult:
    _check_budget(budget)
    rng = np.random.default_rng(seed)
    x = lognormal_inv_cdf(params, open_uniform(rng, budget))
    est = np.mean(np.maximum(0.0, x - threshold))
    return _result("naive_mc", est, budget, seed, rep_index)


def conditional_tail_mc(params: LognormalParams, threshold: float, budget: int,
                        seed, rep_index: int = 0) -> EstimatorResult:
    """Sample X | X > M through the truncated inverse CDF and rescale by P(X > M)."""
    _check_budget(budget)
    tail = lognormal_sf(params, threshold) if threshold > 0 else 1.0
    if tail <= 0.0:
        return _result("conditional_tail_mc", 0.0, budget, seed, rep_index, tail=0.0)
    rng = np.random.default_rng(seed)
    # u ~ U(F(M), 1) expressed through the survival probability for accuracy
    q = tail * open_uniform(rng, budget)
    x = np.exp(params.mu + params.sigma * norm_isf(q))
    est = tail * np.mean(np.maximum(0.0, x - threshold))
    return _result("conditional_tail_mc", est, budget, seed, rep_index, tail=tail)


def tilt_shift(params: LognormalParams, threshold: float) -> float:
    """Log-mean shift putting the proposal mean near the threshold."""
    if threshold <= 0:
        return 0.0
    return max(0.0, math.log(threshold) - params.mu - 0.5 * params.sigma**2)


def importance_sampling_mc(params: LognormalParams, threshold: float, budget: int,
                           seed, rep_index: int = 0) -> EstimatorResult:
    _check_budget(budget)
    delta = tilt_shift(params, threshold)
    rng = np.random.default_rng(seed)
    z = norm_ppf(open_uniform(rng, budget))
    log_x = params.mu + delta + params.sigma * z
    x = np.exp(log_x)
    # log f_target(x) - log f_proposal(x); the 1/x sigma factors cancel
    s2 = params.sigma**2
    log_w = (-(log_x - params.mu) ** 2 + (log_x - params.mu - delta) ** 2) / (2 * s2)
    w = np.exp(log_w)
    est = np.mean(w * np.maximum(0.0, x - threshold))
    return _result("importance_sampling_mc", est, budget, seed, rep_index,
                   delta=delta, mean_weight=float(w.mean()))


def binned_mc(binned: BinnedDistribution, threshold: float, budget: int, seed,
              rep_index: int = 0) -> EstimatorResult:
    """Categorical draws of bin indices; only the per-bin counts matter."""
    _check_budget(budget)
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(budget, binned.probs)
    est = np.dot(counts, binned.payoff(threshold)) / budget
    return _result("binned_mc", est, budget, seed, rep_index)


def resample_mc(samples, threshold: float, budget: int, seed,
                rep_index: int = 0) -> EstimatorResult:
    """Bootstrap draws (with replacement) from a raw loss array."""
    _check_budget(budget)
    data = np.asarray(samples, dtype=float)
    rng = np.random.default_rng(seed)
    draws = data[rng.integers(0, data.size, size=budget)]
    est = np.mean(np.maximum(0.0, draws - threshold))
    return _result("resample_mc", est, budget, seed, rep_index)


def _bit_reverse(v: np.ndarray, bits: int = _BITS) -> np.ndarray:
    out = np.zeros_like(v)
    for b in range(bits):
        out |= ((v >> b) & 1) << (bits - 1 - b)
    return out


def sobol_codes(count: int, seed=None, scramble: bool = True) -> np.ndarray:
    """32-bit integer codes of the first Sobol dimension, index 1..count.

    The first dimension has direction numbers 2^-j, so point i is the
    radical inverse of its Gray code.  Scrambling XORs every code with one
    random 32-bit digital shift drawn from ``seed``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    idx = np.arange(1, count + 1, dtype=np.uint64)
    codes = _bit_reverse(idx ^ (idx >> np.uint64(1)))
    if scramble:
        rng = np.random.default_rng(seed)
        shift = np.uint64(rng.integers(0, 1 << _BITS))
        codes = codes ^ shift
    return codes


def sobol_sequence(count: int, seed=None, scramble: bool = True) -> np.ndarray:
    return sobol_codes(count, seed, scramble).astype(float) / float(1 << _BITS)


def qmc_sobol(params: LognormalParams, threshold: float, budget: int, seed,
              rep_index: int = 0) -> EstimatorResult:
    _check_budget(budget)
    u = sobol_sequence(budget, seed, scramble=True)
    u[u == 0.0] = 0.5 / float(1 << _BITS)  # a shifted point can land on 0
    x = lognormal_inv_cdf(params, u)
    est = np.mean(np.maximum(0.0, x - threshold))
    return _result("qmc_sobol", est, budget, seed, rep_index)


def star_discrepancy(points) -> float:
    """Exact one-dimensional star discrepancy of a point set in [0, 1)."""
    x = np.sort(np.asarray(points, dtype=float))
    n = x.size
    i = np.arange(1, n + 1)
    return float(0.5 / n + np.max(np.abs(x - (2 * i - 1) / (2 * n))))


ESTIMATORS = {
    "naive_mc": naive_mc,
    "conditional_tail_mc": conditional_tail_mc,
    "importance_sampling_mc": importance_sampling_mc,
    "qmc_sobol": qmc_sobol,
}
