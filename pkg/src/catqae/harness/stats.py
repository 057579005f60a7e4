"""Error summaries and bootstrap log-log slope fits."""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np


def rmse(estimates, truth: float) -> float:
    est = np.asarray(estimates, dtype=float)
    if est.size == 0:
        raise ValueError("rmse of an empty vector")
    return float(np.sqrt(np.mean((est - truth) ** 2)))


def summarize(estimates, truth: float) -> dict[str, float]:
    """RMSE, mean, population std and bias of a batch of estimates."""
    est = np.asarray(estimates, dtype=float)
    return {
        "rmse": rmse(est, truth),
        "mean": float(est.mean()),
        "std": float(est.std()),
        "bias": float(est.mean() - truth),
    }


def speedup(classical_rmse: float, quantum_rmse: float) -> float:
    """Ratio classical/quantum; NaN when undefined (both exact or quantum exact)."""
    if quantum_rmse == 0.0:
        return math.nan
    return classical_rmse / quantum_rmse


@dataclass
class SlopeFit:
    estimator: str
    slope: float
    intercept: float
    ci_low: float
    ci_high: float
    r_squared: float
    n_points: int
    excluded_budgets: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def ci_contains(self, value: float) -> bool:
        return self.ci_low <= value <= self.ci_high

    def ci_intersects(self, lo: float, hi: float) -> bool:
        return self.ci_low <= hi and lo <= self.ci_high


def _ols(x: np.ndarray, y: np.ndarray):
    """Row-wise OLS slope and intercept; y has shape (..., npoints)."""
    xc = x - x.mean()
    slope = (y * xc).sum(axis=-1) / (xc**2).sum()
    intercept = y.mean(axis=-1) - slope * x.mean()
    return slope, intercept


def fit_loglog_slope(budgets, per_budget_errors, resamples: int = 2000, seed=0,
                     estimator: str = "") -> SlopeFit:
    """OLS of log RMSE on log budget with a percentile bootstrap CI.

    ``per_budget_errors[j]`` holds the signed errors (estimate - truth) of
    every repetition at ``budgets[j]``.  Each bootstrap resample redraws the
    repetitions of every budget with replacement and refits; the CI is the
    2.5/97.5 percentile range of the resampled slopes.  Budgets whose RMSE
    is exactly zero are dropped with a warning.
    """
    budgets = np.asarray(budgets, dtype=float)
    errors = [np.asarray(e, dtype=float) for e in per_budget_errors]
    if len(errors) != budgets.size:
        raise ValueError("one error vector per budget is required")
    keep, excluded = [], []
    for j, e in enumerate(errors):
        if e.size < 2:
            raise ValueError("at least 2 repetitions per budget are required")
        if not np.any(e):
            excluded.append(float(budgets[j]))
            warnings.warn(f"budget {budgets[j]:g} has zero RMSE; excluded from slope fit")
        else:
            keep.append(j)
    if len(keep) < 3:
        raise ValueError("slope fit needs at least 3 budgets with nonzero RMSE")

    x = np.log(budgets[keep])
    y = np.log([rmse(errors[j], 0.0) for j in keep])
    slope, intercept = _ols(x, y)
    resid = y - (intercept + slope * x)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0

    rng = np.random.default_rng(seed)
    boot_y = np.empty((resamples, len(keep)))
    for col, j in enumerate(keep):
        e = errors[j]
        draws = e[rng.integers(0, e.size, size=(resamples, e.size))]
        boot_y[:, col] = np.sqrt(np.mean(draws**2, axis=1))
    valid = np.all(boot_y > 0, axis=1)
    boot_slopes, _ = _ols(x, np.log(boot_y[valid]))
    lo, hi = np.percentile(boot_slopes, [2.5, 97.5])
    return SlopeFit(estimator, float(slope), float(intercept), float(lo), float(hi),
                    r2, len(keep), excluded)
