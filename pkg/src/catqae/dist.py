"""Lognormal severity model, closed-form tail quantities and discretisation.

The normal CDF is built on :func:`math.erfc`; the inverse CDF uses Acklam's
rational approximation polished with one Halley step, which brings it to
double precision over (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

SCHEMES = ("equal_width", "quantile", "log_spaced")

# Percentile ranges (as probabilities) spanned by the parametric schemes.
EQUAL_WIDTH_RANGE = (0.001, 0.999)
LOG_SPACED_RANGE = (0.001, 0.9999)


class DomainError(ValueError):
    """Input outside the domain of a distribution routine."""


@dataclass(frozen=True)
class LognormalParams:
    mu: float
    sigma: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    @property
    def mean(self) -> float:
        return math.exp(self.mu + 0.5 * self.sigma**2)

    @property
    def median(self) -> float:
        return math.exp(self.mu)


@dataclass
class BinnedDistribution:
    n_qubits: int
    probs: np.ndarray
    midpoints: np.ndarray
    edges: np.ndarray
    scheme: str
    source: object = field(default=None, repr=False)

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)
        self.midpoints = np.asarray(self.midpoints, dtype=float)
        self.edges = np.asarray(self.edges, dtype=float)
        nb = 2**self.n_qubits
        if self.probs.shape != (nb,) or self.midpoints.shape != (nb,):
            raise DomainError(f"expected {nb} bins")
        if self.edges.shape != (nb + 1,):
            raise DomainError(f"expected {nb + 1} edges")
        if np.any(self.probs < 0):
            raise DomainError("negative bin probability")
        if abs(self.probs.sum() - 1.0) > 1e-12:
            raise DomainError(f"probabilities sum to {self.probs.sum()!r}")
        if np.any(np.diff(self.edges) <= 0):
            raise DomainError("bin edges must be strictly increasing")
        if np.any(np.diff(self.midpoints) <= 0):
            raise DomainError("midpoints must be strictly increasing")
        if np.any(self.midpoints <= self.edges[:-1]) or np.any(
            self.midpoints > self.edges[1:]
        ):
            raise DomainError("midpoint outside its bin")

    @property
    def num_bins(self) -> int:
        return self.probs.size

    def payoff(self, threshold: float) -> np.ndarray:
        return np.maximum(0.0, self.midpoints - threshold)


# -- normal distribution ----------------------------------------------------

_erfc = np.vectorize(math.erfc, otypes=[float])

_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def norm_cdf(x):
    """Standard normal CDF (scalar or array)."""
    out = 0.5 * _erfc(-np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(out) if np.ndim(out) == 0 else out


def norm_sf(x):
    out = 0.5 * _erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(out) if np.ndim(out) == 0 else out


def norm_pdf(x):
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    return float(out) if np.ndim(out) == 0 else out


def _acklam(p: np.ndarray) -> np.ndarray:
    x = np.empty_like(p)
    lo = p < _P_LOW
    hi = p > 1 - _P_LOW
    mid = ~(lo | hi)

    q = np.sqrt(-2 * np.log(p[lo]))
    x[lo] = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
        (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1
    )
    q = np.sqrt(-2 * np.log1p(-p[hi]))
    x[hi] = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
        (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1
    )
    q = p[mid] - 0.5
    r = q * q
    x[mid] = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
        ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1
    )
    return x


def norm_ppf(p):
    """Inverse standard normal CDF on (0, 1)."""
    arr = np.asarray(p, dtype=float)
    if np.any((arr <= 0) | (arr >= 1)) or np.any(np.isnan(arr)):
        raise DomainError("norm_ppf needs probabilities strictly inside (0, 1)")
    flat = arr.reshape(-1)
    x = _acklam(flat)
    # One Halley step; the residual is taken on whichever tail is smaller.
    upper = flat > 0.5
    resid = np.where(upper, (1 - flat) - norm_sf(x), norm_cdf(x) - flat)
    u = resid * math.sqrt(2 * math.pi) * np.exp(0.5 * x * x)
    x = x - u / (1 + 0.5 * x * u)
    x = x.reshape(arr.shape)
    return float(x) if x.ndim == 0 else x


def norm_isf(q):
    """Inverse survival function: z with P(Z > z) = q."""
    return -norm_ppf(q)


# -- lognormal ---------------------------------------------------------------

def fit_lognormal(samples) -> LognormalParams:
    """Maximum-likelihood lognormal fit with location fixed at zero."""
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise DomainError("need at least two samples")
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise DomainError("lognormal fit needs strictly positive finite samples")
    logs = np.log(x)
    sigma = float(logs.std())  # population (MLE) standard deviation
    if sigma <= 0:
        raise DomainError("degenerate sample: all values equal, sigma = 0")
    return LognormalParams(float(logs.mean()), sigma)


def _check_positive(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("lognormal functions need x > 0")
    return arr


def lognormal_cdf(params: LognormalParams, x):
    arr = _check_positive(x)
    return norm_cdf((np.log(arr) - params.mu) / params.sigma)


def lognormal_sf(params: LognormalParams, x):
    arr = _check_positive(x)
    return norm_sf((np.log(arr) - params.mu) / params.sigma)


def lognormal_pdf(params: LognormalParams, x):
    arr = _check_positive(x)
    z = (np.log(arr) - params.mu) / params.sigma
    out = norm_pdf(z) / (arr * params.sigma)
    return float(out) if np.ndim(out) == 0 else out


def lognormal_inv_cdf(params: LognormalParams, u):
    z = norm_ppf(u)
    out = np.exp(params.mu + params.sigma * np.asarray(z))
    return float(out) if np.ndim(out) == 0 else out


def analytic_excess(params: LognormalParams, threshold: float) -> float:
    """E[max(0, X - M)] for X ~ Lognormal(mu, sigma)."""
    if threshold <= 0:
        return params.mean - threshold
    log_m = math.log(threshold)
    d1 = (params.mu + params.sigma**2 - log_m) / params.sigma
    d2 = (log_m - params.mu) / params.sigma
    return params.mean * norm_cdf(d1) - threshold * norm_sf(d2)


def percentile_threshold(source, pct: float) -> float:
    """Threshold at ``pct`` percent of a sample (linear interpolation) or a fit."""
    if not 0 < pct < 100:
        raise DomainError(f"percentile must lie in (0, 100), got {pct}")
    if isinstance(source, LognormalParams):
        return lognormal_inv_cdf(source, pct / 100.0)
    x = np.asarray(source, dtype=float)
    if x.size == 0:
        raise DomainError("cannot take a percentile of an empty sample")
    return float(np.percentile(x, pct))


# -- discretisation ----------------------------------------------------------

Source = Union[LognormalParams, np.ndarray]


def _masses(params: LognormalParams, edges: np.ndarray) -> np.ndarray:
    cdf = lognormal_cdf(params, edges)
    p = np.clip(np.diff(cdf), 0.0, None)
    return p / p.sum()


def _equal_width(params, n):
    lo, hi = lognormal_inv_cdf(params, np.array(EQUAL_WIDTH_RANGE))
    edges = np.linspace(lo, hi, 2**n + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    return _masses(params, edges), mids, edges


def _log_spaced(params, n):
    lo, hi = lognormal_inv_cdf(params, np.array(LOG_SPACED_RANGE))
    edges = np.geomspace(lo, hi, 2**n + 1)
    mids = np.sqrt(edges[:-1] * edges[1:])
    return _masses(params, edges), mids, edges


def _parametric_quantile(params, n):
    a, b = EQUAL_WIDTH_RANGE
    edges = lognormal_inv_cdf(params, a + (b - a) * np.linspace(0, 1, 2**n + 1))
    mids = 0.5 * (edges[:-1] + edges[1:])
    return _masses(params, edges), mids, edges


def _empirical_quantile(samples: np.ndarray, n: int):
    """Equal-count bins over the sorted data (top bin reaches the maximum).

    Bins are contiguous rank blocks, so tied values never produce empty
    bins.  Each midpoint is the mean of the samples it holds.  Edges are 0
    (losses are positive) followed by the block maxima, so the last edge is
    the data maximum.  A value tied across a block boundary is split between
    the two blocks.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    nb = 2**n
    if x.size < nb:
        raise DomainError(f"need at least {nb} samples for {nb} quantile bins")
    blocks = np.array_split(x, nb)
    counts = np.array([b.size for b in blocks], dtype=float)
    mids = np.array([b.mean() for b in blocks])
    edges = np.array([0.0] + [b[-1] for b in blocks])
    if np.any(np.diff(edges) <= 0):
        raise DomainError(
            f"a tied value fills a whole bin; too few distinct values for {nb} quantile bins"
        )
    return counts / x.size, mids, edges


def discretize(source: Source, scheme: str, n_qubits: int) -> BinnedDistribution:
    """Discretise a fitted lognormal or an empirical sample into 2**n bins.

    ``equal_width`` and ``log_spaced`` always work from a lognormal; a raw
    sample is fitted first.  ``quantile`` on a raw sample bins the data
    directly with no parametric model.
    """
    if scheme not in SCHEMES:
        raise DomainError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if not (isinstance(n_qubits, (int, np.integer)) and 1 <= n_qubits <= 12):
        raise DomainError(f"n_qubits must be an integer in 1..12, got {n_qubits}")

    if isinstance(source, LognormalParams):
        params, samples = source, None
    else:
        samples = np.asarray(source, dtype=float)
        params = None if scheme == "quantile" else fit_lognormal(samples)

    if scheme == "quantile" and samples is not None:
        probs, mids, edges = _empirical_quantile(samples, n_qubits)
        label = f"empirical sample (n={samples.size})"
        return BinnedDistribution(n_qubits, probs, mids, edges, scheme, label)

    builder = {
        "equal_width": _equal_width,
        "log_spaced": _log_spaced,
        "quantile": _parametric_quantile,
    }[scheme]
    probs, mids, edges = builder(params, n_qubits)
    return BinnedDistribution(n_qubits, probs, mids, edges, scheme, params)


def exact_on_bins(binned: BinnedDistribution, threshold: float) -> float:
    """Deterministic sum of p_i * max(0, x_i - M) over the bins."""
    return float(np.dot(binned.probs, binned.payoff(threshold)))


def discretisation_error(binned: BinnedDistribution, params: LognormalParams,
                         threshold: float) -> float:
    return abs(exact_on_bins(binned, threshold) - analytic_excess(params, threshold))
