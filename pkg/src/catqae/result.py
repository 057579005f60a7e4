from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class EstimatorResult:
    """One repetition of one estimator: dollars out, queries spent."""

    estimate: float
    queries: int
    estimator: str
    seed: int = 0
    rep_index: int = 0
    extra: dict = field(default_factory=dict)
