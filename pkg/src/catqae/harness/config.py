"""Experiment configuration with per-experiment defaults and JSON overrides."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..dist import SCHEMES
from ..qsim import PRESETS

EXPERIMENT_IDS = ("exp1", "exp2", "exp3", "exp4a", "exp4b", "exp5", "exp6", "exp7", "binning")
DATASETS = ("synthetic", "noaa")
FAST_REPETITIONS = 10
FAST_MAX_QUBITS = 6


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment_id: str
    dataset: str = "synthetic"
    n_qubits: int = 3
    scheme: str = "equal_width"
    percentiles: list = field(default_factory=lambda: [95.0])
    k_values: list = field(default_factory=list)
    budgets: list = field(default_factory=list)
    shots: int = 1000
    repetitions: int = 30
    noise: list = field(default_factory=lambda: ["noiseless"])
    master_seed: int = 42
    n_values: list = field(default_factory=list)
    schemes: list = field(default_factory=list)
    bootstrap_resamples: int = 2000
    # data source
    synthetic_count: int = 20000
    synthetic_alpha: float = 1.5
    synthetic_scale: float = 50000.0
    data_seed: int = 42
    noaa_cache: str = "data/cache"
    offline: bool = False
    workers: int = 1
    fast: bool = False

    def validate(self) -> "ExperimentConfig":
        if self.experiment_id not in EXPERIMENT_IDS:
            raise ConfigError(f"unknown experiment {self.experiment_id!r}")
        if self.dataset not in DATASETS:
            raise ConfigError(f"dataset must be one of {DATASETS}")
        if self.scheme not in SCHEMES or any(s not in SCHEMES for s in self.schemes):
            raise ConfigError(f"scheme must be one of {SCHEMES}")
        if self.repetitions < 2:
            raise ConfigError("repetitions must be >= 2")
        if self.shots < 1:
            raise ConfigError("shots must be >= 1")
        if not self.percentiles or any(not 0 < p < 100 for p in self.percentiles):
            raise ConfigError("percentiles must lie in (0, 100)")
        if any(k < 0 for k in self.k_values):
            raise ConfigError("k values must be >= 0")
        if any(b < 1 for b in self.budgets):
            raise ConfigError("budgets must be >= 1")
        if any(not 1 <= n <= 12 for n in [self.n_qubits, *self.n_values]):
            raise ConfigError("qubit counts must lie in 1..12")
        for name in self.noise:
            if name not in PRESETS:
                raise ConfigError(f"unknown noise preset {name!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_DEFAULTS = {
    "exp1": dict(k_values=list(range(7)), shots=1000, repetitions=30),
    "exp4a": dict(dataset="noaa", k_values=list(range(7)), shots=1000, repetitions=30),
    "exp2": dict(k_values=[3], shots=8192, repetitions=20,
                 noise=["noiseless", "low", "medium", "high"]),
    "exp3": dict(percentiles=[90.0, 95.0, 97.0], shots=8192, repetitions=30, k_values=[6]),
    "exp4b": dict(dataset="noaa", percentiles=[90.0, 95.0, 97.0], shots=8192,
                  repetitions=30, k_values=[6]),
    "exp5": dict(percentiles=[90.0, 95.0, 97.0], budgets=[512, 2048, 8192], repetitions=50),
    "exp6": dict(n_values=[3, 4, 5, 6, 7, 8], budgets=[4000], repetitions=50),
    "exp7": dict(dataset="noaa", scheme="quantile", percentiles=[90.0, 95.0, 97.0],
                 budgets=[500, 2000, 8000], repetitions=50),
    "binning": dict(n_values=[3, 4, 5], schemes=["equal_width", "log_spaced"],
                    budgets=[4000], repetitions=30),
}


def default_config(experiment_id: str, fast: bool = False, **overrides) -> ExperimentConfig:
    """Defaults for one experiment, optionally in reduced-cost mode.

    Fast mode cuts repetitions to 10 and drops qubit counts above 6.
    """
    if experiment_id not in _DEFAULTS:
        raise ConfigError(f"unknown experiment {experiment_id!r}")
    values = dict(_DEFAULTS[experiment_id])
    values.update(overrides)
    cfg = ExperimentConfig(experiment_id=experiment_id, fast=fast, **values)
    if fast:
        apply_fast(cfg)
    return cfg.validate()


def apply_fast(cfg: ExperimentConfig) -> ExperimentConfig:
    cfg.fast = True
    cfg.repetitions = min(cfg.repetitions, FAST_REPETITIONS)
    cfg.n_values = [n for n in cfg.n_values if n <= FAST_MAX_QUBITS]
    cfg.n_qubits = min(cfg.n_qubits, FAST_MAX_QUBITS)
    return cfg


def load_overrides(path) -> dict:
    """Read a JSON object of ExperimentConfig field overrides."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    names = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    return data


def build_config(experiment_id: str, file_overrides: dict | None = None,
                 cli_overrides: dict | None = None, fast: bool = False) -> ExperimentConfig:
    """Defaults, then file overrides, then CLI flags (CLI wins)."""
    merged = dict(file_overrides or {})
    merged.update({k: v for k, v in (cli_overrides or {}).items() if v is not None})
    merged.pop("experiment_id", None)
    fast = bool(merged.pop("fast", False)) or fast
    try:
        return default_config(experiment_id, fast=fast, **merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
