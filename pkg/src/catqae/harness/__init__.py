"""Experiment orchestration, reports and the command-line interface."""

from .acceptance import Check, check_report
from .config import ConfigError, ExperimentConfig, build_config, default_config
from .experiments import (
    RUNNERS,
    load_dataset,
    run_binning_compare,
    run_budget_match,
    run_convergence,
    run_empirical,
    run_experiment,
    run_noise,
    run_qubit_sweep,
    run_tail_sweep,
)
from .projection import ProjectionReport, resource_projection
from .report import ExperimentReport, Figure, write_report
from .stats import SlopeFit, fit_loglog_slope, rmse, summarize

__all__ = [
    "Check", "ConfigError", "ExperimentConfig", "ExperimentReport", "Figure",
    "ProjectionReport", "RUNNERS", "SlopeFit", "build_config", "check_report",
    "default_config", "fit_loglog_slope", "load_dataset", "resource_projection", "rmse",
    "run_binning_compare", "run_budget_match", "run_convergence", "run_empirical",
    "run_experiment", "run_noise", "run_qubit_sweep", "run_tail_sweep", "summarize",
    "write_report",
]
