"""Experiment orchestration, statistics, and the command-line interface."""

from .experiments import ConfigError, ExperimentConfig, read_table, run_experiment
from .stats import EmpiricalCdf, ReferenceCdf, ks_distance

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "run_experiment",
    "read_table",
    "EmpiricalCdf",
    "ReferenceCdf",
    "ks_distance",
]
