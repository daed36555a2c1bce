"""Experiment harness and command-line interface."""

from .config import ExperimentConfig, eps_schedule
from .experiments import (Table, run_balance_experiment, run_consistency_experiment,
                          run_experiment, run_perimeter_experiment, run_qstar_experiment,
                          run_resolution_experiment, validate_rate)

__all__ = ["ExperimentConfig", "Table", "eps_schedule", "validate_rate", "run_experiment",
           "run_balance_experiment", "run_perimeter_experiment", "run_qstar_experiment",
           "run_consistency_experiment", "run_resolution_experiment"]
