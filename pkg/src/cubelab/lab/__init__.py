"""Experiment layer: configs, limit oracles, sweeps, CSV output and the CLI."""
from .config import ConfigError, ExperimentConfig, load, loads
from .oracles import oracle_for, periodic_limit_oracle, product_of_integrals_oracle, rotation_limit_oracle
from .sweep import ConvergenceTrace, convergence_sweep
from .trials import run_trials

__all__ = [
    "ConfigError",
    "ConvergenceTrace",
    "ExperimentConfig",
    "convergence_sweep",
    "load",
    "loads",
    "oracle_for",
    "periodic_limit_oracle",
    "product_of_integrals_oracle",
    "rotation_limit_oracle",
    "run_trials",
]
