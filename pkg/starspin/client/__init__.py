"""
Client module for the starspin command line: configuration files, the
experiment runner and SVG plots.
"""

from .cli import main, run_cli
from .config import ExperimentConfig, parse_config, render_config
from .plotting import emit_plot
from .runner import ExperimentResult, compute_experiment, read_result, run_experiment, write_result

__all__ = [
    "main",
    "run_cli",
    "ExperimentConfig",
    "parse_config",
    "render_config",
    "ExperimentResult",
    "compute_experiment",
    "run_experiment",
    "read_result",
    "write_result",
    "emit_plot",
]
