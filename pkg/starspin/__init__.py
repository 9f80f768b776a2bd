"""
starspin - a simulator for star-topology spin registers

One central spin uniformly coupled to N-1 indistinguishable ancillas, simulated
either in the symmetric Dicke-block representation or as a dense 2^N density
matrix. The package covers state preparation, phase-encoding protocols,
Fisher-information metrology, Floquet time-crystal dynamics and kicked-top
chaos, driven from configuration files by the ``starspin`` command.
"""

__version__ = "1.0.0"

from .core import Backend, Register, RegisterSpec, build_register
from .client.cli import main as cli_main
from .client.config import ExperimentConfig, parse_config
from .client.runner import ExperimentResult, run_experiment

__all__ = [
    "Backend",
    "Register",
    "RegisterSpec",
    "build_register",
    "ExperimentConfig",
    "ExperimentResult",
    "parse_config",
    "run_experiment",
    "cli_main",
]
