"""Shared fixtures for the starspin test suite."""

import sys
from pathlib import Path

import pytest

# Add the project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from starspin.core import RegisterSpec, build_register  # noqa: E402


@pytest.fixture
def tmp_register():
    """Trimethylphosphite: 31P centre with nine 1H ancillas."""
    return build_register(RegisterSpec.from_preset("tmp"))


@pytest.fixture
def small_register():
    """13C-acetonitrile, N = 4; small enough for the dense oracle."""
    return build_register(RegisterSpec.from_preset("acetonitrile"))


@pytest.fixture
def five_spin_register():
    return build_register(RegisterSpec.from_preset("tmp", n_total=5))

