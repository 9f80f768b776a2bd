"""
starspin utilities

Terminal styling, physical constants and presets, the exception hierarchy and
seeded random streams.
"""

from .style import (
    STARSPIN_COLORS,
    STARSPIN_THEME,
    StarStyle,
    console,
    print_error,
    print_header,
    print_info,
    print_rule,
    print_success,
    print_version,
    print_warning,
)
from .constants import BACKENDS, DENSE_LIMIT, EXPERIMENTS, GYROMAGNETIC_RATIOS, MOLECULE_PRESETS
from .rng import CHUNK_SIZE, chunk_bounds, stream

__all__ = [
    "console",
    "StarStyle",
    "print_header",
    "print_success",
    "print_warning",
    "print_error",
    "print_info",
    "print_rule",
    "print_version",
    "STARSPIN_COLORS",
    "STARSPIN_THEME",
    "BACKENDS",
    "DENSE_LIMIT",
    "EXPERIMENTS",
    "GYROMAGNETIC_RATIOS",
    "MOLECULE_PRESETS",
    "CHUNK_SIZE",
    "chunk_bounds",
    "stream",
]
