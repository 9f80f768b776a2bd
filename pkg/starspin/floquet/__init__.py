"""
starspin floquet

Kicked Ising star: Floquet unitaries, stroboscopic series and subharmonic
(period-doubling) analysis across pulse errors.
"""

from .dtc import (
    DEFAULT_JT,
    FloquetSpec,
    SubharmonicReport,
    dtc_error_sweep,
    dtc_initial_state,
    dtc_observable,
    dtc_series,
    floquet_unitary,
    power_spectrum_table,
    sample_kick_angles,
    stroboscopic_series,
    subharmonic_analysis,
)

__all__ = [
    "DEFAULT_JT",
    "FloquetSpec",
    "SubharmonicReport",
    "dtc_error_sweep",
    "dtc_initial_state",
    "dtc_observable",
    "dtc_series",
    "floquet_unitary",
    "power_spectrum_table",
    "sample_kick_angles",
    "stroboscopic_series",
    "subharmonic_analysis",
]
