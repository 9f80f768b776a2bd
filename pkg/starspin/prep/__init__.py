"""
starspin state preparation

Thermal states, the NOON/MSSM circuit, coherence-order decomposition and
filtering, Pascal weights and single-quantum stick spectra.
"""

from .circuits import (
    collective_cnot,
    hadamard_central,
    noon_state,
    prepare_mssm,
    unprepare_mssm,
)
from .coherence import (
    CoherenceDecomposition,
    coherence_decompose,
    coherence_filter,
    mssm_weights,
    pascal_weights,
)
from .spectrum import StickLine, StickSpectrum, stick_spectrum
from .thermal import subspace_populations, thermal_state

__all__ = [
    "collective_cnot",
    "hadamard_central",
    "noon_state",
    "prepare_mssm",
    "unprepare_mssm",
    "CoherenceDecomposition",
    "coherence_decompose",
    "coherence_filter",
    "mssm_weights",
    "pascal_weights",
    "StickLine",
    "StickSpectrum",
    "stick_spectrum",
    "subspace_populations",
    "thermal_state",
]
