"""
starspin metrology

Correlated probe preparation, parameter encoding, classical Fisher information
of chosen measurements, the heuristic optimal observable and Cramer-Rao bounds.
"""

from .qfi import (
    ProbeState,
    QfiEstimate,
    amplification_ratio,
    central_observable,
    correlated_fisher,
    cramer_rao,
    encode_parameter,
    fisher_sweep,
    outcome_probabilities,
    prepare_correlated_probe,
    prepare_uncorrelated_probe,
    qfi_classical_fisher,
    sld_observable,
)

__all__ = [
    "ProbeState",
    "QfiEstimate",
    "amplification_ratio",
    "central_observable",
    "correlated_fisher",
    "cramer_rao",
    "encode_parameter",
    "fisher_sweep",
    "outcome_probabilities",
    "prepare_correlated_probe",
    "prepare_uncorrelated_probe",
    "qfi_classical_fisher",
    "sld_observable",
]
