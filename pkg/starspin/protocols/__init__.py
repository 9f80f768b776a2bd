"""
starspin protocols

Diffusion metrology with lopsided coherences, RF-inhomogeneity mapping, CPMG
noise spectroscopy and heat-bath algorithmic cooling.
"""

from .diffusion import (
    DiffusionCurve,
    DiffusionParams,
    diffusion_decay_closed_form,
    diffusion_monte_carlo,
    diffusion_slope,
    lopsidedness,
    slope_ratio,
)
from .hbac import HbacSchedule, ResetModel, hbac_run, hbac_sorting_bound
from .noise import (
    DecayCurve,
    LorentzianSpectrum,
    NoiseKind,
    NoiseModel,
    SpectrumPoint,
    TabulatedSpectrum,
    WhiteSpectrum,
    cpmg_decay,
    decay_rate,
    extract_noise_spectrum,
    lopsidedness_scaling,
)
from .rfi import (
    RfDistribution,
    RfiGrid,
    encoding_weight,
    gaussian_rf_distribution,
    rfi_diagonal_cut,
    rfi_map,
    rfi_signal,
    total_variation,
)

__all__ = [
    "DiffusionCurve",
    "DiffusionParams",
    "diffusion_decay_closed_form",
    "diffusion_monte_carlo",
    "diffusion_slope",
    "lopsidedness",
    "slope_ratio",
    "HbacSchedule",
    "ResetModel",
    "hbac_run",
    "hbac_sorting_bound",
    "DecayCurve",
    "LorentzianSpectrum",
    "NoiseKind",
    "NoiseModel",
    "SpectrumPoint",
    "TabulatedSpectrum",
    "WhiteSpectrum",
    "cpmg_decay",
    "decay_rate",
    "extract_noise_spectrum",
    "lopsidedness_scaling",
    "RfDistribution",
    "RfiGrid",
    "encoding_weight",
    "gaussian_rf_distribution",
    "rfi_diagonal_cut",
    "rfi_map",
    "rfi_signal",
    "total_variation",
]
