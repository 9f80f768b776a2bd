"""
Diffusion encoding with lopsided MSSM coherences.

A gradient pair of strength G_z and duration delta separated by Delta imprints
the phase l_q gamma_C d_z G_z delta on an order-q coherence of a spin that
moved by d_z. With free Gaussian diffusion, Var(d_z) = 2 D Delta, the signal
is S = exp(-l_q^2 gamma_C^2 G_z^2 delta^2 D Delta).
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.register import Register
from ..utils.errors import InvalidParameter
from ..utils.rng import CHUNK_SIZE, chunk_bounds, stream

log = logging.getLogger("starspin")


@dataclass(frozen=True)
class DiffusionParams:
    """Gradient-echo diffusion experiment."""

    d_const: float
    g_z: Tuple[float, ...]
    delta_small: float
    delta_big: float
    trials: int = 100_000
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "g_z", tuple(float(g) for g in self.g_z))

    def validate(self) -> None:
        if self.d_const < 0:
            raise InvalidParameter(f"diffusion constant must be non-negative, got {self.d_const}")
        if not self.g_z or min(self.g_z) < 0:
            raise InvalidParameter("g_z must be a non-empty list of non-negative gradient strengths")
        if self.delta_small <= 0 or self.delta_big <= 0:
            raise InvalidParameter("gradient duration and diffusion delay must be positive")
        if self.trials < 1:
            raise InvalidParameter(f"trials must be at least 1, got {self.trials}")


@dataclass(frozen=True)
class DiffusionCurve:
    """Signal attenuation against gradient strength."""

    q: int
    lopsidedness: float
    g_z: np.ndarray
    signal: np.ndarray
    stderr: Optional[np.ndarray] = field(default=None)


def lopsidedness(register: Register, q: float) -> float:
    """l_q = 1 + (q - 1) gamma_A / gamma_C."""
    return 1.0 + (q - 1) * register.gamma_ratio


def diffusion_decay_closed_form(register: Register, q: int, params: DiffusionParams) -> DiffusionCurve:
    params.validate()
    l_q = lopsidedness(register, q)
    g = np.asarray(params.g_z)
    exponent = (l_q * register.spec.gamma_c * g * params.delta_small) ** 2 * params.d_const * params.delta_big
    return DiffusionCurve(q=q, lopsidedness=l_q, g_z=g, signal=np.exp(-exponent))


def diffusion_monte_carlo(
    register: Register, q: int, params: DiffusionParams, chunk_size: int = CHUNK_SIZE
) -> DiffusionCurve:
    """Monte Carlo estimate of the attenuation with standard errors.

    Displacements are drawn per chunk from the stream (seed, chunk), so every
    gradient strength and every order sees the same walkers.
    """
    params.validate()
    l_q = lopsidedness(register, q)
    g = np.asarray(params.g_z)
    sigma = np.sqrt(2 * params.d_const * params.delta_big)
    rate = l_q * register.spec.gamma_c * params.delta_small * g
    total = np.zeros_like(g)
    total_sq = np.zeros_like(g)
    for index, (start, stop) in enumerate(chunk_bounds(params.trials, chunk_size)):
        displacement = sigma * stream(params.seed, index).standard_normal(stop - start)
        cosines = np.cos(np.outer(displacement, rate))
        total += cosines.sum(axis=0)
        total_sq += (cosines ** 2).sum(axis=0)
    n = params.trials
    mean = total / n
    variance = np.maximum(total_sq / n - mean ** 2, 0.0) * n / max(n - 1, 1)
    log.debug(f"diffusion MC q={q}: l={l_q:.4g}, {n} trials, min S={mean.min():.4g}")
    return DiffusionCurve(q=q, lopsidedness=l_q, g_z=g, signal=mean, stderr=np.sqrt(variance / n))


def diffusion_slope(curve: DiffusionCurve) -> float:
    """Least-squares slope of -log S against G_z^2, over points with S > 0."""
    usable = curve.signal > 0
    if usable.sum() < 2:
        raise InvalidParameter("need at least two positive signal points to fit a slope")
    x = curve.g_z[usable] ** 2
    y = -np.log(curve.signal[usable])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def slope_ratio(curves: Sequence[DiffusionCurve], reference: DiffusionCurve) -> np.ndarray:
    """Fitted slopes relative to a reference curve (q = 1 gives l_q^2)."""
    base = diffusion_slope(reference)
    return np.array([diffusion_slope(curve) / base for curve in curves])
