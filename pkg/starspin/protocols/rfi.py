"""
RF-inhomogeneity mapping.

Each molecule sees Rabi frequencies (Omega_C, Omega_A) drawn from a joint
distribution P. The Rabi sandwich turns the drive into a phase on the prepared
order-q coherence: Omega_C t_c from the central spin and w Omega_A t_a from the
ancillas, with w = (q - 1) sign(gamma_A / gamma_C). Sampling the signal on a
(t_c, t_a) grid and taking the 2-D DFT recovers P.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..core.register import TOLERANCES, Register
from ..utils.errors import InvalidParameter, UnnormalizedDistribution

log = logging.getLogger("starspin")


@dataclass(frozen=True, eq=False)
class RfDistribution:
    """Discrete joint distribution of central and ancilla Rabi frequencies (rad/s)."""

    omega_c: np.ndarray
    omega_a: np.ndarray
    probability: np.ndarray

    def __post_init__(self) -> None:
        for name in ("omega_c", "omega_a", "probability"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).ravel())
        if not self.omega_c.size == self.omega_a.size == self.probability.size:
            raise InvalidParameter("Rabi frequencies and probabilities must have equal length")

    def validate(self, tol: float = TOLERANCES.trace) -> None:
        if self.probability.size == 0:
            raise UnnormalizedDistribution("distribution has no points")
        if self.probability.min() < 0:
            raise UnnormalizedDistribution("distribution has negative probabilities")
        total = float(self.probability.sum())
        if abs(total - 1) > tol:
            raise UnnormalizedDistribution(f"probabilities sum to {total:.12g}, expected 1")

    def as_dict(self, decimals: int = 6) -> Dict[Tuple[float, float], float]:
        """Probability keyed by rounded (Omega_C, Omega_A); repeated points are merged."""
        merged: Dict[Tuple[float, float], float] = {}
        for c, a, p in zip(self.omega_c, self.omega_a, self.probability):
            key = (round(float(c), decimals), round(float(a), decimals))
            merged[key] = merged.get(key, 0.0) + float(p)
        return merged


@dataclass(frozen=True)
class RfiGrid:
    """Uniform sampling grid of the two Rabi durations."""

    dt_c: float
    n_c: int
    dt_a: float
    n_a: int

    def validate(self) -> None:
        if self.n_c < 1 or self.n_a < 1:
            raise InvalidParameter(f"RFI grid is empty ({self.n_c} x {self.n_a} samples)")
        if self.dt_c <= 0 or self.dt_a <= 0:
            raise InvalidParameter("RFI grid steps must be positive")

    def times(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.dt_c * np.arange(self.n_c), self.dt_a * np.arange(self.n_a)


def encoding_weight(register: Register, q: int) -> float:
    """Weight w of the ancilla Rabi phase on an order-q coherence."""
    return float((q - 1) * np.sign(register.gamma_ratio))


def rfi_signal(register: Register, q: int, dist: RfDistribution, t_c, t_a) -> np.ndarray:
    """S(t_c, t_a) = sum P exp(i [Omega_C t_c + w Omega_A t_a]), broadcast over t_c and t_a.

    Raises:
        UnnormalizedDistribution: If P does not sum to one
    """
    dist.validate()
    w = encoding_weight(register, q)
    t_c = np.asarray(t_c, dtype=float)
    t_a = np.asarray(t_a, dtype=float)
    central = np.exp(1j * np.outer(t_c.ravel(), dist.omega_c)) * dist.probability
    ancilla = np.exp(1j * np.outer(t_a.ravel(), w * dist.omega_a))
    return (central @ ancilla.T).reshape(t_c.shape + t_a.shape)


def _recover(values: np.ndarray) -> np.ndarray:
    recovered = np.clip(values.real, 0.0, None)
    total = recovered.sum()
    if total <= 0:
        raise UnnormalizedDistribution("recovered distribution has no positive weight")
    return recovered / total


def rfi_map(register: Register, q: int, dist: RfDistribution, grid: RfiGrid) -> RfDistribution:
    """Sample the signal on ``grid`` and recover P by a 2-D DFT.

    The recovered lattice is Omega_C = 2 pi k / (n_c dt_c) and
    Omega_A = 2 pi l / (n_a dt_a w). At q = 1 the ancilla phase vanishes and
    only the Omega_C marginal is returned (Omega_A reported as 0).

    Raises:
        InvalidParameter: If the grid is empty
        UnnormalizedDistribution: If P does not sum to one
    """
    grid.validate()
    w = encoding_weight(register, q)
    t_c, t_a = grid.times()
    if w == 0:
        log.warning("order q=1 carries no ancilla phase; recovering the Omega_C marginal only")
        t_a = t_a[:1]
    signal = rfi_signal(register, q, dist, t_c, t_a)
    spectrum = np.fft.fftshift(np.fft.fft2(signal)) / signal.size
    omega_c = 2 * np.pi * np.fft.fftshift(np.fft.fftfreq(t_c.size, grid.dt_c))
    if w == 0:
        omega_a = np.zeros(1)
    else:
        omega_a = 2 * np.pi * np.fft.fftshift(np.fft.fftfreq(t_a.size, grid.dt_a)) / w
    mesh_c, mesh_a = np.meshgrid(omega_c, omega_a, indexing="ij")
    return RfDistribution(mesh_c, mesh_a, _recover(spectrum))


def rfi_diagonal_cut(
    register: Register, q: int, dist: RfDistribution, dt: float, n: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Shared Rabi block (t_c = t_a = t): distribution of Omega_C + w Omega_A."""
    if n < 1 or dt <= 0:
        raise InvalidParameter(f"diagonal cut needs n >= 1 samples and dt > 0, got n={n}, dt={dt}")
    t = dt * np.arange(n)
    dist.validate()
    w = encoding_weight(register, q)
    signal = np.exp(1j * np.outer(t, dist.omega_c + w * dist.omega_a)) @ dist.probability
    spectrum = np.fft.fftshift(np.fft.fft(signal)) / n
    frequencies = 2 * np.pi * np.fft.fftshift(np.fft.fftfreq(n, dt))
    return frequencies, _recover(spectrum)


def gaussian_rf_distribution(
    grid: RfiGrid,
    mean_c: float,
    sigma_c: float,
    mean_a: float = 0.0,
    sigma_a: float = 0.0,
    ancilla_scale: float = 1.0,
) -> RfDistribution:
    """Gaussian P(Omega_C, Omega_A) placed on the DFT lattice of ``grid``.

    ``ancilla_scale`` is |w|; the ancilla lattice is 2 pi l / (n_a dt_a |w|).
    A zero width puts all weight on the lattice point nearest the mean.
    """
    grid.validate()
    if ancilla_scale <= 0:
        raise InvalidParameter(f"ancilla_scale must be positive, got {ancilla_scale}")
    omega_c = 2 * np.pi * np.fft.fftshift(np.fft.fftfreq(grid.n_c, grid.dt_c))
    omega_a = 2 * np.pi * np.fft.fftshift(np.fft.fftfreq(grid.n_a, grid.dt_a)) / ancilla_scale

    def profile(axis: np.ndarray, mean: float, sigma: float) -> np.ndarray:
        if sigma <= 0:
            weights = np.zeros(axis.size)
            weights[np.argmin(np.abs(axis - mean))] = 1.0
            return weights
        return np.exp(-0.5 * ((axis - mean) / sigma) ** 2)

    joint = np.outer(profile(omega_c, mean_c, sigma_c), profile(omega_a, mean_a, sigma_a))
    mesh_c, mesh_a = np.meshgrid(omega_c, omega_a, indexing="ij")
    return RfDistribution(mesh_c, mesh_a, joint / joint.sum())


def total_variation(p: RfDistribution, q: RfDistribution, decimals: int = 6) -> float:
    """Half the L1 distance between two distributions, matched point by point."""
    left, right = p.as_dict(decimals), q.as_dict(decimals)
    keys = set(left) | set(right)
    return 0.5 * sum(abs(left.get(k, 0.0) - right.get(k, 0.0)) for k in keys)
