"""
CPMG dephasing of MSSM coherences and noise spectroscopy.

Fields are z-fluctuations x(t) in rad/s as seen by a central spin. The
spectrum convention is <x^2> = integral S(omega) d omega / 2 pi. A CPMG
train puts its first pi pulse at tau/2 and the rest every tau, so the
toggling function f(t) = +-1 flips at each pulse; the coherence is sampled
after every completed block of ``n_pulses`` pulses.

Correlated noise acts collectively: an order-q coherence accumulates
l_q * integral f x dt. Independent noise breaks ancilla permutation symmetry
and is simulated on the dense backend with one field per spin.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats
from scipy.optimize import curve_fit

from ..core.register import Backend, Register, as_backend
from ..core.states import State
from ..utils.errors import (
    BackendLimit,
    InsufficientFilters,
    InvalidParameter,
    NoSuchOrder,
    SymmetryViolation,
)
from ..utils.rng import CHUNK_SIZE, chunk_bounds, stream
from .diffusion import lopsidedness

log = logging.getLogger("starspin")

# Largest register the per-spin noise simulation accepts
INDEPENDENT_NOISE_LIMIT = 10

# Stream families
_COMMON_FIELD = 0
_OWN_FIELDS = 1


class NoiseKind(str, Enum):
    CORRELATED = "correlated"
    INDEPENDENT = "independent"


@dataclass(frozen=True)
class LorentzianSpectrum:
    """Ornstein-Uhlenbeck field: variance sigma^2, correlation time tau_c."""

    sigma: float
    tau_c: float

    def density(self, omega) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        return 2 * self.sigma ** 2 * self.tau_c / (1 + (omega * self.tau_c) ** 2)

    def validate(self) -> None:
        if self.sigma < 0 or self.tau_c <= 0:
            raise InvalidParameter("Lorentzian spectrum needs sigma >= 0 and tau_c > 0")


@dataclass(frozen=True)
class WhiteSpectrum:
    """Delta-correlated field with flat density s0."""

    s0: float

    def density(self, omega) -> np.ndarray:
        return np.full(np.shape(omega), float(self.s0))

    def validate(self) -> None:
        if self.s0 < 0:
            raise InvalidParameter(f"white spectrum density must be non-negative, got {self.s0}")


def _lorentzian(omega, sigma, tau_c):
    return 2 * sigma ** 2 * tau_c / (1 + (omega * tau_c) ** 2)


@dataclass(frozen=True, eq=False)
class TabulatedSpectrum:
    """Measured S(omega) samples; realized as the best-fitting Lorentzian."""

    omega: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "omega", np.asarray(self.omega, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    def validate(self) -> None:
        if self.omega.size < 2 or self.omega.size != self.values.size:
            raise InvalidParameter("tabulated spectrum needs matching omega and values with at least 2 points")
        if self.values.min() < 0:
            raise InvalidParameter("spectral density must be non-negative")

    def density(self, omega) -> np.ndarray:
        return np.interp(omega, self.omega, self.values)

    def fit(self) -> LorentzianSpectrum:
        self.validate()
        order = np.argsort(self.omega)
        omega, values = self.omega[order], self.values[order]
        peak = values[0]
        below = np.flatnonzero(values < peak / 2)
        width = omega[below[0]] if below.size and omega[below[0]] > 0 else max(omega[-1], 1.0)
        guess_tau = 1.0 / width
        guess_sigma = np.sqrt(max(peak, 1e-300) / (2 * guess_tau))
        (sigma, tau_c), _ = curve_fit(
            _lorentzian, omega, values, p0=(guess_sigma, guess_tau), bounds=(0, np.inf)
        )
        log.debug(f"tabulated spectrum fitted: sigma={sigma:.4g} rad/s, tau_c={tau_c:.4g} s")
        return LorentzianSpectrum(float(sigma), float(tau_c))


Spectrum = Union[LorentzianSpectrum, WhiteSpectrum, TabulatedSpectrum]


@dataclass(frozen=True)
class NoiseModel:
    """Stochastic dephasing field and its ensemble."""

    kind: NoiseKind
    spectrum: Spectrum
    cross_correlation: float = 1.0
    seed: int = 0
    realizations: int = 2000
    resolution: int = 8

    def validate(self) -> None:
        self.spectrum.validate()
        if not -1 <= self.cross_correlation <= 1:
            raise InvalidParameter(f"cross_correlation must lie in [-1, 1], got {self.cross_correlation}")
        if self.realizations < 1 or self.resolution < 1:
            raise InvalidParameter("realizations and resolution must be at least 1")


@dataclass(frozen=True)
class DecayCurve:
    """Ensemble coherence C(t) after each CPMG block, C(0) = 1."""

    q: int
    lopsidedness: float
    n_pulses: int
    tau: float
    times: np.ndarray
    coherence: np.ndarray
    stderr: Optional[np.ndarray] = field(default=None)

    @property
    def omega(self) -> float:
        """Filter frequency pi / tau."""
        return np.pi / self.tau


class _FieldProcess:
    """Discretized field with per-step integrals."""

    def __init__(self, spectrum: Spectrum, dt: float):
        self.dt = dt
        if isinstance(spectrum, WhiteSpectrum):
            self.white = True
            self.step_std = np.sqrt(spectrum.s0 * dt)
            return
        lorentz = spectrum.fit() if isinstance(spectrum, TabulatedSpectrum) else spectrum
        self.white = False
        self.sigma = lorentz.sigma
        self.decay = np.exp(-dt / lorentz.tau_c)
        self.kick = lorentz.sigma * np.sqrt(1 - self.decay ** 2)

    def start(self, rng: np.random.Generator, shape) -> np.ndarray:
        if self.white:
            return np.zeros(shape)
        return self.sigma * rng.standard_normal(shape)

    def advance(self, x: np.ndarray, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        """(next value, integral of the field over this step)."""
        if self.white:
            return x, self.step_std * rng.standard_normal(x.shape)
        integral = x * self.dt
        return x * self.decay + self.kick * rng.standard_normal(x.shape), integral


@dataclass(frozen=True)
class _Schedule:
    dt: float
    toggling: np.ndarray
    sample_steps: np.ndarray
    block_steps: int


def _cpmg_schedule(n_pulses: int, tau: float, t_max: float, resolution: int) -> _Schedule:
    if n_pulses < 1 or tau <= 0:
        raise InvalidParameter(f"CPMG needs n_pulses >= 1 and tau > 0, got {n_pulses}, {tau}")
    block = n_pulses * tau
    n_blocks = int(np.floor(t_max / block + 1e-9))
    if n_blocks < 1:
        raise InvalidParameter(f"t_max={t_max} is shorter than one block of {n_pulses} pulses")
    steps_per_tau = 2 * resolution
    n_steps = n_blocks * n_pulses * steps_per_tau
    step = np.arange(n_steps)
    # pulses at tau/2 + k tau, i.e. step resolution + k * steps_per_tau
    pulses_before = np.where(step >= resolution, (step - resolution) // steps_per_tau + 1, 0)
    toggling = np.where(pulses_before % 2 == 0, 1.0, -1.0)
    sample_steps = np.arange(n_blocks + 1) * n_pulses * steps_per_tau
    return _Schedule(
        dt=tau / steps_per_tau,
        toggling=toggling,
        sample_steps=sample_steps,
        block_steps=n_pulses * steps_per_tau,
    )


def _check_order(register: Register, q: int) -> None:
    if int(q) != q or abs(q) > register.n_total:
        raise NoSuchOrder(f"coherence order {q} is not reachable with N={register.n_total} spins")


def _collective_decay(register: Register, q: int, noise: NoiseModel, schedule: _Schedule):
    l_q = lopsidedness(register, q)
    process = _FieldProcess(noise.spectrum, schedule.dt)
    n_samples = schedule.sample_steps.size
    total = np.zeros(n_samples)
    total_sq = np.zeros(n_samples)
    for index, (start, stop) in enumerate(chunk_bounds(noise.realizations, CHUNK_SIZE)):
        rng = stream(noise.seed, _COMMON_FIELD, index)
        x = process.start(rng, (stop - start,))
        phase = np.zeros(stop - start)
        samples = [np.cos(phase)]
        for s, sign in enumerate(schedule.toggling):
            x, integral = process.advance(x, rng)
            phase += sign * integral
            if (s + 1) % schedule.block_steps == 0:
                samples.append(np.cos(l_q * phase))
        values = np.array(samples)
        total += values.sum(axis=1)
        total_sq += (values ** 2).sum(axis=1)
    return total, total_sq


def _coherence_pairs(register: Register, q: int) -> Tuple[np.ndarray, np.ndarray]:
    """Per-spin magnetic-number differences and magnitudes of the order-q MSSM coherences."""
    from ..prep.circuits import prepare_mssm
    from ..prep.coherence import coherence_filter
    from ..prep.thermal import thermal_state

    n = register.n_total
    if (n - q) % 2 or not 0 <= (n - q) // 2 < n:
        raise NoSuchOrder(f"order {q} is not an MSSM order for N={n}")
    filtered: State = coherence_filter(prepare_mssm(thermal_state(register, Backend.DENSE)), q)
    matrix = filtered.matrices[0]
    half = matrix.shape[0] // 2
    piece = np.abs(matrix[:half, half:])
    rows, cols = np.nonzero(piece > 1e-9 * piece.max())
    ket, bra = rows, cols + half
    bits = (np.arange(n)[::-1])
    m_ket = 0.5 - ((ket[:, None] >> bits) & 1)
    m_bra = 0.5 - ((bra[:, None] >> bits) & 1)
    weights = piece[rows, cols]
    return m_ket - m_bra, weights / weights.sum()


def _independent_decay(register: Register, q: int, noise: NoiseModel, schedule: _Schedule):
    differences, weights = _coherence_pairs(register, q)
    n = register.n_total
    rho = noise.cross_correlation
    signs = np.ones(n)
    signs[1:] = np.sign(rho) if rho else 1.0
    scale = np.ones(n)
    scale[1:] = register.gamma_ratio
    coupling = differences * scale
    common_amp = signs * np.sqrt(abs(rho))
    own_amp = np.sqrt(1 - abs(rho))
    process = _FieldProcess(noise.spectrum, schedule.dt)
    n_samples = schedule.sample_steps.size
    total = np.zeros(n_samples)
    total_sq = np.zeros(n_samples)
    for index, (start, stop) in enumerate(chunk_bounds(noise.realizations, CHUNK_SIZE)):
        m = stop - start
        common_rng = stream(noise.seed, _COMMON_FIELD, index)
        own_rng = stream(noise.seed, _OWN_FIELDS, index)
        common = process.start(common_rng, (m,))
        own = process.start(own_rng, (m, n))
        phase = np.zeros((m, n))
        samples = [np.ones(m)]
        for s, sign in enumerate(schedule.toggling):
            common, common_integral = process.advance(common, common_rng)
            own, own_integral = process.advance(own, own_rng)
            phase += sign * (common_amp * common_integral[:, None] + own_amp * own_integral)
            if (s + 1) % schedule.block_steps == 0:
                samples.append(np.cos(phase @ coupling.T) @ weights)
        values = np.array(samples)
        total += values.sum(axis=1)
        total_sq += (values ** 2).sum(axis=1)
    return total, total_sq


def cpmg_decay(
    register: Register,
    q: int,
    noise: NoiseModel,
    n_pulses: int,
    tau: float,
    t_max: float,
    backend: Union[str, Backend] = Backend.SYMMETRIC,
) -> DecayCurve:
    """Ensemble-averaged order-q coherence under a CPMG train.

    Raises:
        SymmetryViolation: If independent noise is requested on the symmetric backend
        BackendLimit: If independent noise is requested for N > 10
        NoSuchOrder: If q is not reachable
    """
    noise.validate()
    backend = as_backend(backend)
    _check_order(register, q)
    schedule = _cpmg_schedule(n_pulses, tau, t_max, noise.resolution)
    if noise.kind is NoiseKind.INDEPENDENT:
        if backend is not Backend.DENSE:
            raise SymmetryViolation("independent per-spin noise breaks ancilla symmetry; use the dense backend")
        if register.n_total > INDEPENDENT_NOISE_LIMIT:
            raise BackendLimit(
                f"independent noise is simulated for N <= {INDEPENDENT_NOISE_LIMIT}, register has N={register.n_total}"
            )
        total, total_sq = _independent_decay(register, q, noise, schedule)
    else:
        total, total_sq = _collective_decay(register, q, noise, schedule)
    n = noise.realizations
    mean = total / n
    variance = np.maximum(total_sq / n - mean ** 2, 0.0) * n / max(n - 1, 1)
    times = schedule.sample_steps * schedule.dt
    log.debug(f"CPMG q={q} n_pulses={n_pulses} tau={tau:.3g}: C(t_end)={mean[-1]:.4g}")
    return DecayCurve(
        q=q,
        lopsidedness=lopsidedness(register, q),
        n_pulses=n_pulses,
        tau=tau,
        times=times,
        coherence=mean,
        stderr=np.sqrt(variance / n),
    )


def decay_rate(curve: DecayCurve, floor: float = 0.05) -> float:
    """Fit C(t) = exp(-Gamma t) through the origin, using samples with C above ``floor``."""
    t = curve.times[1:]
    c = curve.coherence[1:]
    usable = c > floor
    if not usable.any():
        # decayed within the first block
        return float(-np.log(max(c[0], 1e-12)) / t[0])
    y = -np.log(c[usable])
    return float(np.dot(t[usable], y) / np.dot(t[usable], t[usable]))


@dataclass(frozen=True)
class SpectrumPoint:
    q: int
    lopsidedness: float
    n_pulses: int
    omega: float
    decay_rate: float
    s_omega: float


def extract_noise_spectrum(curves: Sequence[DecayCurve]) -> List[SpectrumPoint]:
    """S(pi / tau) = (pi^2 / 4) Gamma per curve (first-harmonic filter approximation).

    Rows are ordered by coherence order (descending) then by frequency.

    Raises:
        InsufficientFilters: If any order has fewer than 3 distinct filter frequencies
    """
    by_order = {}
    for curve in curves:
        by_order.setdefault(curve.q, []).append(curve)
    if not by_order:
        raise InsufficientFilters("no decay curves given")
    points = []
    for q in sorted(by_order, reverse=True):
        group = sorted(by_order[q], key=lambda c: c.omega)
        distinct = np.unique(np.round([c.omega for c in group], 9))
        if distinct.size < 3:
            raise InsufficientFilters(
                f"order q={q} has {distinct.size} distinct filter frequencies; at least 3 are needed"
            )
        for curve in group:
            gamma = decay_rate(curve)
            points.append(
                SpectrumPoint(
                    q=curve.q,
                    lopsidedness=curve.lopsidedness,
                    n_pulses=curve.n_pulses,
                    omega=curve.omega,
                    decay_rate=gamma,
                    s_omega=(np.pi ** 2 / 4) * gamma,
                )
            )
    return points


def lopsidedness_scaling(points: Sequence[SpectrumPoint]) -> Tuple[float, float]:
    """Regress the low-frequency S_0 of each order on l_q^2; returns (slope, R^2)."""
    lowest = {}
    for point in points:
        if point.q not in lowest or point.omega < lowest[point.q].omega:
            lowest[point.q] = point
    if len(lowest) < 2:
        raise InsufficientFilters("need at least two coherence orders for a scaling fit")
    l_sq = np.array([p.lopsidedness ** 2 for p in lowest.values()])
    s0 = np.array([p.s_omega for p in lowest.values()])
    fit = stats.linregress(l_sq, s0)
    return float(fit.slope), float(fit.rvalue ** 2)
