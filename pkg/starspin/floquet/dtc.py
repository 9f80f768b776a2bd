"""
Discrete-time-crystal dynamics of a kicked Ising star.

One Floquet period is a transverse kick followed by free Ising evolution:

    U = exp(-i 2 pi J T I_z^C I_z^A) exp(i h I_x^total),   h = pi - e

with spin-1/2 operators I = sigma/2 and J in Hz. At e = 0 the kick is an exact
spin flip, so z-basis states alternate sign every period. Stroboscopic
series are analysed with a DFT whose Nyquist bin sits at 0.5/T.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.operators import Operator, build_operators, check_backend, spin_operator
from ..core.register import Backend, Register
from ..core.states import State, apply_unitary, expectation, ground_state
from ..prep.thermal import thermal_state
from ..utils.errors import InvalidParameter, SeriesTooShort, SymmetryViolation
from ..utils.rng import stream

log = logging.getLogger("starspin")

# J T of the default drive; locks the subharmonic response of a ten-spin star
DEFAULT_JT = 0.4
DEFAULT_PERIODS = 127
MIN_SERIES = 8
OBSERVABLES = ("total", "central", "ancillas")
TAPERS = ("rect", "hann")

# envelope magnitudes are clipped here before taking the log
_ENVELOPE_FLOOR = 1e-6


@dataclass(frozen=True)
class FloquetSpec:
    """Drive parameters. ``kick_angles`` overrides the uniform h = pi - e per spin."""

    j_coupling: float
    period: float
    error: float = 0.0
    kick_angles: Optional[Tuple[float, ...]] = None
    n_periods: int = DEFAULT_PERIODS
    observable: str = "total"

    def validate(self, register: Optional[Register] = None) -> None:
        """
        Raises:
            InvalidParameter: If a field is out of range
        """
        if not (self.period > 0 and math.isfinite(self.period)):
            raise InvalidParameter(f"Floquet period must be positive, got {self.period}")
        if self.n_periods < 2:
            raise InvalidParameter(f"need at least 2 periods, got {self.n_periods}")
        if not math.isfinite(self.j_coupling):
            raise InvalidParameter("Ising coupling must be finite")
        if self.observable not in OBSERVABLES:
            raise InvalidParameter(f"observable must be one of {OBSERVABLES}, got '{self.observable}'")
        if self.kick_angles is not None and register is not None and len(self.kick_angles) != register.n_total:
            raise InvalidParameter(
                f"per-spin kick angles need {register.n_total} entries, got {len(self.kick_angles)}"
            )

    @property
    def kick_angle(self) -> float:
        return math.pi - self.error

    @property
    def coupling_phase(self) -> float:
        """2 pi J T, the Ising angle per period."""
        return 2 * math.pi * self.j_coupling * self.period

    def replace(self, **changes) -> "FloquetSpec":
        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class SubharmonicReport:
    """Power spectrum of a stroboscopic series and its period-doubling summary.

    ``peak_height`` is the fraction of total power in the bin at 0.5/T and
    ``decay_time`` is the envelope time constant in seconds (inf when the
    envelope does not decay).
    """

    frequencies: np.ndarray
    power: np.ndarray
    peak_frequency: float
    peak_height: float
    decay_time: float
    period: float
    n_samples: int

    @property
    def bin_width(self) -> float:
        return 1.0 / (self.n_samples * self.period)


def sample_kick_angles(register: Register, error: float, spread: float, seed: int) -> Tuple[float, ...]:
    """Disordered kicks h_i = pi - e + delta_i with delta_i uniform in [-spread, spread]."""
    if spread < 0:
        raise InvalidParameter(f"disorder spread must be non-negative, got {spread}")
    offsets = stream(seed, 0).uniform(-spread, spread, size=register.n_total)
    return tuple(float(math.pi - error + d) for d in offsets)


def _kick(register: Register, spec: FloquetSpec, backend: Backend) -> Operator:
    ops = build_operators(register, backend)
    if spec.kick_angles is None:
        return (ops.ix_c + ops.ix_a).propagator(-spec.kick_angle)
    if backend is not Backend.DENSE:
        raise SymmetryViolation("per-spin kick angles break permutation symmetry; use the dense backend")
    generator = spec.kick_angles[0] * spin_operator(register, 0, "x", backend)
    for qubit, angle in enumerate(spec.kick_angles[1:], start=1):
        generator = generator + angle * spin_operator(register, qubit, "x", backend)
    return generator.propagator(-1.0)


def floquet_unitary(register: Register, spec: FloquetSpec, backend: Union[str, Backend] = Backend.SYMMETRIC) -> Operator:
    """One drive period: the kick, then Ising evolution for T.

    Raises:
        SymmetryViolation: If per-spin angles are requested on the symmetric backend
        BackendLimit: If dense is requested for N > 14
    """
    spec.validate(register)
    backend = check_backend(register, backend)
    ops = build_operators(register, backend)
    ising = (spec.coupling_phase * (ops.iz_c @ ops.iz_a)).propagator(1.0)
    return ising @ _kick(register, spec, backend)


def dtc_observable(register: Register, backend: Union[str, Backend], which: str = "total") -> Operator:
    ops = build_operators(register, backend)
    if which == "central":
        return ops.iz_c
    if which == "ancillas":
        return ops.iz_a
    if which == "total":
        return ops.iz_c + ops.iz_a
    raise InvalidParameter(f"observable must be one of {OBSERVABLES}, got '{which}'")


def dtc_initial_state(register: Register, backend: Union[str, Backend] = Backend.SYMMETRIC, thermal: bool = False) -> State:
    """Fully z-polarized product state, or the high-temperature thermal state."""
    if thermal:
        return thermal_state(register, backend)
    return ground_state(register, backend)


def stroboscopic_series(state0: State, unitary: Operator, n_periods: int, observable: Operator) -> np.ndarray:
    """<O> after n = 0..n_periods applications of U."""
    if n_periods < 2:
        raise InvalidParameter(f"need at least 2 periods, got {n_periods}")
    series = np.empty(n_periods + 1)
    state = state0
    series[0] = expectation(state, observable)
    for n in range(1, n_periods + 1):
        state = apply_unitary(state, unitary)
        series[n] = expectation(state, observable)
    return series


def _envelope_decay(samples: np.ndarray, period: float) -> float:
    magnitude = np.maximum(np.abs(samples), _ENVELOPE_FLOOR)
    slope, _ = np.polyfit(np.arange(samples.size), np.log(magnitude), 1)
    if slope >= 0:
        return math.inf
    return -period / slope


def subharmonic_analysis(series: Sequence[float], period: float, window: str = "rect") -> SubharmonicReport:
    """DFT power spectrum of a stroboscopic series with the peak near 0.5/T.

    Odd-length series lose their first sample so that 0.5/T is a bin.

    Raises:
        SeriesTooShort: If fewer than 8 samples are given
    """
    samples = np.asarray(series, dtype=float)
    if samples.size < MIN_SERIES:
        raise SeriesTooShort(f"spectral analysis needs at least {MIN_SERIES} samples, got {samples.size}")
    if window not in TAPERS:
        raise InvalidParameter(f"window must be one of {TAPERS}, got '{window}'")
    if not period > 0:
        raise InvalidParameter(f"period must be positive, got {period}")
    if samples.size % 2:
        samples = samples[1:]
    n = samples.size
    tapered = samples * np.hanning(n) if window == "hann" else samples
    power = np.abs(np.fft.rfft(tapered)) ** 2
    frequencies = np.fft.rfftfreq(n, d=period)
    total = power.sum()
    peak_height = float(power[-1] / total) if total > 0 else 0.0
    report = SubharmonicReport(
        frequencies=frequencies,
        power=power,
        peak_frequency=float(frequencies[np.argmax(power)]),
        peak_height=peak_height,
        decay_time=_envelope_decay(samples, period),
        period=period,
        n_samples=n,
    )
    log.debug(
        f"subharmonic analysis: {n} samples, peak {report.peak_frequency:.6g} Hz, height {peak_height:.4f}"
    )
    return report


def power_spectrum_table(report: SubharmonicReport) -> List[Tuple[float, float]]:
    """Long-format (frequency, power) rows."""
    return [(float(f), float(p)) for f, p in zip(report.frequencies, report.power)]


def dtc_series(
    register: Register, spec: FloquetSpec, backend: Union[str, Backend] = Backend.SYMMETRIC, thermal: bool = False
) -> np.ndarray:
    """Stroboscopic series of the configured observable from the default initial state."""
    backend = check_backend(register, backend)
    unitary = floquet_unitary(register, spec, backend)
    state0 = dtc_initial_state(register, backend, thermal)
    return stroboscopic_series(state0, unitary, spec.n_periods, dtc_observable(register, backend, spec.observable))


def _shifted_angles(template: FloquetSpec, error: float) -> Optional[Tuple[float, ...]]:
    """Per-spin angles re-centred on pi - error, keeping each spin's offset."""
    if template.kick_angles is None:
        return None
    return tuple(a + template.error - error for a in template.kick_angles)


def _trailing(series: np.ndarray, length: Optional[int]) -> np.ndarray:
    if length is None:
        return series
    if length > series.size:
        raise InvalidParameter(f"window of {length} periods exceeds the {series.size}-sample series")
    return series[-length:]


def dtc_error_sweep(
    register: Register,
    template: FloquetSpec,
    e_grid: Sequence[float],
    windows: Sequence[Optional[int]] = (None,),
    taper: str = "rect",
    backend: Union[str, Backend] = Backend.SYMMETRIC,
    thermal: bool = False,
) -> List[Tuple[float, ...]]:
    """Rows (e, window, peak_freq, peak_height, decay_time, control_peak_freq).

    Each e is simulated once; every trailing window of the series is analysed
    separately. The control uses the same drive with J = 0.
    """
    backend = check_backend(register, backend)
    for e in e_grid:
        if not 0 <= e < math.pi / 2:
            raise InvalidParameter(f"pulse error must lie in [0, pi/2), got {e}")
    rows = []
    for e in e_grid:
        spec = template.replace(error=float(e), kick_angles=_shifted_angles(template, float(e)))
        series = dtc_series(register, spec, backend, thermal)
        control = dtc_series(register, spec.replace(j_coupling=0.0), backend, thermal)
        for length in windows:
            report = subharmonic_analysis(_trailing(series, length), spec.period, taper)
            reference = subharmonic_analysis(_trailing(control, length), spec.period, taper)
            rows.append((
                float(e),
                float(length if length is not None else series.size),
                report.peak_frequency,
                report.peak_height,
                report.decay_time,
                reference.peak_frequency,
            ))
        log.info(f"DTC e={e:.4f}: peak {rows[-1][2]:.6g} Hz (control {rows[-1][5]:.6g} Hz)")
    return rows
