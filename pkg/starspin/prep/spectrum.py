"""
Stick spectra of the single-quantum transitions.

Line positions are offsets in Hz from the channel's Larmor frequency. The
central spin has N lines at J * m_h (one per ancilla subspace h); the ancilla
channel has two lines at +J/2 (central |0>) and -J/2 (central |1>).
Amplitudes are the population differences across each transition with the
transition moment folded in, signed by the gyromagnetic ratio and scaled so
the largest line is 1.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..core.operators import ancilla_projector, build_operators, central_operator
from ..core.register import Register
from ..core.states import State, expectation
from ..utils.errors import InvalidParameter, ShapeMismatch

log = logging.getLogger("starspin")

CHANNELS = ("central", "ancilla")

_P0 = np.array([[1, 0], [0, 0]], dtype=complex)
_P1 = np.array([[0, 0], [0, 1]], dtype=complex)


@dataclass(frozen=True)
class StickLine:
    frequency_hz: float
    amplitude: float
    channel: str
    h: int


@dataclass(frozen=True)
class StickSpectrum:
    """Lines of one observation channel, together with the channel's Larmor frequency."""

    lines: Tuple[StickLine, ...]
    larmor_hz: float

    def frequencies(self) -> np.ndarray:
        return np.array([line.frequency_hz for line in self.lines])

    def amplitudes(self) -> np.ndarray:
        return np.array([line.amplitude for line in self.lines])

    def rows(self) -> List[Tuple[float, float, int, int]]:
        """CSV rows: (frequency_hz, amplitude, channel code, h)."""
        return [
            (line.frequency_hz, line.amplitude, CHANNELS.index(line.channel), line.h)
            for line in self.lines
        ]


def stick_spectrum(register: Register, state: State, channel: str = "central") -> StickSpectrum:
    """Single-quantum stick spectrum of ``state`` observed on ``channel``.

    Raises:
        InvalidParameter: If channel is neither 'central' nor 'ancilla'
        ShapeMismatch: If the state was built for another register
    """
    if channel not in CHANNELS:
        raise InvalidParameter(f"channel must be one of {CHANNELS}, got '{channel}'")
    if state.register != register:
        raise ShapeMismatch(f"state was prepared for another register (N={state.register.n_total})")
    backend = state.backend
    ops = build_operators(register, backend)
    raw = []
    if channel == "central":
        sign = np.sign(register.spec.gamma_c)
        larmor = register.omega_c / (2 * np.pi)
        for h in range(register.n_total):
            m_h = register.m_h(h)
            projector = ancilla_projector(register, m_h, backend)
            difference = expectation(state, 2.0 * (ops.iz_c @ projector))
            raw.append((register.j_ca * m_h, sign * difference, h))
    else:
        sign = np.sign(register.spec.gamma_a)
        larmor = register.omega_a / (2 * np.pi)
        for c, projector in enumerate((_P0, _P1)):
            difference = expectation(state, 2.0 * (central_operator(register, backend, projector) @ ops.iz_a))
            raw.append((register.j_ca * (0.5 - c), sign * difference, c))
    scale = max(abs(amplitude) for _, amplitude, _ in raw)
    if scale == 0:
        log.warning(f"{channel} channel carries no single-quantum signal")
        scale = 1.0
    lines = tuple(StickLine(float(f), float(a / scale), channel, h) for f, a, h in raw)
    return StickSpectrum(lines=lines, larmor_hz=larmor)
