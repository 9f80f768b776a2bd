"""
Heat-bath algorithmic cooling of the central spin.

Each iteration applies an ideal compression (a population-sorting unitary
inside every Dicke block that maximizes sign(eps_C) <I_z^C>), records the
central magnetization relative to thermal, then lets the register relax
toward the bath for tau_HB. Coherences are taken as fully decayed during the
delay, so the simulation tracks populations only.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List

import numpy as np
from scipy.special import comb

from ..core.dicke import ancilla_spins, sector_dimension
from ..core.register import Backend, Register
from ..core.operators import build_operators
from ..core.states import State, expectation
from ..prep.thermal import thermal_state
from ..utils.errors import InvalidParameter, MissingRelaxationTimes

log = logging.getLogger("starspin")


class ResetModel(str, Enum):
    """How the register relaxes during the heat-bath delay."""

    # ancillas rethermalized, central spin untouched
    PERFECT = "perfect"
    # both spins relax with their own T1 toward the bath
    EXPONENTIAL_T1 = "exponential_t1"


@dataclass(frozen=True)
class HbacSchedule:
    iterations: int
    tau_hb: float
    reset_model: ResetModel = ResetModel.EXPONENTIAL_T1

    def validate(self) -> None:
        if self.iterations < 1:
            raise InvalidParameter(f"HBAC needs at least one iteration, got {self.iterations}")
        if not self.tau_hb > 0:
            raise InvalidParameter(f"heat-bath delay must be positive, got {self.tau_hb}")


def _ancilla_thermal(register: Register, j: float) -> np.ndarray:
    """Per-state thermal ancilla populations in block j."""
    m = j - np.arange(sector_dimension(j))
    return (1 + 2 * register.epsilon_a * m) / 2.0 ** register.n_ancilla


def _compress(register: Register, populations: np.ndarray) -> np.ndarray:
    """Sort one block's populations so the larger half sits on the favoured central level."""
    ordered = np.sort(populations)[::-1]
    half = ordered.size // 2
    if register.epsilon_c >= 0:
        return ordered
    return np.concatenate([ordered[half:], ordered[:half]])


def _reset(register: Register, blocks: List[np.ndarray], weights: np.ndarray, schedule: HbacSchedule):
    central = np.zeros(2)
    for d, pops in zip(weights, blocks):
        half = pops.size // 2
        central += d * np.array([pops[:half].sum(), pops[half:].sum()])
    relaxed = []
    if schedule.reset_model is ResetModel.PERFECT:
        for j in ancilla_spins(register.n_ancilla):
            relaxed.append(np.kron(central, _ancilla_thermal(register, j)))
        return relaxed
    keep_a = np.exp(-schedule.tau_hb / register.spec.t1_a)
    keep_c = np.exp(-schedule.tau_hb / register.spec.t1_c)
    central_thermal = np.array([1 + register.epsilon_c, 1 - register.epsilon_c]) / 2
    for j, pops in zip(ancilla_spins(register.n_ancilla), blocks):
        half = pops.size // 2
        # ancilla channel: rho -> k rho + (1 - k) Tr_A(rho) x rho_A^th
        pops = keep_a * pops + (1 - keep_a) * np.kron(central, _ancilla_thermal(register, j))
        # central channel: rho -> k rho + (1 - k) rho_C^th x Tr_C(rho)
        ancilla = pops[:half] + pops[half:]
        pops = keep_c * pops + (1 - keep_c) * np.kron(central_thermal, ancilla)
        relaxed.append(pops)
    return relaxed


def _to_state(state: State, blocks: List[np.ndarray]) -> State:
    return state.with_matrices([np.diag(p).astype(complex) for p in blocks])


def hbac_run(register: Register, schedule: HbacSchedule) -> np.ndarray:
    """M_n = <I_z^C>_n / <I_z^C>_thermal for n = 0..iterations (M_0 = 1).

    M_n is read right after the n-th compression.

    Raises:
        MissingRelaxationTimes: If the exponential reset is requested without t1_c and t1_a
    """
    schedule.validate()
    if schedule.reset_model is ResetModel.EXPONENTIAL_T1 and (
        register.spec.t1_c is None or register.spec.t1_a is None
    ):
        raise MissingRelaxationTimes("exponential-T1 resets need t1_c and t1_a on the register")
    state = thermal_state(register, Backend.SYMMETRIC)
    iz_c = build_operators(register, Backend.SYMMETRIC).iz_c
    reference = expectation(state, iz_c)
    blocks = [np.diag(m).real.copy() for m in state.matrices]
    weights = state.weights
    series = [1.0]
    for n in range(1, schedule.iterations + 1):
        blocks = [_compress(register, pops) for pops in blocks]
        series.append(expectation(_to_state(state, blocks), iz_c) / reference)
        blocks = _reset(register, blocks, weights, schedule)
        log.debug(f"HBAC iteration {n}: M={series[-1]:.6g}")
    log.info(f"HBAC finished {schedule.iterations} iterations, M={series[-1]:.4g}")
    return np.array(series)


def _global_sort_step(values: np.ndarray, counts: np.ndarray, n_total: int) -> float:
    """Population of the favoured half after sorting every state globally."""
    order = np.argsort(values)[::-1]
    remaining = 2.0 ** (n_total - 1)
    top = 0.0
    for value, count in zip(values[order], counts[order]):
        take = min(count, remaining)
        top += value * take
        remaining -= take
        if remaining <= 0:
            break
    return top


def hbac_sorting_bound(register: Register, iterations: int) -> np.ndarray:
    """Ceiling on M_n: unrestricted population sorting with perfect ancilla resets.

    A PERFECT-reset run reaches this sequence up to roundoff, so compare the
    two with a relative tolerance.
    """
    if iterations < 1:
        raise InvalidParameter(f"HBAC needs at least one iteration, got {iterations}")
    n = register.n_ancilla
    h = np.arange(n + 1)
    m_h = n / 2 - h
    counts = np.array([float(comb(n, k, exact=True)) for k in h])
    ancilla = (1 + 2 * register.epsilon_a * m_h) / 2.0 ** n
    values = np.concatenate([
        (1 + register.epsilon_c + 2 * register.epsilon_a * m_h) / 2.0 ** register.n_total,
        (1 - register.epsilon_c + 2 * register.epsilon_a * m_h) / 2.0 ** register.n_total,
    ])
    all_counts = np.concatenate([counts, counts])
    series = [1.0]
    for _ in range(iterations):
        favoured = _global_sort_step(values, all_counts, register.n_total)
        # <2 I_z^C> relative to its thermal value eps_C
        polarization = (2 * favoured - 1) * np.sign(register.epsilon_c)
        series.append(polarization / register.epsilon_c)
        values = np.concatenate([favoured * ancilla, (1 - favoured) * ancilla])
    return np.array(series)
