"""
NOON / MSSM preparation circuits.

The circuit is a Hadamard on the central spin followed by one collective
CNOT that flips every ancilla when the central spin is |1>. On the ground
state this gives the NOON state (|0...0> + |1...1>)/sqrt(2); on a thermal
state it gives a mixture of MSSM coherences of order N, N-2, ..., -N+2.
"""

from functools import lru_cache
from typing import Union

import numpy as np

from ..core.operators import Operator, build_operators, central_operator
from ..core.register import Backend, Register
from ..core.states import State, apply_unitary, ground_state, rotation
from ..utils.errors import InvalidParameter

CNOT_DIRECTIONS = ("entangle", "untangle")

_P0 = np.array([[1, 0], [0, 0]], dtype=complex)
_P1 = np.array([[0, 0], [0, 1]], dtype=complex)
_HADAMARD_AXIS = np.array([1.0, 0.0, 1.0]) / np.sqrt(2)


@lru_cache(maxsize=32)
def hadamard_gate(register: Register, backend: Backend) -> Operator:
    """pi rotation about (x+z)/sqrt(2) on the central spin (Hadamard up to global phase)."""
    return rotation(register, backend, _HADAMARD_AXIS, np.pi, "central")


@lru_cache(maxsize=32)
def cnot_gate(register: Register, backend: Backend) -> Operator:
    """P0 x 1 + P1 x X^(N-1), with the all-ancilla flip taken from exp(-i pi I_x^A)."""
    ops = build_operators(register, backend)
    # exp(-i pi I_x) = -i sigma_x per spin
    flip = (1j ** register.n_ancilla) * ops.ix_a.propagator(np.pi)
    return central_operator(register, backend, _P0) + central_operator(register, backend, _P1) @ flip


def hadamard_central(state: State) -> State:
    return apply_unitary(state, hadamard_gate(state.register, state.backend))


def collective_cnot(state: State, direction: str = "entangle") -> State:
    """Central-controlled flip of all ancillas.

    The gate is its own inverse, so ``direction`` only labels the step
    ("entangle" while preparing, "untangle" before readout).
    """
    if direction not in CNOT_DIRECTIONS:
        raise InvalidParameter(f"CNOT direction must be one of {CNOT_DIRECTIONS}, got '{direction}'")
    return apply_unitary(state, cnot_gate(state.register, state.backend))


def prepare_mssm(state: State) -> State:
    """Hadamard on the central spin, then the collective CNOT."""
    return collective_cnot(hadamard_central(state), "entangle")


def unprepare_mssm(state: State) -> State:
    """Inverse of ``prepare_mssm``: untangling CNOT, then Hadamard."""
    return hadamard_central(collective_cnot(state, "untangle"))


def noon_state(register: Register, backend: Union[str, Backend]) -> State:
    """(|0...0> + |1...1>)/sqrt(2) as a density matrix."""
    return prepare_mssm(ground_state(register, backend))
