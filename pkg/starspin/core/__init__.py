"""
starspin spin core

Register description, operator construction and the two interchangeable state
backends: the symmetric Dicke-block backend and the dense full-space oracle.
"""

from .dicke import ancilla_spins, block_layout, multiplicity, sector_dimension, spin_matrices
from .operators import (
    Operator,
    OperatorSet,
    ancilla_operator,
    ancilla_projector,
    build_operators,
    central_operator,
    check_backend,
    identity,
    level_table,
    rotating_frame_hamiltonian,
    spin_operator,
    static_hamiltonian,
)
from .register import (
    TOLERANCES,
    Backend,
    Register,
    RegisterSpec,
    RotatingFrameParams,
    Tolerances,
    build_register,
)
from .states import (
    CollectiveState,
    DenseState,
    DickeBlock,
    State,
    apply_unitary,
    central_marginal,
    collective_rotation,
    evolve,
    expectation,
    ground_state,
    make_state,
    purity,
    state_from_generator,
    trace,
    validate_state,
)

__all__ = [
    "ancilla_spins",
    "block_layout",
    "multiplicity",
    "sector_dimension",
    "spin_matrices",
    "Operator",
    "OperatorSet",
    "ancilla_operator",
    "ancilla_projector",
    "build_operators",
    "central_operator",
    "check_backend",
    "identity",
    "level_table",
    "rotating_frame_hamiltonian",
    "spin_operator",
    "static_hamiltonian",
    "TOLERANCES",
    "Backend",
    "Register",
    "RegisterSpec",
    "RotatingFrameParams",
    "Tolerances",
    "build_register",
    "CollectiveState",
    "DenseState",
    "DickeBlock",
    "State",
    "apply_unitary",
    "central_marginal",
    "collective_rotation",
    "evolve",
    "expectation",
    "ground_state",
    "make_state",
    "purity",
    "state_from_generator",
    "trace",
    "validate_state",
]
