"""
Density-operator states and their exact unitary evolution.

``CollectiveState`` keeps one matrix per ancilla sector j (shared by the d_j
copies of that sector); ``DenseState`` keeps the full 2^N matrix. Both expose
``matrices`` and ``weights`` so every operation below is written once.
States are immutable; operations return new states.
"""

import logging
from dataclasses import dataclass
from typing import ClassVar, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from ..utils.errors import InvalidParameter, InvalidState, NonHermitianObservable, ShapeMismatch
from .dicke import sector_dimension
from .operators import Operator, build_operators, check_backend, layout
from .register import TOLERANCES, Backend, Register, Tolerances

log = logging.getLogger("starspin")

TARGETS = ("central", "ancillas", "both")


@dataclass(frozen=True, eq=False)
class DickeBlock:
    """One ancilla sector: total spin j, its multiplicity and the shared matrix."""

    j: float
    multiplicity: int
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class CollectiveState:
    """Block-diagonal density operator over central x ancilla Dicke sectors."""

    blocks: Tuple[DickeBlock, ...]
    register: Register
    backend: ClassVar[Backend] = Backend.SYMMETRIC

    @property
    def matrices(self) -> Tuple[np.ndarray, ...]:
        return tuple(block.matrix for block in self.blocks)

    @property
    def weights(self) -> np.ndarray:
        return np.array([block.multiplicity for block in self.blocks], dtype=float)

    def with_matrices(self, matrices: Sequence[np.ndarray]) -> "CollectiveState":
        return CollectiveState(
            tuple(DickeBlock(b.j, b.multiplicity, m) for b, m in zip(self.blocks, matrices)),
            self.register,
        )


@dataclass(frozen=True, eq=False)
class DenseState:
    """Full 2^N density operator."""

    matrix: np.ndarray
    register: Register
    backend: ClassVar[Backend] = Backend.DENSE

    @property
    def matrices(self) -> Tuple[np.ndarray, ...]:
        return (self.matrix,)

    @property
    def weights(self) -> np.ndarray:
        return np.ones(1)

    def with_matrices(self, matrices: Sequence[np.ndarray]) -> "DenseState":
        return DenseState(matrices[0], self.register)


State = Union[CollectiveState, DenseState]


def make_state(register: Register, backend: Union[str, Backend], matrices: Sequence[np.ndarray]) -> State:
    """Wrap per-block matrices (in ``layout`` order) into a state."""
    backend = check_backend(register, backend)
    matrices = [np.asarray(m, dtype=complex) for m in matrices]
    if backend is Backend.DENSE:
        dim = 2 ** register.n_total
        if len(matrices) != 1 or matrices[0].shape != (dim, dim):
            raise ShapeMismatch(f"dense state needs one {dim}x{dim} matrix")
        return DenseState(matrices[0], register)
    sectors = layout(register, backend)
    if len(matrices) != len(sectors):
        raise ShapeMismatch(f"expected {len(sectors)} blocks, got {len(matrices)}")
    blocks = []
    for (j, d), matrix in zip(sectors, matrices):
        dim = 2 * sector_dimension(j)
        if matrix.shape != (dim, dim):
            raise ShapeMismatch(f"block j={j} must be {dim}x{dim}, got {matrix.shape}")
        blocks.append(DickeBlock(j, d, matrix))
    return CollectiveState(tuple(blocks), register)


def trace(state: State) -> float:
    return float(sum(w * np.trace(m).real for w, m in zip(state.weights, state.matrices)))


def purity(state: State) -> float:
    """Tr(rho^2) summed over sector copies."""
    return float(
        sum(w * np.vdot(m, m).real for w, m in zip(state.weights, state.matrices))
    )


def validate_state(state: State, tol: Tolerances = TOLERANCES) -> None:
    """Check trace, Hermiticity and positivity.

    Raises:
        InvalidState: If any check fails
    """
    total = trace(state)
    if abs(total - 1) > tol.trace:
        raise InvalidState(f"trace is {total:.12g}, expected 1")
    for matrix in state.matrices:
        if not np.allclose(matrix, matrix.conj().T, atol=tol.hermitian, rtol=0):
            raise InvalidState("density matrix is not Hermitian")
        smallest = linalg.eigvalsh(matrix)[0] if matrix.size else 0.0
        if smallest < tol.psd_floor:
            raise InvalidState(f"density matrix has negative eigenvalue {smallest:.3e}")


def state_from_generator(generator: Operator) -> State:
    """Normalized exp(-G) for a Hermitian generator G."""
    shift = min(float(w.min()) for w, _ in generator.spectrum)
    matrices = [(v * np.exp(-(w - shift))) @ v.conj().T for w, v in generator.spectrum]
    norm = sum(d * np.trace(m).real for d, m in zip(generator.weights, matrices))
    return make_state(generator.register, generator.backend, [m / norm for m in matrices])


def ground_state(register: Register, backend: Union[str, Backend]) -> State:
    """All spins in |0> (spin up)."""
    backend = check_backend(register, backend)
    matrices = [np.zeros_like(b) for b in build_operators(register, backend).identity.blocks]
    # |0>_C |j=n/2, m=j> is the first basis vector of the first block
    matrices[0][0, 0] = 1.0
    return make_state(register, backend, matrices)


def _check_compatible(state: State, op: Operator) -> None:
    if state.backend is not op.backend or state.register != op.register:
        raise ShapeMismatch(
            f"state ({state.backend.value}) and operator ({op.backend.value}) do not share register and backend"
        )


def apply_unitary(state: State, unitary: Operator) -> State:
    """U rho U^dagger block by block."""
    _check_compatible(state, unitary)
    return state.with_matrices([u @ m @ u.conj().T for u, m in zip(unitary.blocks, state.matrices)])


def evolve(state: State, hamiltonian: Operator, duration: float) -> State:
    """Exact propagation under a time-independent Hamiltonian.

    Raises:
        ShapeMismatch: If state and Hamiltonian differ in register or backend
    """
    _check_compatible(state, hamiltonian)
    if duration == 0:
        return state
    return apply_unitary(state, hamiltonian.propagator(duration))


def rotation_generator(
    register: Register, backend: Backend, axis: Sequence[float], target: str
) -> Operator:
    """n.I on the selected spin family."""
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,) or abs(np.linalg.norm(axis) - 1) > 1e-12:
        raise InvalidParameter(f"rotation axis must be a unit 3-vector, got {axis.tolist()}")
    if target not in TARGETS:
        raise InvalidParameter(f"rotation target must be one of {TARGETS}, got '{target}'")
    ops = build_operators(register, backend)
    if target == "central":
        return ops.central(axis)
    if target == "ancillas":
        return ops.ancillas(axis)
    return ops.central(axis) + ops.ancillas(axis)


def rotation(register: Register, backend: Backend, axis: Sequence[float], angle: float, target: str) -> Operator:
    """exp(-i angle n.I) on the selected family."""
    return rotation_generator(register, backend, axis, target).propagator(angle)


def collective_rotation(state: State, axis: Sequence[float], angle: float, target: str = "both") -> State:
    """Rotate the central spin, the ancillas, or both, by ``angle`` about ``axis``."""
    return apply_unitary(state, rotation(state.register, state.backend, axis, angle, target))


def expectation(state: State, op: Operator, tol: Tolerances = TOLERANCES) -> float:
    """<O> = sum_j d_j Tr(rho_j O_j).

    Raises:
        NonHermitianObservable: If O is not Hermitian or the result keeps an imaginary part
    """
    _check_compatible(state, op)
    if not op.is_hermitian(tol.hermitian):
        raise NonHermitianObservable("observable is not Hermitian")
    value = sum(
        w * np.einsum("ij,ji->", m, o) for w, m, o in zip(state.weights, state.matrices, op.blocks)
    )
    if abs(value.imag) > tol.hermitian:
        raise NonHermitianObservable(f"expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)


def central_marginal(state: State) -> np.ndarray:
    """Reduced 2x2 density matrix of the central spin."""
    reduced = np.zeros((2, 2), dtype=complex)
    for w, matrix in zip(state.weights, state.matrices):
        half = matrix.shape[0] // 2
        reduced += w * np.trace(matrix.reshape(2, half, 2, half), axis1=1, axis2=3)
    return reduced
