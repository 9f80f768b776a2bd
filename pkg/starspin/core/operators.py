"""
Operators on a star register in either backend.

An ``Operator`` is a tuple of matrices, one per block. The symmetric backend
has one block per ancilla sector j, over the basis |c> x |j, m> (central index
outer); the dense backend has a single 2^N block with the central spin as the
most significant qubit. Spin operators are I = sigma/2 and |0> is spin up.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg, sparse
from scipy.special import comb

from ..utils.constants import DENSE_LIMIT
from ..utils.errors import BackendLimit, ShapeMismatch, SymmetryViolation
from .dicke import block_layout, sector_dimension, spin_matrices
from .register import TOLERANCES, Backend, Register, RotatingFrameParams, as_backend

log = logging.getLogger("starspin")

HALF_SPIN = {
    "x": np.array([[0, 0.5], [0.5, 0]], dtype=complex),
    "y": np.array([[0, -0.5j], [0.5j, 0]], dtype=complex),
    "z": np.array([[0.5, 0], [0, -0.5]], dtype=complex),
}
_AXES = ("x", "y", "z")


def check_backend(register: Register, backend: Union[str, Backend]) -> Backend:
    """Resolve ``backend`` and enforce the dense size cap.

    Raises:
        BackendLimit: If dense is requested for N > 14
    """
    backend = as_backend(backend)
    if backend is Backend.DENSE and register.n_total > DENSE_LIMIT:
        raise BackendLimit(
            f"dense backend is limited to N <= {DENSE_LIMIT} spins, register has N={register.n_total}"
        )
    return backend


def layout(register: Register, backend: Backend) -> Tuple[Tuple[Optional[float], int], ...]:
    """(j, multiplicity) per block; the dense backend has one block with j=None."""
    if backend is Backend.DENSE:
        return ((None, 1),)
    return block_layout(register.n_ancilla)


def block_weights(register: Register, backend: Backend) -> np.ndarray:
    return np.array([d for _, d in layout(register, backend)], dtype=float)


@dataclass(frozen=True, eq=False)
class Operator:
    """Block-diagonal operator bound to a register and backend."""

    register: Register
    backend: Backend
    blocks: Tuple[np.ndarray, ...]

    # numpy scalars defer to __rmul__ instead of broadcasting over the operator
    __array_ufunc__ = None

    def _same_shape(self, other: "Operator") -> None:
        if other.backend is not self.backend or other.register != self.register:
            raise ShapeMismatch("operators belong to different registers or backends")

    def _combine(self, other: "Operator", fn: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "Operator":
        self._same_shape(other)
        return Operator(self.register, self.backend, tuple(fn(a, b) for a, b in zip(self.blocks, other.blocks)))

    def __add__(self, other: "Operator") -> "Operator":
        return self._combine(other, np.add)

    def __sub__(self, other: "Operator") -> "Operator":
        return self._combine(other, np.subtract)

    def __matmul__(self, other: "Operator") -> "Operator":
        return self._combine(other, np.matmul)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.register, self.backend, tuple(scalar * b for b in self.blocks))

    __rmul__ = __mul__

    def __neg__(self) -> "Operator":
        return self * -1.0

    def adjoint(self) -> "Operator":
        return Operator(self.register, self.backend, tuple(b.conj().T for b in self.blocks))

    def is_hermitian(self, tol: float = TOLERANCES.hermitian) -> bool:
        return all(np.allclose(b, b.conj().T, atol=tol, rtol=0) for b in self.blocks)

    @property
    def weights(self) -> np.ndarray:
        return block_weights(self.register, self.backend)

    @cached_property
    def spectrum(self) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
        """Per-block (eigenvalues, eigenvectors) of the Hermitian part."""
        return tuple(linalg.eigh((b + b.conj().T) / 2) for b in self.blocks)

    def eigenvalues(self) -> np.ndarray:
        """Sorted eigenvalue multiset of the full operator, multiplicities expanded."""
        values = [np.repeat(w, int(d)) for (w, _), d in zip(self.spectrum, self.weights)]
        return np.sort(np.concatenate(values))

    def propagator(self, duration: float) -> "Operator":
        """exp(-i H t) for Hermitian H via the cached eigendecomposition."""
        blocks = tuple(
            (v * np.exp(-1j * w * duration)) @ v.conj().T for w, v in self.spectrum
        )
        return Operator(self.register, self.backend, blocks)

    def power(self, n: int) -> "Operator":
        return Operator(
            self.register, self.backend, tuple(np.linalg.matrix_power(b, n) for b in self.blocks)
        )

    def is_unitary(self, tol: float = TOLERANCES.hermitian) -> bool:
        return all(
            np.allclose(b @ b.conj().T, np.eye(b.shape[0]), atol=tol, rtol=0) for b in self.blocks
        )

    @property
    def matrix(self) -> np.ndarray:
        """The full matrix; dense backend only."""
        if self.backend is not Backend.DENSE:
            raise SymmetryViolation("the symmetric backend stores blocks, not a full matrix")
        return self.blocks[0]


def _dense_single(n_total: int, qubit: int, op: np.ndarray) -> sparse.csr_matrix:
    left = sparse.identity(2 ** qubit, format="csr", dtype=complex)
    right = sparse.identity(2 ** (n_total - 1 - qubit), format="csr", dtype=complex)
    return sparse.kron(sparse.kron(left, sparse.csr_matrix(op)), right, format="csr")


def from_blocks(register: Register, backend: Backend, blocks: Sequence[np.ndarray]) -> Operator:
    return Operator(register, backend, tuple(np.asarray(b, dtype=complex) for b in blocks))


def identity(register: Register, backend: Union[str, Backend]) -> Operator:
    backend = check_backend(register, backend)
    if backend is Backend.DENSE:
        return from_blocks(register, backend, [np.eye(2 ** register.n_total)])
    return from_blocks(
        register, backend, [np.eye(2 * sector_dimension(j)) for j, _ in layout(register, backend)]
    )


def central_operator(register: Register, backend: Union[str, Backend], op: np.ndarray) -> Operator:
    """Lift a 2x2 matrix acting on the central spin."""
    backend = check_backend(register, backend)
    if backend is Backend.DENSE:
        return from_blocks(register, backend, [np.kron(op, np.eye(2 ** register.n_ancilla))])
    return from_blocks(
        register,
        backend,
        [np.kron(op, np.eye(sector_dimension(j))) for j, _ in layout(register, backend)],
    )


def ancilla_operator(register: Register, backend: Union[str, Backend], axis: str) -> Operator:
    """Collective ancilla spin I^A_axis = sum_k I^{A,k}_axis."""
    backend = check_backend(register, backend)
    index = _AXES.index(axis)
    if backend is Backend.DENSE:
        n = register.n_total
        total = sparse.csr_matrix((2 ** n, 2 ** n), dtype=complex)
        for qubit in range(1, n):
            total = total + _dense_single(n, qubit, HALF_SPIN[axis])
        return from_blocks(register, backend, [total.toarray()])
    return from_blocks(
        register,
        backend,
        [np.kron(np.eye(2), spin_matrices(j)[index]) for j, _ in layout(register, backend)],
    )


def spin_operator(register: Register, qubit: int, axis: str, backend: Union[str, Backend]) -> Operator:
    """I_axis of a single spin (qubit 0 is the central spin); dense backend only.

    Raises:
        SymmetryViolation: On the symmetric backend
    """
    backend = check_backend(register, backend)
    if backend is not Backend.DENSE:
        raise SymmetryViolation("single-ancilla operators break permutation symmetry; use the dense backend")
    if not 0 <= qubit < register.n_total:
        raise ShapeMismatch(f"qubit {qubit} outside register of {register.n_total} spins")
    return from_blocks(register, backend, [_dense_single(register.n_total, qubit, HALF_SPIN[axis]).toarray()])


def ancilla_projector(register: Register, m: float, backend: Union[str, Backend]) -> Operator:
    """Projector onto collective ancilla magnetization I_z^A = m."""
    backend = check_backend(register, backend)
    if backend is Backend.DENSE:
        diagonal = np.isclose(np.diag(ancilla_operator(register, backend, "z").matrix).real, m)
        return from_blocks(register, backend, [np.diag(diagonal.astype(complex))])
    blocks = []
    for j, _ in layout(register, backend):
        levels = j - np.arange(sector_dimension(j))
        blocks.append(np.kron(np.eye(2), np.diag(np.isclose(levels, m).astype(complex))))
    return from_blocks(register, backend, blocks)


def total_iz_diagonal(register: Register, backend: Backend) -> List[np.ndarray]:
    """Diagonal of I_z^C + I_z^A per block (all bases are I_z eigenbases)."""
    if backend is Backend.DENSE:
        n = register.n_total
        ones = np.array([bin(i).count("1") for i in range(2 ** n)])
        return [n / 2 - ones]
    diagonals = []
    for j, _ in layout(register, backend):
        m = j - np.arange(sector_dimension(j))
        diagonals.append(np.concatenate([0.5 + m, -0.5 + m]))
    return diagonals


@dataclass(frozen=True)
class OperatorSet:
    """Central and collective ancilla spin operators in one representation."""

    backend: Backend
    identity: Operator
    ix_c: Operator
    iy_c: Operator
    iz_c: Operator
    ix_a: Operator
    iy_a: Operator
    iz_a: Operator

    def central(self, axis: Sequence[float]) -> Operator:
        return axis[0] * self.ix_c + axis[1] * self.iy_c + axis[2] * self.iz_c

    def ancillas(self, axis: Sequence[float]) -> Operator:
        return axis[0] * self.ix_a + axis[1] * self.iy_a + axis[2] * self.iz_a


@lru_cache(maxsize=32)
def build_operators(register: Register, backend: Union[str, Backend]) -> OperatorSet:
    """All central and collective ancilla spin operators for ``register``."""
    backend = check_backend(register, backend)
    log.debug(f"building {backend.value} operators for N={register.n_total}")
    return OperatorSet(
        backend=backend,
        identity=identity(register, backend),
        ix_c=central_operator(register, backend, HALF_SPIN["x"]),
        iy_c=central_operator(register, backend, HALF_SPIN["y"]),
        iz_c=central_operator(register, backend, HALF_SPIN["z"]),
        ix_a=ancilla_operator(register, backend, "x"),
        iy_a=ancilla_operator(register, backend, "y"),
        iz_a=ancilla_operator(register, backend, "z"),
    )


def static_hamiltonian(register: Register, backend: Union[str, Backend]) -> Operator:
    """H0 = w_C I_z^C + w_A I_z^A + 2 pi J I_z^C I_z^A (rad/s).

    Raises:
        BackendLimit: If dense is requested for N > 14
    """
    ops = build_operators(register, backend)
    return (
        register.omega_c * ops.iz_c
        + register.omega_a * ops.iz_a
        + (2 * np.pi * register.j_ca) * (ops.iz_c @ ops.iz_a)
    )


def rotating_frame_hamiltonian(
    register: Register, params: RotatingFrameParams, backend: Union[str, Backend]
) -> Operator:
    """Doubly rotating frame Hamiltonian with offsets, RF amplitudes and phases."""
    ops = build_operators(register, backend)
    return (
        (-2 * np.pi * params.nu_c) * ops.iz_c
        + (-2 * np.pi * params.nu_a) * ops.iz_a
        + (2 * np.pi * register.j_ca) * (ops.iz_c @ ops.iz_a)
        + params.omega_rf_c * (np.cos(params.phi_c) * ops.ix_c + np.sin(params.phi_c) * ops.iy_c)
        + params.omega_rf_a * (np.cos(params.phi_a) * ops.ix_a + np.sin(params.phi_a) * ops.iy_a)
    )


def level_table(register: Register) -> List[Tuple[int, int, float, int]]:
    """(c, h, energy, degeneracy) of H0 by direct enumeration of the two subspaces."""
    rows = []
    coupling = np.pi * register.j_ca
    for c in (0, 1):
        for h in range(register.n_total):
            m = register.m_h(h)
            if c == 0:
                energy = register.omega_c / 2 + m * (register.omega_a + coupling)
            else:
                energy = -register.omega_c / 2 + m * (register.omega_a - coupling)
            rows.append((c, h, energy, int(comb(register.n_ancilla, h, exact=True))))
    return rows
