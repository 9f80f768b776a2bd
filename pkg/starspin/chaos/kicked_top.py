"""
Kicked-top chaos in the star register.

Each period applies a pi/2 kick about x to every spin and then lets the
central-ancilla coupling act for tau:

    U = exp(-i k I_z^C I_z^A) exp(-i (pi/2) I_x^total),   k = 2 pi J tau

Spin-coherent product states are symmetric under ancilla permutations, so
they evolve as pure vectors inside the maximal-j block. The entanglement
diagnostic is the von Neumann entropy of the central spin, in bits.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import comb

from ..core.operators import Operator, build_operators, check_backend
from ..core.register import Backend, Register, build_register
from ..core.states import State, apply_unitary, central_marginal, collective_rotation, make_state
from ..prep.thermal import thermal_state
from ..utils.errors import InvalidParameter

log = logging.getLogger("starspin")

ENTROPY_BASE = 2
# eigenvalues below this contribute nothing (x log x -> 0)
EIGENVALUE_FLOOR = 1e-14
DEFAULT_GRID = 64


@dataclass(frozen=True)
class KickedTopSpec:
    """Kick strength k, coupling J (Hz), kick count and trailing average window."""

    chaoticity: float
    j_ca: float = 50.0
    n_kicks: int = 200
    average_window: int = 100
    theta: float = math.pi / 2
    phi: float = math.pi / 2

    def validate(self) -> None:
        if not (self.chaoticity >= 0 and math.isfinite(self.chaoticity)):
            raise InvalidParameter(f"chaoticity must be non-negative, got {self.chaoticity}")
        if not self.j_ca > 0:
            raise InvalidParameter(f"coupling must be positive, got {self.j_ca}")
        if not self.n_kicks >= self.average_window >= 1:
            raise InvalidParameter(
                f"need n_kicks >= average_window >= 1, got {self.n_kicks} and {self.average_window}"
            )

    @property
    def tau(self) -> float:
        """Free-evolution time per kick, k / (2 pi J)."""
        return self.chaoticity / (2 * math.pi * self.j_ca)

    def replace(self, **changes) -> "KickedTopSpec":
        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class EntropyMap:
    """Trailing-window mean central entropy on a (theta, phi) lattice."""

    thetas: np.ndarray
    phis: np.ndarray
    chaoticity: float
    values: np.ndarray
    base: int = ENTROPY_BASE

    def rows(self) -> List[Tuple[float, float, float, float]]:
        return [
            (float(t), float(p), self.chaoticity, float(self.values[i, k]))
            for i, t in enumerate(self.thetas)
            for k, p in enumerate(self.phis)
        ]


def default_grid(size: int = DEFAULT_GRID) -> Tuple[np.ndarray, np.ndarray]:
    """theta over [0, pi] inclusive, phi over [0, 2 pi) exclusive."""
    return np.linspace(0.0, math.pi, size), 2 * math.pi * np.arange(size) / size


def kicked_top_step(register: Register, spec: KickedTopSpec, backend: Union[str, Backend] = Backend.SYMMETRIC) -> Operator:
    """One kick followed by coupling evolution for tau.

    Raises:
        BackendLimit: If dense is requested for N > 14
    """
    spec.validate()
    ops = build_operators(register, backend)
    kick = (ops.ix_c + ops.ix_a).propagator(math.pi / 2)
    coupling = (spec.chaoticity * (ops.iz_c @ ops.iz_a)).propagator(1.0)
    return coupling @ kick


def _qubit(theta: float, phi: float) -> np.ndarray:
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])


def coherent_vector(register: Register, theta: float, phi: float, backend: Backend) -> np.ndarray:
    """State vector of every spin along (theta, phi), in the first block's basis."""
    single = _qubit(theta, phi)
    if backend is Backend.DENSE:
        vector = single
        for _ in range(register.n_ancilla):
            vector = np.kron(vector, single)
        return vector
    n = register.n_ancilla
    k = np.arange(n + 1)
    # |j=n/2, m=n/2-k> amplitudes of the symmetric product
    ancilla = np.sqrt(comb(n, k)) * single[0] ** (n - k) * single[1] ** k
    return np.kron(single, ancilla)


def coherent_product_state(
    register: Register, theta: float, phi: float, backend: Union[str, Backend] = Backend.SYMMETRIC
) -> State:
    """Density operator of the spin-coherent product state at (theta, phi)."""
    if not 0 <= theta <= math.pi:
        raise InvalidParameter(f"theta must lie in [0, pi], got {theta}")
    backend = check_backend(register, backend)
    vector = coherent_vector(register, theta, phi % (2 * math.pi), backend)
    matrices = [np.zeros_like(b) for b in build_operators(register, backend).identity.blocks]
    matrices[0] = np.outer(vector, vector.conj())
    return make_state(register, backend, matrices)


def _entropy(reduced: np.ndarray) -> np.ndarray:
    """Entropy in bits of a stack of 2x2 density matrices."""
    p = np.linalg.eigvalsh(reduced)
    terms = np.where(p > EIGENVALUE_FLOOR, -p * np.log2(np.maximum(p, EIGENVALUE_FLOOR)), 0.0)
    return np.clip(terms.sum(axis=-1), 0.0, 1.0)


def central_entropy(state: State) -> float:
    """-Tr rho_C log2 rho_C of the reduced central spin."""
    return float(_entropy(central_marginal(state)))


def _vector_entropies(vectors: np.ndarray) -> np.ndarray:
    """Central entropy of each column of a (dim, cells) array of pure states."""
    half = vectors.shape[0] // 2
    split = vectors.reshape(2, half, -1)
    reduced = np.einsum("amk,bmk->kab", split, split.conj())
    return _entropy(reduced)


def _evolve_vectors(unitary: np.ndarray, vectors: np.ndarray, n_kicks: int) -> np.ndarray:
    """(n_kicks, cells) central entropies after each kick."""
    history = np.empty((n_kicks, vectors.shape[1]))
    for n in range(n_kicks):
        vectors = unitary @ vectors
        history[n] = _vector_entropies(vectors)
    return history


def entropy_series(
    register: Register,
    spec: KickedTopSpec,
    theta: Optional[float] = None,
    phi: Optional[float] = None,
    backend: Union[str, Backend] = Backend.SYMMETRIC,
    thermal: bool = False,
) -> np.ndarray:
    """Central entropy after kicks 1..n_kicks starting from (theta, phi).

    With ``thermal`` the thermal state, rotated so its polarization points
    along (theta, phi), is evolved as a density matrix instead.
    """
    theta = spec.theta if theta is None else theta
    phi = spec.phi if phi is None else phi
    backend = check_backend(register, backend)
    unitary = kicked_top_step(register, spec, backend)
    if thermal:
        state = collective_rotation(thermal_state(register, backend), (-math.sin(phi), math.cos(phi), 0.0), theta)
        series = np.empty(spec.n_kicks)
        for n in range(spec.n_kicks):
            state = apply_unitary(state, unitary)
            series[n] = central_entropy(state)
        return series
    if not 0 <= theta <= math.pi:
        raise InvalidParameter(f"theta must lie in [0, pi], got {theta}")
    vector = coherent_vector(register, theta, phi % (2 * math.pi), backend)
    return _evolve_vectors(unitary.blocks[0], vector[:, None], spec.n_kicks)[:, 0]


def phase_space_map(
    register: Register,
    spec: KickedTopSpec,
    thetas: Optional[Sequence[float]] = None,
    phis: Optional[Sequence[float]] = None,
    backend: Union[str, Backend] = Backend.SYMMETRIC,
) -> EntropyMap:
    """Mean central entropy over the trailing window, for every grid cell."""
    grid_theta, grid_phi = default_grid()
    thetas = grid_theta if thetas is None else np.asarray(thetas, dtype=float)
    phis = grid_phi if phis is None else np.asarray(phis, dtype=float)
    if thetas.size == 0 or phis.size == 0:
        raise InvalidParameter("phase-space grid is empty")
    if thetas.min() < 0 or thetas.max() > math.pi:
        raise InvalidParameter("theta grid must lie in [0, pi]")
    backend = check_backend(register, backend)
    unitary = kicked_top_step(register, spec, backend).blocks[0]
    vectors = np.stack(
        [coherent_vector(register, t, p % (2 * math.pi), backend) for t in thetas for p in phis], axis=1
    )
    history = _evolve_vectors(unitary, vectors, spec.n_kicks)
    values = history[-spec.average_window:].mean(axis=0).reshape(thetas.size, phis.size)
    log.info(f"entropy map k={spec.chaoticity:g}: {values.size} cells, mean {values.mean():.4f} bits")
    return EntropyMap(thetas=thetas, phis=phis, chaoticity=float(spec.chaoticity), values=values)


def size_sweep(
    register: Register,
    spec: KickedTopSpec,
    ancilla_counts: Sequence[int],
    backend: Union[str, Backend] = Backend.SYMMETRIC,
) -> List[Tuple[float, float, float, float]]:
    """Rows (n_ancilla, parity, mean_entropy, osc_amplitude); parity 1 is odd.

    ``osc_amplitude`` is the standard deviation of the entropy over the
    trailing window.
    """
    rows = []
    for count in ancilla_counts:
        if count < 1:
            raise InvalidParameter(f"ancilla count must be at least 1, got {count}")
        sized = build_register(register.spec.replace(n_total=int(count) + 1))
        trailing = entropy_series(sized, spec, backend=backend)[-spec.average_window:]
        rows.append((float(count), float(count % 2), float(trailing.mean()), float(trailing.std())))
        log.debug(f"kicked top with {count} ancillas: mean entropy {rows[-1][2]:.4f}")
    return rows
