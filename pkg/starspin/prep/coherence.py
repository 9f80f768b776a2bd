"""
Coherence-order bookkeeping.

An element |a><b| has order q = M(a) - M(b), the difference of total I_z
(equivalently Hamming(b) - Hamming(a)). Elements that flip the central spin
are taken with central |0> on the ket side, so the NOON coherence has order
+N and MSSM orders run N, N-2, ..., -N+2; elements that keep the central
spin are taken with q > 0. The conjugate element of each piece is implied.

The weight of order q is the population on the support of its piece (the
span of the left and right singular vectors), which for MSSM mixtures is
p_0h + p_1h of the source subspace. Whatever population is not attached to
any coherence is reported as ``p_diag`` and belongs to the q = 0 sector.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import linalg
from scipy.special import comb

from ..core.operators import total_iz_diagonal
from ..core.register import TOLERANCES, Register, Tolerances
from ..core.states import State
from ..utils.errors import InvalidParameter, NoSuchOrder
from .thermal import subspace_populations

log = logging.getLogger("starspin")


@dataclass(frozen=True)
class CoherenceDecomposition:
    """Weight and normalized component per coherence order present in the state."""

    entries: Dict[int, Tuple[float, State]] = field(default_factory=dict)
    p_diag: float = 1.0

    def weights(self) -> Dict[int, float]:
        return {q: weight for q, (weight, _) in self.entries.items()}

    def weight(self, q: int) -> float:
        """Weight of order q; order 0 also holds the diagonal population."""
        weight = self.entries[q][0] if q in self.entries else 0.0
        return weight + self.p_diag if q == 0 else weight

    def sectors(self) -> Dict[int, float]:
        """Every populated order with its weight, q = 0 included, highest first."""
        sectors = self.weights()
        if 0 in sectors or self.p_diag > TOLERANCES.probability_floor:
            sectors[0] = self.weight(0)
        return {q: sectors[q] for q in sorted(sectors, reverse=True)}

    def orders(self) -> List[int]:
        """Populated orders, highest first."""
        return sorted(self.entries, reverse=True)

    def component(self, q: int) -> Optional[State]:
        return self.entries[q][1] if q in self.entries else None


def _check_order(register: Register, q: float) -> int:
    if float(q) != int(q) or abs(int(q)) > register.n_total:
        raise NoSuchOrder(f"coherence order {q} is not reachable with N={register.n_total} spins")
    return int(q)


def _order_masks(t: np.ndarray, q: int) -> np.ndarray:
    """Entries of the oriented order-q piece."""
    half = t.size // 2
    central = np.repeat([0, 1], half)
    diff = t[:, None] - t[None, :]
    at_order = np.abs(diff - q) < 1e-9
    mask = at_order & (central[:, None] == 0) & (central[None, :] == 1)
    if q > 0:
        mask |= at_order & (central[:, None] == central[None, :])
    return mask


def _same_level(t: np.ndarray) -> np.ndarray:
    half = t.size // 2
    central = np.repeat([0, 1], half)
    return (np.abs(t[:, None] - t[None, :]) < 1e-9) & (central[:, None] == central[None, :])


def _support(piece: np.ndarray, threshold: float) -> Optional[np.ndarray]:
    """Projector onto the span of the left and right singular vectors above ``threshold``."""
    dim = piece.shape[0]
    significant = np.abs(piece) > threshold
    rows = np.flatnonzero(significant.any(axis=1))
    cols = np.flatnonzero(significant.any(axis=0))
    if rows.size == 0:
        return None
    u, s, vh = linalg.svd(piece[np.ix_(rows, cols)], full_matrices=False)
    keep = s > threshold
    if not keep.any():
        return None
    left = np.zeros((dim, int(keep.sum())), dtype=complex)
    right = np.zeros_like(left)
    left[rows] = u[:, keep]
    right[cols] = vh[keep].conj().T
    basis = linalg.orth(np.hstack([left, right]))
    return basis @ basis.conj().T


def _threshold(state: State, tol: Tolerances) -> float:
    largest = max(float(np.abs(np.diag(m)).max()) for m in state.matrices)
    return tol.coherence_floor * largest


def _filter_blocks(state: State, q: int, threshold: float) -> Tuple[List[np.ndarray], float]:
    diagonals = total_iz_diagonal(state.register, state.backend)
    blocks = []
    weight = 0.0
    for d, matrix, t in zip(state.weights, state.matrices, diagonals):
        mask = _order_masks(t, q)
        projector = _support(np.where(mask, matrix, 0), threshold)
        if projector is None:
            blocks.append(np.zeros_like(matrix))
            continue
        restricted = projector @ matrix @ projector
        keep = mask | mask.T | _same_level(t)
        filtered = np.where(keep, restricted, 0)
        blocks.append(filtered)
        weight += d * float(np.trace(filtered).real)
    return blocks, weight


def coherence_filter(state: State, q: int, tol: Tolerances = TOLERANCES) -> State:
    """Idealized gradient filter selecting coherence order ``q``.

    Returns the state restricted to the support of the order-q piece, keeping
    the order-q coherences and the populations inside that support. The trace
    of the result is p_q; an order the state does not carry gives zero.

    Raises:
        NoSuchOrder: If q is not an integer with |q| <= N
    """
    q = _check_order(state.register, q)
    blocks, _ = _filter_blocks(state, q, _threshold(state, tol))
    return state.with_matrices(blocks)


def coherence_decompose(state: State, tol: Tolerances = TOLERANCES) -> CoherenceDecomposition:
    """Resolve ``state`` into weighted, normalized components per coherence order."""
    n = state.register.n_total
    threshold = _threshold(state, tol)
    entries = {}
    for q in range(n, -n - 1, -1):
        blocks, weight = _filter_blocks(state, q, threshold)
        if weight <= tol.probability_floor:
            continue
        entries[q] = (weight, state.with_matrices([b / weight for b in blocks]))
    total = sum(weight for weight, _ in entries.values())
    if total > 1 + tol.trace:
        log.warning(f"coherence supports overlap (total weight {total:.6g}); p_diag clipped at 0")
    log.debug(f"coherence orders present: {sorted(entries, reverse=True)}")
    return CoherenceDecomposition(entries=entries, p_diag=max(0.0, 1.0 - total))


def pascal_weights(n_total: int) -> Dict[int, int]:
    """P(q_h) = C(N-1, h) at q_h = N - 2h."""
    if n_total < 2:
        raise InvalidParameter(f"Pascal weights need N >= 2, got {n_total}")
    return {n_total - 2 * h: int(comb(n_total - 1, h, exact=True)) for h in range(n_total)}


def mssm_weights(register: Register) -> Dict[int, float]:
    """Closed-form MSSM weights p_{q_h} = p_0h + p_1h after preparing from the thermal state."""
    weights = {}
    for h in range(register.n_total):
        p0, p1 = subspace_populations(register, h)
        weights[register.n_total - 2 * h] = p0 + p1
    return weights
