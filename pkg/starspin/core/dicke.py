"""
Dicke-block bookkeeping for the ancilla register.

n spin-1/2 ancillas decompose into total-spin sectors j = n/2, n/2 - 1, ...
down to 0 or 1/2. Sector j appears d_j times (Schur-Weyl multiplicity) and
every collective operator acts identically on each copy, so one
(2j+1)-dimensional matrix per sector describes the whole register.
Basis order inside a sector is m = j, j-1, ..., -j.
"""

from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.special import comb


def ancilla_spins(n_ancilla: int) -> Tuple[float, ...]:
    """Total-spin values j present for ``n_ancilla`` spins, largest first."""
    top = n_ancilla / 2
    return tuple(top - k for k in range(n_ancilla // 2 + 1))


def multiplicity(n_ancilla: int, j: float) -> int:
    """Number of copies d_j of sector j."""
    k = int(round(n_ancilla / 2 - j))
    if k < 0 or k > n_ancilla // 2:
        return 0
    lower = int(comb(n_ancilla, k - 1, exact=True)) if k >= 1 else 0
    return int(comb(n_ancilla, k, exact=True)) - lower


def sector_dimension(j: float) -> int:
    return int(round(2 * j + 1))


@lru_cache(maxsize=None)
def spin_matrices(j: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(J_x, J_y, J_z) for spin j in the m = j..-j basis."""
    dim = sector_dimension(j)
    m = j - np.arange(dim)
    jz = np.diag(m).astype(complex)
    jp = np.zeros((dim, dim), dtype=complex)
    # <m+1| J+ |m> = sqrt((j - m)(j + m + 1)); |m+1> sits one index above |m>
    for k in range(1, dim):
        jp[k - 1, k] = np.sqrt((j - m[k]) * (j + m[k] + 1))
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    for matrix in (jx, jy, jz):
        matrix.setflags(write=False)
    return jx, jy, jz


@lru_cache(maxsize=None)
def block_layout(n_ancilla: int) -> Tuple[Tuple[float, int], ...]:
    """(j, d_j) for every sector, largest j first."""
    return tuple((j, multiplicity(n_ancilla, j)) for j in ancilla_spins(n_ancilla))
