"""
High-temperature thermal states and subspace populations.
"""

import logging
from typing import Tuple, Union

from scipy.special import comb

from ..core.operators import build_operators
from ..core.register import Backend, Register
from ..core.states import State, make_state, state_from_generator
from ..utils.errors import IndexOutOfRange

log = logging.getLogger("starspin")


def thermal_state(register: Register, backend: Union[str, Backend], exact: bool = False) -> State:
    """Thermal equilibrium state of the register.

    The default is the first-order expansion
    rho = (1 + 2 eps_C I_z^C + 2 eps_A I_z^A) / 2^N. With ``exact`` the
    normalized operator exp(2 eps_C I_z^C + 2 eps_A I_z^A) is returned; it
    has per-spin polarization tanh(eps), matching the expansion to first order.

    Raises:
        BackendLimit: If dense is requested for N > 14
    """
    ops = build_operators(register, backend)
    if exact:
        return state_from_generator(-2.0 * (register.epsilon_c * ops.iz_c + register.epsilon_a * ops.iz_a))
    deviation = ops.identity + (2 * register.epsilon_c) * ops.iz_c + (2 * register.epsilon_a) * ops.iz_a
    scale = 2.0 ** -register.n_total
    return make_state(register, ops.backend, [scale * block for block in deviation.blocks])


def subspace_populations(register: Register, h: int) -> Tuple[float, float]:
    """(p_0h, p_1h): total population of the h-th ancilla subspace with the central spin up/down.

    Raises:
        IndexOutOfRange: If h is not in 0..N-1
    """
    if not 0 <= h < register.n_total:
        raise IndexOutOfRange(f"subspace index h={h} outside 0..{register.n_total - 1}")
    degeneracy = float(comb(register.n_ancilla, h, exact=True))
    m_h = register.m_h(h)
    scale = degeneracy / 2.0 ** register.n_total
    p0 = scale * (1 + register.epsilon_c + 2 * m_h * register.epsilon_a)
    p1 = scale * (1 - register.epsilon_c + 2 * m_h * register.epsilon_a)
    if min(p0, p1) < 0:
        log.warning(f"first-order population of subspace h={h} is negative; epsilon is too large for the expansion")
    return p0, p1
