"""
Fisher information of correlated star probes.

The correlated probe is rho_1 = (1 + eps_A (2 I_z^C)(2 I_z^A)) / 2^N. A central
rotation by theta0 about the in-plane axis at azimuth phi0 + pi/2 tilts the
central factor toward (theta0, phi0). The Fisher information of a
measurement M is sum_i (d f_i / d theta)^2 / f_i over its outcomes, with
derivatives by symmetric finite differences.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.operators import Operator, build_operators
from ..core.register import TOLERANCES, Backend, Register, Tolerances, build_register
from ..core.states import State, apply_unitary, make_state, rotation
from ..utils.errors import (
    AllZeroProbabilities,
    DegenerateObservable,
    InvalidParameter,
    NonHermitianObservable,
    NonpositiveFisher,
)

log = logging.getLogger("starspin")

DEFAULT_FD_STEP = 1e-4

# Richardson check: relative change of F when the step is halved
RICHARDSON_LIMIT = 0.01

# largest register in the size sweeps (the biggest preset)
MAX_SWEEP_SIZE = 37


@dataclass(frozen=True)
class ProbeState:
    """Encoded probe together with the unencoded state it came from."""

    state: State
    theta0: float
    phi0: float
    epsilon_a: float
    reference: State

    def __post_init__(self) -> None:
        if not (np.isfinite(self.theta0) and np.isfinite(self.phi0)):
            raise InvalidParameter("encoding angles must be finite")


@dataclass(frozen=True)
class QfiEstimate:
    value: float
    observable: str
    fd_step: float
    richardson_delta: float = 0.0


def _deviation_state(register: Register, backend: Backend, operator: Operator, epsilon: float) -> State:
    ops = build_operators(register, backend)
    total = ops.identity + epsilon * operator
    scale = 2.0 ** -register.n_total
    return make_state(register, ops.backend, [scale * block for block in total.blocks])


def prepare_correlated_probe(
    register: Register, backend: Union[str, Backend] = Backend.SYMMETRIC, epsilon_a: Optional[float] = None
) -> ProbeState:
    """Anti-phase spin order (1 + eps_A (2 I_z^C)(2 I_z^A)) / 2^N, unencoded."""
    eps = register.epsilon_a if epsilon_a is None else epsilon_a
    ops = build_operators(register, backend)
    state = _deviation_state(register, ops.backend, 4.0 * (ops.iz_c @ ops.iz_a), eps)
    return ProbeState(state=state, theta0=0.0, phi0=0.0, epsilon_a=eps, reference=state)


def prepare_uncorrelated_probe(
    register: Register, backend: Union[str, Backend] = Backend.SYMMETRIC, epsilon_a: Optional[float] = None
) -> ProbeState:
    """Single polarized central qubit (1 + eps 2 I_z^C) / 2^N with the same purity."""
    eps = register.epsilon_a if epsilon_a is None else epsilon_a
    ops = build_operators(register, backend)
    state = _deviation_state(register, ops.backend, 2.0 * ops.iz_c, eps)
    return ProbeState(state=state, theta0=0.0, phi0=0.0, epsilon_a=eps, reference=state)


def _encoding(register: Register, backend: Backend, theta0: float, phi0: float) -> Operator:
    axis = (np.cos(phi0 + np.pi / 2), np.sin(phi0 + np.pi / 2), 0.0)
    return rotation(register, backend, axis, theta0, "central")


def encode_parameter(probe: ProbeState, theta0: float, phi0: float) -> ProbeState:
    """Rotate the central spin of the unencoded probe toward (theta0, phi0)."""
    reference = probe.reference
    unitary = _encoding(reference.register, reference.backend, theta0, phi0)
    return ProbeState(
        state=apply_unitary(reference, unitary),
        theta0=float(theta0),
        phi0=float(phi0),
        epsilon_a=probe.epsilon_a,
        reference=reference,
    )


def _tilt_direction(theta0: float, phi0: float) -> np.ndarray:
    """d/dtheta of the Bloch direction (theta, phi)."""
    return np.array([np.cos(theta0) * np.cos(phi0), np.cos(theta0) * np.sin(phi0), -np.sin(theta0)])


def sld_observable(probe: ProbeState) -> Operator:
    """(u . I^C) I_z^A, u the direction in which the central spin moves with theta.

    A heuristic member of the central-transverse x ancilla-z family, not a
    general symmetric-logarithmic-derivative solver.
    """
    ops = build_operators(probe.state.register, probe.state.backend)
    return ops.central(_tilt_direction(probe.theta0, probe.phi0)) @ ops.iz_a


def central_observable(probe: ProbeState) -> Operator:
    """u . I^C alone; the readout of the uncorrelated probe."""
    ops = build_operators(probe.state.register, probe.state.backend)
    return ops.central(_tilt_direction(probe.theta0, probe.phi0))


def _outcome_projectors(observable: Operator, tol: Tolerances) -> List[Tuple[np.ndarray, ...]]:
    """Eigenprojectors of M grouped by eigenvalue across blocks."""
    if not observable.is_hermitian(tol.hermitian):
        raise NonHermitianObservable("measurement operator is not Hermitian")
    eigen = []
    for block, (w, v) in zip(observable.blocks, observable.spectrum):
        residual = np.abs(block @ v - v * w).max() if block.size else 0.0
        if residual > 1e-8 * max(1.0, np.abs(w).max()):
            raise DegenerateObservable(f"eigendecomposition residual {residual:.3e} exceeds tolerance")
        eigen.append((w, v))
    values = np.sort(np.concatenate([w for w, _ in eigen]))
    scale = max(1.0, float(np.abs(values).max()))
    levels = [values[0]]
    for value in values[1:]:
        if value - levels[-1] > 1e-9 * scale:
            levels.append(value)
    projectors = []
    for level in levels:
        per_block = []
        for w, v in eigen:
            selected = v[:, np.abs(w - level) <= 1e-9 * scale]
            per_block.append(selected @ selected.conj().T)
        projectors.append(tuple(per_block))
    return projectors


def _probabilities(state: State, projectors) -> np.ndarray:
    return np.array([
        sum(d * np.einsum("ij,ji->", m, p).real for d, m, p in zip(state.weights, state.matrices, proj))
        for proj in projectors
    ])


def outcome_probabilities(probe: ProbeState, observable: Operator, tol: Tolerances = TOLERANCES) -> np.ndarray:
    """Probability of each distinct eigenvalue of ``observable`` on the encoded probe, lowest first."""
    return _probabilities(probe.state, _outcome_projectors(observable, tol))


def _fisher(probe: ProbeState, projectors, step: float, floor: float) -> Tuple[float, np.ndarray]:
    centre = _probabilities(probe.state, projectors)
    plus = _probabilities(encode_parameter(probe, probe.theta0 + step, probe.phi0).state, projectors)
    minus = _probabilities(encode_parameter(probe, probe.theta0 - step, probe.phi0).state, projectors)
    derivative = (plus - minus) / (2 * step)
    kept = centre > floor
    if not kept.any():
        raise AllZeroProbabilities("every outcome probability is below the floor")
    return float(np.sum(derivative[kept] ** 2 / centre[kept])), centre


def qfi_classical_fisher(
    probe: ProbeState,
    observable: Operator,
    fd_step: float = DEFAULT_FD_STEP,
    description: str = "",
    tol: Tolerances = TOLERANCES,
) -> QfiEstimate:
    """Fisher information of measuring ``observable`` on ``probe`` with respect to theta.

    Raises:
        NonHermitianObservable: If the observable is not Hermitian
        DegenerateObservable: If its eigendecomposition fails tolerance
        AllZeroProbabilities: If no outcome clears the probability floor
    """
    if not fd_step > 0:
        raise InvalidParameter(f"finite-difference step must be positive, got {fd_step}")
    projectors = _outcome_projectors(observable, tol)
    value, centre = _fisher(probe, projectors, fd_step, tol.probability_floor)
    if abs(centre.sum() - 1) > tol.trace:
        log.warning(f"outcome probabilities sum to {centre.sum():.12g}")
    refined, _ = _fisher(probe, projectors, fd_step / 2, tol.probability_floor)
    # below the floor F is finite-difference roundoff
    if max(value, refined) < tol.fisher_floor:
        return QfiEstimate(value=0.0, observable=description, fd_step=fd_step)
    delta = abs(value - refined) / max(value, refined)
    if delta > RICHARDSON_LIMIT:
        log.warning(
            f"Fisher information changes by {delta:.2%} when the step is halved (step {fd_step:g})"
        )
    return QfiEstimate(value=value, observable=description, fd_step=fd_step, richardson_delta=delta)


def cramer_rao(fisher: float, copies: int = 1) -> float:
    """Variance bound 1 / (k F).

    Raises:
        NonpositiveFisher: If F <= 0
    """
    if copies < 1:
        raise InvalidParameter(f"copies must be at least 1, got {copies}")
    if not fisher > 0:
        raise NonpositiveFisher(f"Cramer-Rao bound needs positive Fisher information, got {fisher}")
    return 1.0 / (copies * fisher)


def correlated_fisher(
    register: Register,
    theta0: float,
    phi0: float,
    backend: Union[str, Backend] = Backend.SYMMETRIC,
    epsilon_a: Optional[float] = None,
    fd_step: float = DEFAULT_FD_STEP,
) -> QfiEstimate:
    probe = encode_parameter(prepare_correlated_probe(register, backend, epsilon_a), theta0, phi0)
    return qfi_classical_fisher(probe, sld_observable(probe), fd_step, "(u.I_C) I_z^A")


def amplification_ratio(
    register: Register,
    theta0: float,
    phi0: float,
    backend: Union[str, Backend] = Backend.SYMMETRIC,
    epsilon_a: Optional[float] = None,
    fd_step: float = DEFAULT_FD_STEP,
) -> float:
    """F of the correlated probe over F of a single polarized central qubit.

    Raises:
        NonpositiveFisher: If the uncorrelated reference carries no information (eps_A = 0)
    """
    correlated = correlated_fisher(register, theta0, phi0, backend, epsilon_a, fd_step)
    single = encode_parameter(prepare_uncorrelated_probe(register, backend, epsilon_a), theta0, phi0)
    baseline = qfi_classical_fisher(single, central_observable(single), fd_step, "u.I_C")
    if not baseline.value > 0:
        raise NonpositiveFisher("uncorrelated reference has zero Fisher information; the ratio is undefined")
    return correlated.value / baseline.value


def fisher_sweep(
    register: Register,
    n_values: Sequence[int],
    epsilon_a: float,
    theta0: float,
    phi0: float,
    copies: int = 1,
    backend: Union[str, Backend] = Backend.SYMMETRIC,
) -> List[Tuple[float, ...]]:
    """Rows (n, epsilon_a, theta0, phi0, fisher, bound, ratio) over register sizes."""
    if n_values and max(n_values) > MAX_SWEEP_SIZE:
        raise InvalidParameter(f"QFI sweeps stop at N={MAX_SWEEP_SIZE}, got {max(n_values)}")
    rows = []
    for n in n_values:
        sized = build_register(register.spec.replace(n_total=int(n)))
        estimate = correlated_fisher(sized, theta0, phi0, backend, epsilon_a)
        ratio = amplification_ratio(sized, theta0, phi0, backend, epsilon_a)
        bound = cramer_rao(estimate.value, copies)
        log.debug(f"QFI N={n}: F={estimate.value:.6g}, ratio={ratio:.4g}")
        rows.append((float(n), epsilon_a, theta0, phi0, estimate.value, bound, ratio))
    return rows
