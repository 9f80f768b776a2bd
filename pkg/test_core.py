#!/usr/bin/env python3
"""Register description, operators and the two state backends."""

import math

import numpy as np
import pytest
from scipy import constants
from scipy.special import comb

from starspin.chaos import KickedTopSpec, kicked_top_step
from starspin.core import (
    Backend,
    RegisterSpec,
    RotatingFrameParams,
    apply_unitary,
    block_layout,
    build_operators,
    build_register,
    central_marginal,
    check_backend,
    collective_rotation,
    evolve,
    expectation,
    ground_state,
    level_table,
    multiplicity,
    purity,
    rotating_frame_hamiltonian,
    spin_operator,
    static_hamiltonian,
    trace,
    validate_state,
)
from starspin.floquet import FloquetSpec, floquet_unitary
from starspin.prep import coherence_decompose, prepare_mssm, thermal_state
from starspin.utils.errors import (
    BackendLimit,
    InvalidSpec,
    NonHermitianObservable,
    ShapeMismatch,
    SymmetryViolation,
)
from starspin.utils.rng import stream


def test_register_needs_an_ancilla():
    with pytest.raises(InvalidSpec) as info:
        build_register(RegisterSpec(n_total=1, gamma_c=1e7, gamma_a=2e7, j_ca=10.0))
    assert info.value.field == "n_total"


@pytest.mark.parametrize("field, value", [("b0", 0.0), ("temperature", -1.0), ("t1_a", 0.0)])
def test_register_rejects_nonphysical_fields(field, value):
    spec = RegisterSpec.from_preset("tmp").replace(**{field: value})
    with pytest.raises(InvalidSpec) as info:
        build_register(spec)
    assert info.value.field == field


def test_unknown_preset():
    with pytest.raises(InvalidSpec):
        RegisterSpec.from_preset("benzene")


def test_purity_factors(tmp_register):
    spec = tmp_register.spec
    scale = constants.hbar * spec.b0 / (constants.k * spec.temperature)
    assert tmp_register.epsilon_c == pytest.approx(scale * spec.gamma_c, rel=1e-12)
    assert tmp_register.epsilon_a == pytest.approx(scale * spec.gamma_a, rel=1e-12)
    assert tmp_register.n_total == 10
    assert tmp_register.n_ancilla == 9


def test_preset_overrides_win():
    register = build_register(RegisterSpec.from_preset("tms", n_total=5, j_ca=7.0))
    assert register.n_total == 5
    assert register.j_ca == 7.0
    assert register.spec.label == "tetramethylsilane"


@pytest.mark.parametrize("n_ancilla", range(1, 9))
def test_dicke_blocks_cover_the_hilbert_space(n_ancilla):
    total = sum(d * int(round(2 * j + 1)) for j, d in block_layout(n_ancilla))
    assert total == 2 ** n_ancilla


def test_block_layout_of_four_ancillas():
    assert block_layout(4) == ((2.0, 1), (1.0, 3), (0.0, 2))
    assert multiplicity(4, 3.0) == 0


def test_symmetric_and_dense_hamiltonian_spectra_agree(small_register):
    dense = static_hamiltonian(small_register, Backend.DENSE).eigenvalues()
    symmetric = static_hamiltonian(small_register, Backend.SYMMETRIC).eigenvalues()
    assert dense.size == symmetric.size == 2 ** small_register.n_total
    np.testing.assert_allclose(symmetric, dense, rtol=1e-10)


def test_rotating_frame_spectra_agree(small_register):
    params = RotatingFrameParams(nu_c=30.0, nu_a=-12.0, omega_rf_c=400.0, omega_rf_a=250.0, phi_c=0.3, phi_a=1.1)
    dense = rotating_frame_hamiltonian(small_register, params, Backend.DENSE).eigenvalues()
    symmetric = rotating_frame_hamiltonian(small_register, params, Backend.SYMMETRIC).eigenvalues()
    np.testing.assert_allclose(symmetric, dense, atol=1e-8)


def test_level_table_matches_hamiltonian(five_spin_register):
    levels = []
    for _, h, energy, degeneracy in level_table(five_spin_register):
        assert degeneracy == comb(five_spin_register.n_ancilla, h, exact=True)
        levels.extend([energy] * degeneracy)
    expected = static_hamiltonian(five_spin_register, Backend.SYMMETRIC).eigenvalues()
    np.testing.assert_allclose(np.sort(levels), expected, rtol=1e-10)


@pytest.mark.parametrize("backend", [Backend.SYMMETRIC, Backend.DENSE])
def test_thermal_state_is_a_valid_density_operator(small_register, backend):
    state = thermal_state(small_register, backend)
    validate_state(state)
    assert trace(state) == pytest.approx(1.0, abs=1e-12)
    assert 0 < purity(state) <= 1


@pytest.mark.parametrize("backend", [Backend.SYMMETRIC, Backend.DENSE])
def test_thermal_central_magnetization(five_spin_register, backend):
    ops = build_operators(five_spin_register, backend)
    state = thermal_state(five_spin_register, backend)
    assert expectation(state, ops.iz_c) == pytest.approx(five_spin_register.epsilon_c / 2, rel=1e-9)
    assert expectation(state, ops.iz_a) == pytest.approx(
        five_spin_register.n_ancilla * five_spin_register.epsilon_a / 2, rel=1e-9
    )


def test_exact_thermal_state_agrees_to_first_order(small_register):
    ops = build_operators(small_register, Backend.SYMMETRIC)
    approx = expectation(thermal_state(small_register, Backend.SYMMETRIC), ops.iz_a)
    exact = expectation(thermal_state(small_register, Backend.SYMMETRIC, exact=True), ops.iz_a)
    assert exact == pytest.approx(approx, rel=1e-3)


def test_ground_state(small_register):
    for backend in Backend:
        state = ground_state(small_register, backend)
        ops = build_operators(small_register, backend)
        assert expectation(state, ops.iz_c + ops.iz_a) == pytest.approx(small_register.n_total / 2)
        np.testing.assert_allclose(central_marginal(state), [[1, 0], [0, 0]], atol=1e-12)


def test_evolution_preserves_trace_and_agrees_across_backends(small_register):
    params = RotatingFrameParams(omega_rf_c=300.0, omega_rf_a=500.0)
    values = []
    for backend in Backend:
        ops = build_operators(small_register, backend)
        hamiltonian = rotating_frame_hamiltonian(small_register, params, backend)
        state = evolve(thermal_state(small_register, backend), hamiltonian, 3.7e-3)
        assert trace(state) == pytest.approx(1.0, abs=1e-12)
        values.append(expectation(state, ops.iy_a))
    assert values[0] == pytest.approx(values[1], rel=1e-8, abs=1e-14)


def test_zero_duration_is_identity(small_register):
    state = thermal_state(small_register, Backend.SYMMETRIC)
    assert evolve(state, static_hamiltonian(small_register, Backend.SYMMETRIC), 0.0) is state


def test_propagator_is_unitary(five_spin_register):
    hamiltonian = static_hamiltonian(five_spin_register, Backend.SYMMETRIC)
    assert hamiltonian.propagator(1.3e-9).is_unitary()


def test_adjoint_inverts_propagator(small_register):
    ops = build_operators(small_register, Backend.SYMMETRIC)
    unitary = static_hamiltonian(small_register, Backend.SYMMETRIC).propagator(2e-9)
    residual = unitary.adjoint() @ unitary - ops.identity
    assert all(np.allclose(block, 0.0, atol=1e-12) for block in residual.blocks)


def test_backends_do_not_mix(small_register):
    state = thermal_state(small_register, Backend.SYMMETRIC)
    dense_ops = build_operators(small_register, Backend.DENSE)
    with pytest.raises(ShapeMismatch):
        expectation(state, dense_ops.iz_c)


def test_dense_backend_size_cap():
    register = build_register(RegisterSpec.from_preset("tms", n_total=15))
    with pytest.raises(BackendLimit):
        check_backend(register, "dense")
    assert check_backend(register, "symmetric") is Backend.SYMMETRIC


def test_single_spin_operators_need_dense(small_register):
    with pytest.raises(SymmetryViolation):
        spin_operator(small_register, 1, "x", Backend.SYMMETRIC)
    op = spin_operator(small_register, 1, "z", Backend.DENSE)
    assert op.is_hermitian()


def test_non_hermitian_observable_is_rejected(small_register):
    ops = build_operators(small_register, Backend.SYMMETRIC)
    raising = ops.ix_c + 1j * ops.iy_c
    with pytest.raises(NonHermitianObservable):
        expectation(thermal_state(small_register, Backend.SYMMETRIC), raising)


def test_larmor_frequencies(tmp_register):
    assert tmp_register.omega_c == pytest.approx(-tmp_register.spec.gamma_c * tmp_register.spec.b0)
    assert tmp_register.gamma_ratio == pytest.approx(26.7522 / 10.8394)
    assert math.isfinite(tmp_register.omega_a)


SCENARIO_KINDS = ("thermal", "mssm", "floquet", "kicked")


def _scenario(index):
    """Seeded register, preparation and dynamics for one backend comparison."""
    rng = stream(2024, index)
    # 0.05 K to 0.5 K puts the proton polarization between about 0.05 and 0.5
    spec = RegisterSpec.from_preset(
        "tmp", n_total=int(rng.integers(2, 9)), temperature=float(rng.uniform(0.05, 0.5))
    )
    axis = rng.normal(size=3)
    return {
        "register": build_register(spec),
        "kind": SCENARIO_KINDS[index % len(SCENARIO_KINDS)],
        "axis": axis / np.linalg.norm(axis),
        "angle": float(rng.uniform(0, math.pi)),
        "floquet": FloquetSpec(
            j_coupling=float(rng.uniform(0, 800)), period=1e-3, error=float(rng.uniform(0, 1.5))
        ),
        "kicked": KickedTopSpec(chaoticity=float(rng.uniform(0, 10))),
        "steps": int(rng.integers(1, 6)),
    }


def _prepare(scenario, backend):
    register, kind = scenario["register"], scenario["kind"]
    state = thermal_state(register, backend, exact=True)
    if kind == "mssm":
        return prepare_mssm(state)
    if kind == "thermal":
        return state
    state = collective_rotation(state, scenario["axis"], scenario["angle"])
    if kind == "floquet":
        unitary = floquet_unitary(register, scenario["floquet"], backend)
    else:
        unitary = kicked_top_step(register, scenario["kicked"], backend)
    for _ in range(scenario["steps"]):
        state = apply_unitary(state, unitary)
    return state


@pytest.mark.parametrize("index", range(200))
def test_random_scenarios_agree_across_backends(index):
    scenario = _scenario(index)
    register = scenario["register"]
    values = []
    for backend in (Backend.SYMMETRIC, Backend.DENSE):
        ops = build_operators(register, backend)
        state = _prepare(scenario, backend)
        assert trace(state) == pytest.approx(1.0, abs=1e-10)
        observables = [
            ops.ix_c, ops.iy_c, ops.iz_c, ops.ix_a, ops.iy_a, ops.iz_a, ops.iz_c @ ops.iz_a, ops.ix_c @ ops.ix_a
        ]
        values.append([expectation(state, op) for op in observables])
        if scenario["kind"] in ("thermal", "mssm"):
            values[-1].append(coherence_decompose(state).sectors())
    symmetric, dense = values
    np.testing.assert_allclose(symmetric[:8], dense[:8], rtol=0, atol=1e-10)
    if len(symmetric) > 8:
        assert list(symmetric[8]) == list(dense[8])
        np.testing.assert_allclose(list(symmetric[8].values()), list(dense[8].values()), rtol=0, atol=1e-10)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
