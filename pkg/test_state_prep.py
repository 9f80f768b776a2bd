#!/usr/bin/env python3
"""Thermal populations, NOON/MSSM circuits, coherence orders and stick spectra."""

import numpy as np
import pytest
from scipy.special import comb

from starspin.core import Backend, build_operators, expectation, trace
from starspin.prep import (
    coherence_decompose,
    coherence_filter,
    collective_cnot,
    mssm_weights,
    noon_state,
    pascal_weights,
    prepare_mssm,
    stick_spectrum,
    subspace_populations,
    thermal_state,
    unprepare_mssm,
)
from starspin.utils.errors import IndexOutOfRange, InvalidParameter, NoSuchOrder, ShapeMismatch


def test_subspace_populations_sum_to_one(tmp_register):
    total = sum(sum(subspace_populations(tmp_register, h)) for h in range(tmp_register.n_total))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_subspace_population_closed_form(tmp_register):
    p0, p1 = subspace_populations(tmp_register, 3)
    scale = comb(9, 3, exact=True) / 2 ** 10
    m_h = 4.5 - 3
    assert p0 == pytest.approx(scale * (1 + tmp_register.epsilon_c + 2 * m_h * tmp_register.epsilon_a))
    assert p0 - p1 == pytest.approx(2 * scale * tmp_register.epsilon_c)


def test_subspace_index_range(tmp_register):
    with pytest.raises(IndexOutOfRange):
        subspace_populations(tmp_register, tmp_register.n_total)
    with pytest.raises(IndexOutOfRange):
        subspace_populations(tmp_register, -1)


def test_pascal_weights():
    assert pascal_weights(4) == {4: 1, 2: 3, 0: 3, -2: 1}
    assert sum(pascal_weights(10).values()) == 2 ** 9


@pytest.mark.parametrize("backend", [Backend.SYMMETRIC, Backend.DENSE])
def test_noon_state_has_only_order_n(small_register, backend):
    decomposition = coherence_decompose(noon_state(small_register, backend))
    n = small_register.n_total
    assert decomposition.orders() == [n]
    assert decomposition.weight(n) == pytest.approx(1.0, abs=1e-9)
    assert decomposition.p_diag == pytest.approx(0.0, abs=1e-9)


def test_diagonal_state_has_no_coherence(small_register):
    decomposition = coherence_decompose(thermal_state(small_register, Backend.SYMMETRIC))
    assert decomposition.entries == {}
    assert decomposition.p_diag == 1.0
    assert decomposition.weight(0) == 1.0
    assert decomposition.sectors() == {0: 1.0}


@pytest.mark.parametrize("backend", [Backend.SYMMETRIC, Backend.DENSE])
def test_mssm_weights_match_closed_form(five_spin_register, backend):
    state = prepare_mssm(thermal_state(five_spin_register, backend))
    decomposition = coherence_decompose(state)
    expected = mssm_weights(five_spin_register)
    assert sorted(decomposition.orders()) == sorted(expected)
    for q, weight in expected.items():
        assert decomposition.weight(q) == pytest.approx(weight, rel=1e-6)
    assert sum(decomposition.weights().values()) + decomposition.p_diag == pytest.approx(1.0, abs=1e-9)
    assert sum(decomposition.sectors().values()) == pytest.approx(1.0, abs=1e-9)


def test_mssm_weights_follow_pascal_triangle(tmp_register):
    weights = mssm_weights(tmp_register)
    pascal = pascal_weights(tmp_register.n_total)
    total = sum(pascal.values())
    for q, count in pascal.items():
        assert weights[q] == pytest.approx(count / total, rel=2e-3)


def test_coherence_filter_trace_is_the_weight(five_spin_register):
    state = prepare_mssm(thermal_state(five_spin_register, Backend.SYMMETRIC))
    q = five_spin_register.n_total - 2
    filtered = coherence_filter(state, q)
    assert trace(filtered) == pytest.approx(mssm_weights(five_spin_register)[q], rel=1e-6)
    assert trace(coherence_filter(state, q - 1)) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("backend", [Backend.SYMMETRIC, Backend.DENSE])
def test_coherence_filter_is_idempotent(five_spin_register, backend):
    state = prepare_mssm(thermal_state(five_spin_register, backend, exact=True))
    for q in coherence_decompose(state).orders():
        once = coherence_filter(state, q)
        twice = coherence_filter(once, q)
        for a, b in zip(once.matrices, twice.matrices):
            np.testing.assert_allclose(b, a, atol=1e-14)


def test_coherence_filter_rejects_unreachable_orders(small_register):
    state = noon_state(small_register, Backend.SYMMETRIC)
    with pytest.raises(NoSuchOrder):
        coherence_filter(state, small_register.n_total + 1)


@pytest.mark.parametrize("backend", [Backend.SYMMETRIC, Backend.DENSE])
def test_unprepare_restores_the_thermal_state(small_register, backend):
    thermal = thermal_state(small_register, backend)
    restored = unprepare_mssm(prepare_mssm(thermal))
    for before, after in zip(thermal.matrices, restored.matrices):
        np.testing.assert_allclose(after, before, atol=1e-13)


def test_cnot_direction_is_checked(small_register):
    with pytest.raises(InvalidParameter):
        collective_cnot(thermal_state(small_register, Backend.SYMMETRIC), "sideways")


def test_thermal_central_spectrum_is_binomial(tmp_register):
    spectrum = stick_spectrum(tmp_register, thermal_state(tmp_register, Backend.SYMMETRIC), "central")
    n = tmp_register.n_ancilla
    assert len(spectrum.lines) == tmp_register.n_total
    expected = np.array([comb(n, h, exact=True) for h in range(n + 1)], dtype=float)
    np.testing.assert_allclose(spectrum.amplitudes(), expected / expected.max(), rtol=1e-9)
    np.testing.assert_allclose(spectrum.frequencies(), [tmp_register.j_ca * (n / 2 - h) for h in range(n + 1)])


def test_thermal_ancilla_spectrum_is_a_doublet(tmp_register):
    spectrum = stick_spectrum(tmp_register, thermal_state(tmp_register, Backend.SYMMETRIC), "ancilla")
    np.testing.assert_allclose(spectrum.frequencies(), [tmp_register.j_ca / 2, -tmp_register.j_ca / 2])
    np.testing.assert_allclose(spectrum.amplitudes(), [1.0, 1.0], rtol=1e-9)
    assert spectrum.rows()[0][2] == 1


def test_spectra_agree_across_backends(small_register):
    symmetric = stick_spectrum(small_register, thermal_state(small_register, Backend.SYMMETRIC))
    dense = stick_spectrum(small_register, thermal_state(small_register, Backend.DENSE))
    np.testing.assert_allclose(symmetric.amplitudes(), dense.amplitudes(), rtol=1e-9)


def test_spectrum_register_must_match_the_state(small_register, five_spin_register):
    with pytest.raises(ShapeMismatch):
        stick_spectrum(five_spin_register, thermal_state(small_register, Backend.SYMMETRIC))


def test_unknown_channel(small_register):
    with pytest.raises(InvalidParameter):
        stick_spectrum(small_register, thermal_state(small_register, Backend.SYMMETRIC), "proton")


def test_noon_state_is_pure(small_register):
    ops = build_operators(small_register, Backend.SYMMETRIC)
    state = noon_state(small_register, Backend.SYMMETRIC)
    assert expectation(state, ops.iz_c + ops.iz_a) == pytest.approx(0.0, abs=1e-12)
    assert sum(w * np.vdot(m, m).real for w, m in zip(state.weights, state.matrices)) == pytest.approx(1.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
