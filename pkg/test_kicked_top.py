#!/usr/bin/env python3
"""Kicked-top chaos: coherent states, central-spin entropy and phase-space maps."""

import math

import numpy as np
import pytest

from starspin.chaos import (
    KickedTopSpec,
    central_entropy,
    coherent_product_state,
    default_grid,
    entropy_series,
    kicked_top_step,
    phase_space_map,
    size_sweep,
)
from starspin.chaos.kicked_top import coherent_vector
from starspin.core import Backend, purity, trace
from starspin.prep import thermal_state
from starspin.utils.errors import InvalidParameter


def test_default_grid():
    thetas, phis = default_grid(8)
    assert thetas[0] == 0.0 and thetas[-1] == pytest.approx(math.pi)
    assert phis[0] == 0.0 and phis[-1] < 2 * math.pi
    assert thetas.size == phis.size == 8


@pytest.mark.parametrize("backend", [Backend.SYMMETRIC, Backend.DENSE])
def test_coherent_state_is_pure(small_register, backend):
    state = coherent_product_state(small_register, 1.1, 2.3, backend)
    assert trace(state) == pytest.approx(1.0, abs=1e-12)
    assert purity(state) == pytest.approx(1.0, abs=1e-12)
    assert central_entropy(state) < 1e-10


def test_coherent_vector_is_normalized(tmp_register):
    vector = coherent_vector(tmp_register, 0.7, 4.0, Backend.SYMMETRIC)
    assert vector.size == 2 * tmp_register.n_total
    assert np.linalg.norm(vector) == pytest.approx(1.0)


def test_theta_out_of_range(small_register):
    with pytest.raises(InvalidParameter):
        coherent_product_state(small_register, 4.0, 0.0)


def test_step_is_unitary(tmp_register):
    assert kicked_top_step(tmp_register, KickedTopSpec(chaoticity=3.0)).is_unitary()


def test_no_coupling_means_no_entanglement(tmp_register):
    spec = KickedTopSpec(chaoticity=0.0, n_kicks=40, average_window=20)
    series = entropy_series(tmp_register, spec, theta=1.0, phi=0.5)
    assert series.shape == (40,)
    assert np.all(series < 1e-10)


def test_entropy_is_bounded(tmp_register):
    series = entropy_series(tmp_register, KickedTopSpec(chaoticity=6.0, n_kicks=60, average_window=30))
    assert np.all(series >= 0.0)
    assert np.all(series <= 1.0)
    assert series.max() > 0.1


def test_backends_agree(small_register):
    spec = KickedTopSpec(chaoticity=3.0, n_kicks=25, average_window=10)
    symmetric = entropy_series(small_register, spec, 0.9, 1.3, Backend.SYMMETRIC)
    dense = entropy_series(small_register, spec, 0.9, 1.3, Backend.DENSE)
    np.testing.assert_allclose(symmetric, dense, atol=1e-8)


def test_maximally_mixed_central_spin(small_register):
    assert central_entropy(thermal_state(small_register, Backend.SYMMETRIC)) == pytest.approx(1.0, abs=1e-6)


def test_phase_space_map(small_register):
    spec = KickedTopSpec(chaoticity=10.0, n_kicks=30, average_window=10)
    thetas, phis = default_grid(4)
    entropy = phase_space_map(small_register, spec, thetas, phis)
    assert entropy.values.shape == (4, 4)
    assert np.all((entropy.values >= 0) & (entropy.values <= 1))
    rows = entropy.rows()
    assert len(rows) == 16
    assert rows[1][:3] == (0.0, float(phis[1]), 10.0)


def test_map_cells_match_single_series(small_register):
    spec = KickedTopSpec(chaoticity=4.0, n_kicks=30, average_window=10)
    thetas, phis = np.array([0.8]), np.array([2.0])
    entropy = phase_space_map(small_register, spec, thetas, phis)
    series = entropy_series(small_register, spec, 0.8, 2.0)
    assert entropy.values[0, 0] == pytest.approx(series[-10:].mean(), abs=1e-12)


def test_zero_chaoticity_map_is_flat(small_register):
    spec = KickedTopSpec(chaoticity=0.0, n_kicks=20, average_window=10)
    entropy = phase_space_map(small_register, spec, *default_grid(5))
    assert np.all(entropy.values < 1e-10)


def test_size_sweep(tmp_register):
    spec = KickedTopSpec(chaoticity=3.0, n_kicks=40, average_window=20)
    rows = size_sweep(tmp_register, spec, [1, 2, 3])
    assert [row[:2] for row in rows] == [(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]
    for _, _, mean, amplitude in rows:
        assert 0.0 <= mean <= 1.0
        assert amplitude >= 0.0


def test_ten_spin_maps_follow_chaoticity(tmp_register):
    thetas, phis = default_grid(32)
    maps = {
        k: phase_space_map(tmp_register, KickedTopSpec(chaoticity=k), thetas, phis).values for k in (0.0, 2.0, 10.0)
    }
    assert maps[0.0].max() < 1e-10
    assert maps[10.0].mean() > maps[2.0].mean() > 0.8
    # the weakly kicked top keeps its least-entangled cells below the strongly kicked one
    assert maps[2.0].min() < maps[10.0].min()


def test_full_turn_coupling_never_entangles(tmp_register):
    spec = KickedTopSpec(chaoticity=2 * math.pi, n_kicks=50, average_window=20)
    for _, _, mean, amplitude in size_sweep(tmp_register, spec, range(1, 7)):
        assert mean < 1e-10
        assert amplitude < 1e-10


def test_even_ancilla_counts_oscillate_more(tmp_register):
    rows = size_sweep(tmp_register, KickedTopSpec(chaoticity=6.0), range(4, 11))
    amplitude = {int(count): osc for count, _, _, osc in rows}
    for count in (4, 6, 8, 10):
        for neighbour in (count - 1, count + 1):
            if neighbour in amplitude:
                assert amplitude[count] > amplitude[neighbour]


def test_thermal_variant(small_register):
    spec = KickedTopSpec(chaoticity=3.0, n_kicks=10, average_window=5)
    series = entropy_series(small_register, spec, thermal=True)
    assert series.shape == (10,)
    assert np.all((series >= 0) & (series <= 1))


def test_spec_validation():
    with pytest.raises(InvalidParameter):
        KickedTopSpec(chaoticity=1.0, n_kicks=10, average_window=20).validate()
    with pytest.raises(InvalidParameter):
        KickedTopSpec(chaoticity=-1.0).validate()
    assert KickedTopSpec(chaoticity=2 * math.pi * 50.0 * 0.01).tau == pytest.approx(0.01)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
