#!/usr/bin/env python3
"""Fisher information of correlated star probes."""

import numpy as np
import pytest

from starspin.core import Backend, build_operators, trace
from starspin.metrology import (
    amplification_ratio,
    central_observable,
    correlated_fisher,
    cramer_rao,
    encode_parameter,
    fisher_sweep,
    outcome_probabilities,
    prepare_correlated_probe,
    qfi_classical_fisher,
    sld_observable,
)
from starspin.utils.errors import InvalidParameter, NonHermitianObservable, NonpositiveFisher
from starspin.utils.rng import stream

EPSILON = 1e-3


@pytest.mark.parametrize("theta0", [0.3, 0.5, 1.2])
def test_correlated_fisher_scales_with_ancillas(five_spin_register, theta0):
    estimate = correlated_fisher(five_spin_register, theta0, 0.0, epsilon_a=EPSILON)
    assert estimate.value == pytest.approx(EPSILON ** 2 * (five_spin_register.n_total - 1), rel=1e-4)
    assert estimate.richardson_delta < 0.01


def test_amplification_ratio_is_ancilla_count(tmp_register):
    ratio = amplification_ratio(tmp_register, 0.5, 0.7, epsilon_a=EPSILON)
    assert ratio == pytest.approx(tmp_register.n_total - 1, rel=1e-4)


def test_backends_agree(small_register):
    symmetric = correlated_fisher(small_register, 0.5, 0.2, Backend.SYMMETRIC, EPSILON)
    dense = correlated_fisher(small_register, 0.5, 0.2, Backend.DENSE, EPSILON)
    assert symmetric.value == pytest.approx(dense.value, rel=1e-8)


@pytest.mark.parametrize("index", range(12))
def test_outcome_probabilities_sum_to_one(small_register, index):
    rng = stream(77, index)
    theta0, phi0 = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
    results = []
    for backend in (Backend.SYMMETRIC, Backend.DENSE):
        probe = encode_parameter(prepare_correlated_probe(small_register, backend, EPSILON), theta0, phi0)
        for observable in (sld_observable(probe), central_observable(probe)):
            p = outcome_probabilities(probe, observable)
            assert p.sum() == pytest.approx(1.0, abs=1e-10)
            assert np.all(p >= -1e-12)
            results.append(p)
    np.testing.assert_allclose(results[0], results[2], atol=1e-10)
    np.testing.assert_allclose(results[1], results[3], atol=1e-10)


def test_encoded_probe_keeps_its_reference(small_register):
    probe = prepare_correlated_probe(small_register, epsilon_a=EPSILON)
    encoded = encode_parameter(probe, 0.4, 0.0)
    assert encoded.reference is probe.state
    assert trace(encoded.state) == pytest.approx(1.0, abs=1e-12)
    twice = encode_parameter(encoded, 0.4, 0.0)
    for a, b in zip(encoded.state.matrices, twice.state.matrices):
        np.testing.assert_allclose(a, b, atol=1e-15)


def test_sld_observable_is_hermitian(small_register):
    probe = encode_parameter(prepare_correlated_probe(small_register), 0.5, 0.0)
    assert sld_observable(probe).is_hermitian()


def test_non_hermitian_measurement(small_register):
    probe = encode_parameter(prepare_correlated_probe(small_register, epsilon_a=EPSILON), 0.5, 0.0)
    ops = build_operators(small_register, Backend.SYMMETRIC)
    with pytest.raises(NonHermitianObservable):
        qfi_classical_fisher(probe, ops.ix_c + 1j * ops.iy_c)


def test_cramer_rao():
    assert cramer_rao(4.0, copies=2) == pytest.approx(0.125)
    with pytest.raises(NonpositiveFisher):
        cramer_rao(0.0)


def test_zero_purity_has_no_ratio(small_register):
    with pytest.raises(NonpositiveFisher):
        amplification_ratio(small_register, 0.5, 0.0, epsilon_a=0.0)


def test_fisher_sweep_rows(tmp_register):
    rows = fisher_sweep(tmp_register, [3, 6], EPSILON, 0.5, 0.0, copies=10)
    assert [row[0] for row in rows] == [3.0, 6.0]
    for n, _, _, _, fisher, bound, ratio in rows:
        assert fisher == pytest.approx(EPSILON ** 2 * (n - 1), rel=1e-4)
        assert bound == pytest.approx(1.0 / (10 * fisher))
        assert ratio == pytest.approx(n - 1, rel=1e-4)


def test_fisher_sweep_stops_at_largest_preset(tmp_register):
    with pytest.raises(InvalidParameter):
        fisher_sweep(tmp_register, [4, 38], EPSILON, 0.5, 0.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
