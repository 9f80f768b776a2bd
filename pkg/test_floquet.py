#!/usr/bin/env python3
"""Kicked Ising star: Floquet unitaries, stroboscopic series and subharmonic analysis."""

import math

import numpy as np
import pytest

from starspin.core import Backend, RegisterSpec, build_register
from starspin.floquet import (
    DEFAULT_JT,
    FloquetSpec,
    dtc_error_sweep,
    dtc_series,
    floquet_unitary,
    power_spectrum_table,
    sample_kick_angles,
    subharmonic_analysis,
)
from starspin.utils.errors import InvalidParameter, SeriesTooShort, SymmetryViolation

PERIOD = 1e-3


def _spec(error=0.0, **changes):
    fields = dict(j_coupling=DEFAULT_JT / PERIOD, period=PERIOD, error=error)
    fields.update(changes)
    return FloquetSpec(**fields)


def test_unitary_is_unitary(tmp_register):
    assert floquet_unitary(tmp_register, _spec(0.1)).is_unitary()


def test_perfect_kicks_give_exact_period_doubling(tmp_register):
    series = dtc_series(tmp_register, _spec(0.0))
    n = tmp_register.n_total
    np.testing.assert_allclose(series[::2], n / 2, atol=1e-9)
    np.testing.assert_allclose(series[1::2], -n / 2, atol=1e-9)
    report = subharmonic_analysis(series, PERIOD)
    assert report.peak_frequency == pytest.approx(0.5 / PERIOD, rel=1e-12)
    assert report.peak_height == pytest.approx(1.0, abs=1e-9)
    assert report.decay_time > 1e6 * PERIOD


def test_uncoupled_control_follows_the_kick_angle(tmp_register):
    e = 0.2
    series = dtc_series(tmp_register, _spec(e, j_coupling=0.0))
    report = subharmonic_analysis(series, PERIOD)
    expected = (1 - e / math.pi) / (2 * PERIOD)
    assert abs(report.peak_frequency - expected) <= report.bin_width
    assert report.peak_height < 0.1


def test_backends_agree(small_register):
    spec = _spec(0.3, n_periods=40)
    symmetric = dtc_series(small_register, spec, Backend.SYMMETRIC)
    dense = dtc_series(small_register, spec, Backend.DENSE)
    np.testing.assert_allclose(symmetric, dense, atol=1e-9)


def test_uniform_per_spin_angles_match_the_collective_kick(small_register):
    e = 0.25
    spec = _spec(e, n_periods=30)
    angles = _spec(e, n_periods=30, kick_angles=(math.pi - e,) * small_register.n_total)
    np.testing.assert_allclose(
        dtc_series(small_register, angles, Backend.DENSE), dtc_series(small_register, spec, Backend.DENSE), atol=1e-9
    )


def test_per_spin_angles_need_dense(small_register):
    spec = _spec(0.1, kick_angles=(3.0,) * small_register.n_total)
    with pytest.raises(SymmetryViolation):
        floquet_unitary(small_register, spec, Backend.SYMMETRIC)


def test_per_spin_angle_count_is_checked(small_register):
    with pytest.raises(InvalidParameter):
        floquet_unitary(small_register, _spec(0.1, kick_angles=(3.0, 3.0)), Backend.DENSE)


def test_disorder_is_seeded(small_register):
    first = sample_kick_angles(small_register, 0.1, 0.05, seed=9)
    second = sample_kick_angles(small_register, 0.1, 0.05, seed=9)
    assert first == second
    assert len(first) == small_register.n_total
    assert all(abs(a - (math.pi - 0.1)) <= 0.05 for a in first)
    assert sample_kick_angles(small_register, 0.1, 0.05, seed=10) != first


def test_short_series_is_rejected():
    with pytest.raises(SeriesTooShort):
        subharmonic_analysis(np.ones(7), PERIOD)


def test_odd_series_drops_its_first_sample():
    series = np.cos(np.pi * np.arange(33))
    report = subharmonic_analysis(series, PERIOD)
    assert report.n_samples == 32
    assert report.frequencies[-1] == pytest.approx(0.5 / PERIOD)
    assert len(power_spectrum_table(report)) == 17


def test_hann_taper_keeps_the_peak():
    series = np.cos(np.pi * np.arange(64))
    report = subharmonic_analysis(series, PERIOD, window="hann")
    assert report.peak_frequency == pytest.approx(0.5 / PERIOD)


def test_decaying_envelope():
    series = np.cos(np.pi * np.arange(64)) * np.exp(-np.arange(64) / 20.0)
    report = subharmonic_analysis(series, PERIOD)
    assert report.decay_time == pytest.approx(20 * PERIOD, rel=1e-6)


def test_error_sweep_rows(five_spin_register):
    template = _spec(n_periods=63)
    rows = dtc_error_sweep(five_spin_register, template, [0.0, 0.3], windows=(None, 32))
    assert len(rows) == 4
    assert [row[:2] for row in rows] == [(0.0, 64.0), (0.0, 32.0), (0.3, 64.0), (0.3, 32.0)]
    assert rows[0][2] == pytest.approx(0.5 / PERIOD)
    assert rows[0][5] == pytest.approx(0.5 / PERIOD)
    control = rows[2][5]
    assert abs(control - (1 - 0.3 / math.pi) / (2 * PERIOD)) <= 1 / (64 * PERIOD)


def test_ten_spin_peak_is_rigid(tmp_register):
    errors = [0.05 * math.pi, 0.1 * math.pi, 0.15 * math.pi]
    rows = dtc_error_sweep(tmp_register, _spec(), errors)
    bin_width = 1 / (128 * PERIOD)
    for _, _, peak, _, _, control in rows:
        assert abs(peak - 0.5 / PERIOD) < bin_width
        assert abs(control - 0.5 / PERIOD) > bin_width
    drift = [round((0.5 / PERIOD - row[5]) / bin_width) for row in rows]
    assert drift == [3, 6, 10]


def test_decay_time_grows_with_satellites():
    decay = []
    for n_total in (4, 6, 8, 10):
        register = build_register(RegisterSpec.from_preset("tmp", n_total=n_total))
        series = dtc_series(register, _spec(0.1 * math.pi))
        decay.append(subharmonic_analysis(series, PERIOD).decay_time)
    assert all(math.isfinite(t) for t in decay)
    assert decay == sorted(decay)


def test_error_range_is_checked(small_register):
    with pytest.raises(InvalidParameter):
        dtc_error_sweep(small_register, _spec(), [math.pi / 2])


def test_window_longer_than_series(small_register):
    with pytest.raises(InvalidParameter):
        dtc_error_sweep(small_register, _spec(n_periods=20), [0.1], windows=(64,))


def test_thermal_start_runs(small_register):
    series = dtc_series(small_register, _spec(0.1, n_periods=16), thermal=True)
    assert series.shape == (17,)
    assert np.all(np.abs(series) <= small_register.n_total / 2)


def test_large_register_on_symmetric_backend():
    register = build_register(RegisterSpec.from_preset("ttss"))
    series = dtc_series(register, _spec(0.0, n_periods=8))
    assert series[1] == pytest.approx(-register.n_total / 2, abs=1e-8)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
