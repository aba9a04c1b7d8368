"""Coupling extraction and the two-level forward/round-trip machinery."""

import math

import numpy as np
import pytest

from ftjc import (CouplingProfile, InputError, StepSizeError, extract_coupling,
                  forward_two_level, roundtrip_report)


def _cos_grid(t_max=2.0 * math.pi, n=6284):
    ts = np.linspace(0.0, t_max, n)
    return ts, np.cos(2.0 * ts)


def test_extract_constant_coupling_from_cosine():
    ts, w = _cos_grid()
    for scheme in ("central2", "central4"):
        prof = extract_coupling(ts, w, scheme=scheme)
        assert np.max(np.abs(prof.gamma - 1.0)) <= 5e-6
        # grid endpoints sit on |W| = 1 and must be masked, not divided
        assert bool(prof.singular[0]) and bool(prof.singular[-1])
        assert np.all(np.isfinite(prof.gamma))


def test_extract_flat_inversion_gives_zero_coupling():
    ts = np.linspace(0.0, 1.0, 101)
    prof = extract_coupling(ts, np.ones_like(ts))
    assert np.all(prof.singular)
    assert np.all(prof.gamma == 0.0)


def test_extract_coupling_input_validation():
    ts = np.linspace(0.0, 1.0, 101)
    with pytest.raises(InputError):
        extract_coupling(ts, 1.5 * np.ones_like(ts))
    with pytest.raises(InputError):
        extract_coupling(ts[:4], np.ones(4))
    with pytest.raises(InputError):
        extract_coupling(ts, np.cos(ts), scheme="spectral")
    bad = ts.copy()
    bad[50] += 1e-3
    with pytest.raises(InputError):
        extract_coupling(bad, np.cos(ts))


def test_forward_constant_coupling_reproduces_cosine():
    ts = np.linspace(0.0, 2.0 * math.pi, 2001)
    prof = CouplingProfile(ts=ts, gamma=np.ones_like(ts),
                           singular=np.zeros(ts.size, dtype=bool))
    res = forward_two_level(prof)
    assert np.max(np.abs(res.w - np.cos(2.0 * ts))) <= 1e-10
    assert res.norm_drift <= 1e-10


def test_forward_zero_coupling_freezes_state():
    ts = np.linspace(0.0, 5.0, 501)
    prof = CouplingProfile(ts=ts, gamma=np.zeros_like(ts),
                           singular=np.zeros(ts.size, dtype=bool))
    res = forward_two_level(prof)
    assert np.all(res.w == 1.0)
    assert np.all(res.amp_e == 1.0 + 0j)


def test_forward_phase_is_a_gauge_choice():
    ts = np.linspace(0.0, 2.0 * math.pi, 2001)
    gamma = 1.0 + 0.25 * np.sin(ts)
    prof = CouplingProfile(ts=ts, gamma=gamma,
                           singular=np.zeros(ts.size, dtype=bool))
    base = forward_two_level(prof, phase=0.0)
    for phase in (math.pi / 4.0, math.pi / 2.0):
        res = forward_two_level(prof, phase=phase)
        assert np.max(np.abs(res.w - base.w)) <= 1e-10
        assert np.max(np.abs(np.abs(res.amp_g) - np.abs(base.amp_g))) <= 1e-10


def test_forward_validation_and_step_control():
    ts = np.linspace(0.0, 2.0 * math.pi, 64)
    prof = CouplingProfile(ts=ts, gamma=50.0 * np.ones(ts.size),
                           singular=np.zeros(ts.size, dtype=bool))
    with pytest.raises(StepSizeError):
        forward_two_level(prof, substeps=1)
    small = CouplingProfile(ts=ts, gamma=np.ones(ts.size),
                            singular=np.zeros(ts.size, dtype=bool))
    with pytest.raises(InputError):
        forward_two_level(small, start_index=64)
    with pytest.raises(InputError):
        forward_two_level(small, substeps=0)


def test_roundtrip_reproduces_fractional_inversion():
    rep = roundtrip_report(0.5, 1.0, 2.0 * math.pi, dt=2e-3)
    assert rep.max_abs_dw_trimmed <= 1e-2
    assert rep.mean_abs_dw <= 1e-2
    assert rep.gamma_first > 0.0
    assert rep.spike_ratio > 1.0
    d = rep.to_dict()
    assert d["alpha"] == 0.5
    assert set(d) >= {"gamma_first", "gamma_plateau_mean", "spike_ratio",
                      "max_abs_dw_trimmed", "singular_count"}


def test_roundtrip_standard_model_is_self_consistent():
    # alpha = 1 round-trips to machine-level accuracy with the
    # higher-order derivative stencil
    rep = roundtrip_report(1.0, 1.0, 2.0 * math.pi, dt=1e-3,
                           scheme="central4")
    assert rep.max_abs_dw_trimmed <= 1e-6
    assert abs(rep.gamma_plateau_mean - 1.0) <= 1e-3
    assert rep.spike_ratio <= 2.0


def test_roundtrip_rejects_tiny_grid():
    with pytest.raises(InputError):
        roundtrip_report(0.5, 1.0, 0.005, dt=1e-3)
