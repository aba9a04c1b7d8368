"""Scalar observables, Husimi function, and period extraction."""

import math

import numpy as np
import pytest

from ftjc import (DomainError, FractionalOrder, InputError,
                  InsufficientSpanError, JointState, concurrence, evolve_trajectory,
                  field_density, field_moments, husimi, husimi_grid,
                  init_coherent_excited, init_fock_excited, mandel_q,
                  mean_photon, oscillation_periods, photon_parity,
                  population_inversion, qubit_density, quadrature_variance_x)

from oracles import field_moments_by_sums, random_pure_two_qubit


def _fock_field(n: int, n_max: int) -> JointState:
    amp_e = np.zeros(n_max + 1, dtype=complex)
    amp_g = np.zeros(n_max + 1, dtype=complex)
    amp_e[n] = 1.0
    return JointState(n_max=n_max, amp_e=amp_e, amp_g=amp_g)


def test_inversion_endpoints():
    assert population_inversion(init_fock_excited(4)) == 1.0
    amp_e = np.zeros(3, dtype=complex)
    amp_g = np.zeros(3, dtype=complex)
    amp_g[0] = 1.0
    down = JointState(n_max=2, amp_e=amp_e, amp_g=amp_g)
    assert population_inversion(down) == -1.0


def test_coherent_field_statistics_at_t0():
    st0 = init_coherent_excited(3.0, 40)
    assert abs(mean_photon(st0) - 9.0) <= 1e-9
    # Poissonian field: Q = 0, parity = exp(-2 |beta|^2)
    assert abs(mandel_q(st0)) <= 1e-9
    assert abs(photon_parity(st0) - math.exp(-18.0)) <= 1e-12
    fd = field_density(st0)
    a1, a2, nbar = field_moments(fd)
    assert abs(a1 - 3.0) <= 1e-9
    assert abs(a2 - 9.0) <= 1e-8
    assert abs(nbar - 9.0) <= 1e-9
    assert abs(quadrature_variance_x(fd) - 0.25) <= 1e-9


def test_fock_field_statistics():
    st2 = _fock_field(2, 5)
    assert mean_photon(st2) == 2.0
    assert photon_parity(st2) == 1.0
    assert mandel_q(st2) == -1.0
    st3 = _fock_field(3, 5)
    assert photon_parity(st3) == -1.0


def test_mandel_q_rejects_empty_field():
    with pytest.raises(DomainError):
        mandel_q(init_fock_excited(4))


def test_field_moments_match_independent_sums():
    st0 = init_coherent_excited(2.0, 25)
    ts = np.linspace(0.0, 3.0, 301)
    traj = evolve_trajectory(st0, FractionalOrder(0.6), 1.0, ts)
    state = traj.state(300)
    fd = field_density(state)
    a1, a2, nbar = field_moments(fd)
    ref1, ref2 = field_moments_by_sums(state)
    assert abs(a1 - ref1) <= 1e-12
    assert abs(a2 - ref2) <= 1e-12
    assert abs(nbar - mean_photon(state)) <= 1e-12


def test_concurrence_pure_state_formula():
    rng = np.random.default_rng(20260814)
    for _ in range(20):
        v = random_pure_two_qubit(rng)
        rho = np.outer(v, v.conj())
        want = 2.0 * abs(v[0] * v[3] - v[1] * v[2])
        assert abs(concurrence(rho) - want) <= 1e-12


def test_concurrence_bell_and_product():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1.0 / math.sqrt(2.0)
    assert abs(concurrence(np.outer(bell, bell.conj())) - 1.0) <= 1e-12
    prod = np.zeros(4, dtype=complex)
    prod[1] = 1.0
    assert concurrence(np.outer(prod, prod.conj())) == 0.0


def test_concurrence_tracks_amplitude_product():
    ts = np.linspace(0.0, 2.0, 201)
    traj = evolve_trajectory(init_fock_excited(4), FractionalOrder(0.5), 1.0, ts)
    for i in (40, 120, 200):
        state = traj.state(i)
        want = 2.0 * abs(state.amp_e[0]) * abs(state.amp_g[0])
        assert abs(concurrence(qubit_density(state)) - want) <= 1e-10


def test_concurrence_input_validation():
    with pytest.raises(InputError):
        concurrence(np.eye(3))
    bad = np.eye(4, dtype=complex) / 4.0
    bad[0, 1] = 0.5
    with pytest.raises(InputError):
        concurrence(bad)  # not Hermitian
    with pytest.raises(InputError):
        concurrence(np.eye(4, dtype=complex))  # trace 4
    neg = np.diag([0.7, 0.5, -0.1, -0.1]).astype(complex)
    with pytest.raises(InputError):
        concurrence(neg)  # negative eigenvalues


def test_husimi_vacuum_closed_form():
    fd = field_density(init_fock_excited(3))
    xs = np.linspace(-4.0, 4.0, 41)
    q = husimi(fd, xs, xs)
    # rows run along the imaginary axis, columns along the real axis
    gx, gy = np.meshgrid(xs, xs, indexing="xy")
    want = np.exp(-(gx ** 2 + gy ** 2)) / math.pi
    assert np.max(np.abs(q - want)) <= 1e-12


def test_husimi_coherent_closed_form_and_norm():
    beta = 1.0 + 0.5j
    fd = field_density(init_coherent_excited(beta, 20))
    grid = husimi_grid(fd, re_range=(-4.0, 6.0), im_range=(-4.0, 5.0),
                       resolution=101)
    xs = np.linspace(-4.0, 6.0, 101)
    ys = np.linspace(-4.0, 5.0, 101)
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    want = np.exp(-((gx - beta.real) ** 2 + (gy - beta.imag) ** 2)) / math.pi
    assert np.max(np.abs(grid.values - want)) <= 1e-9
    assert abs(grid.norm() - 1.0) <= 1e-3
    assert grid.cell_area() == pytest.approx(0.009, rel=1e-12)


def test_husimi_boundary_warning():
    fd = field_density(init_coherent_excited(3.0, 40))
    xs = np.linspace(-1.0, 1.0, 11)
    with pytest.warns(RuntimeWarning):
        husimi(fd, xs, xs)


def test_husimi_grid_validation():
    fd = field_density(init_fock_excited(1))
    with pytest.raises(InputError):
        husimi_grid(fd, resolution=1)
    with pytest.raises(InputError):
        husimi_grid(fd, re_range=(2.0, -2.0))
    with pytest.raises(InputError):
        # a combined window must be split into the two axis ranges
        husimi_grid(fd, re_range=(-3.0, 3.0, -3.0, 3.0))


def test_periods_of_plain_cosine():
    ts = np.linspace(0.0, 20.0, 20001)
    vals = np.cos(2.0 * ts)
    periods = oscillation_periods(ts, vals, 5)
    assert periods.shape == (5,)
    assert np.max(np.abs(periods - math.pi)) <= 1e-6


def test_periods_error_paths():
    ts = np.linspace(0.0, 5.0, 501)
    with pytest.raises(InsufficientSpanError):
        oscillation_periods(ts, np.cos(2.0 * ts), 10)
    with pytest.raises(InputError):
        oscillation_periods(ts, np.cos(ts)[:-1], 1)
    with pytest.raises(InputError):
        oscillation_periods(ts, np.cos(ts), 0)
