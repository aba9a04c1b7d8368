"""Joint-state construction, evolution, and reduced densities."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ftjc import (CutoffError, FractionalOrder, InputError, JointState,
                  SectorError, block_at, evolve, evolve_trajectory,
                  field_density, init_coherent_excited, init_fock_excited,
                  qubit_density)


def test_fock_seed_is_unit_excited():
    st0 = init_fock_excited(4)
    assert st0.amp_e[0] == 1.0
    assert st0.norm() == 1.0
    assert st0.excitation() == 1.0
    assert st0.amp_g0 == 0j


def test_coherent_seed_statistics():
    st0 = init_coherent_excited(3.0, 40)
    assert abs(st0.norm() - 1.0) <= 1e-14
    # Poisson weights with mean 9, renormalized after the cutoff
    p = np.abs(st0.amp_e) ** 2
    n = np.arange(41)
    assert abs(float((n * p).sum()) - 9.0) <= 1e-9
    assert abs(st0.excitation() - 10.0) <= 1e-9


def test_coherent_cutoff_guard():
    with pytest.raises(CutoffError):
        init_coherent_excited(3.0, 25)
    # small amplitude fits easily
    st0 = init_coherent_excited(0.5, 12)
    assert abs(st0.norm() - 1.0) <= 1e-14


def test_joint_state_validation():
    with pytest.raises(InputError):
        JointState(n_max=1, amp_e=np.zeros(3, complex), amp_g=np.zeros(2, complex))
    with pytest.raises(InputError):
        JointState(n_max=1, amp_e=np.array([np.nan, 0]), amp_g=np.zeros(2, complex))
    with pytest.raises(InputError):
        init_fock_excited(-1)


def test_evolve_applies_blocks_and_checks_indices():
    order = FractionalOrder(0.5)
    blocks = [block_at(order, 1.0, n, 2.0) for n in range(5)]
    st1 = evolve(init_fock_excited(4), blocks)
    assert st1.t == 2.0
    assert abs(st1.norm() - 1.0) <= 1e-12
    with pytest.raises(InputError):
        evolve(init_fock_excited(4), blocks[:3])
    with pytest.raises(InputError):
        evolve(init_fock_excited(4), list(reversed(blocks)))


def test_evolve_matches_trajectory_endpoint():
    order = FractionalOrder(0.5)
    blocks = [block_at(order, 1.0, n, 2.0) for n in range(5)]
    st1 = evolve(init_fock_excited(4), blocks)
    ts = np.linspace(0.0, 2.0, 201)
    traj = evolve_trajectory(init_fock_excited(4), order, 1.0, ts)
    st2 = traj.state(200)
    assert np.max(np.abs(st1.amp_e - st2.amp_e)) <= 1e-12
    assert np.max(np.abs(st1.amp_g - st2.amp_g)) <= 1e-12


def test_trajectory_skips_empty_blocks():
    ts = np.linspace(0.0, 1.0, 101)
    traj = evolve_trajectory(init_fock_excited(4), FractionalOrder(0.75), 1.0, ts)
    assert set(traj.refinements) == {0}
    assert np.all(traj.amp_e[:, 1:] == 0)
    assert np.all(traj.amp_g[:, 1:] == 0)


def test_trajectory_rejects_started_state():
    order = FractionalOrder(0.5)
    blocks = [block_at(order, 1.0, n, 2.0) for n in range(5)]
    st1 = evolve(init_fock_excited(4), blocks)
    with pytest.raises(InputError):
        evolve_trajectory(st1, order, 1.0, np.linspace(0.0, 1.0, 51))


def test_field_density_trace_and_rank():
    st0 = init_coherent_excited(2.0, 25)
    ts = np.linspace(0.0, 3.0, 301)
    traj = evolve_trajectory(st0, FractionalOrder(0.6), 1.0, ts)
    state = traj.state(300)
    fd = field_density(state)
    assert abs(np.trace(fd.rho).real - state.norm()) <= 1e-12
    assert np.max(np.abs(fd.rho - fd.rho.conj().T)) <= 1e-15
    evs = np.sort(np.linalg.eigvalsh(fd.rho))[::-1]
    # pure joint state of atom+field: the field mixture has rank <= 2
    assert float(evs[2]) <= 1e-12


def test_qubit_density_block_zero():
    ts = np.linspace(0.0, 2.0, 201)
    traj = evolve_trajectory(init_fock_excited(4), FractionalOrder(0.5), 1.0, ts)
    rho = qubit_density(traj.state(150))
    assert abs(np.trace(rho).real - 1.0) <= 1e-12
    assert np.max(np.abs(rho - rho.conj().T)) <= 1e-15


def test_qubit_density_rejects_leakage():
    st0 = init_coherent_excited(3.0, 40)
    with pytest.raises(SectorError):
        qubit_density(st0)


@settings(max_examples=25, deadline=None)
@given(alpha=st.floats(0.3, 0.995), t_end=st.floats(0.5, 6.0))
def test_norm_and_excitation_conserved(alpha, t_end):
    # orders arbitrarily close to 1 sit on the contour conditioning
    # floor near 1e-10, so request a tolerance comfortably above it
    st0 = init_coherent_excited(1.5, 20)
    ts = np.linspace(0.0, t_end, 101)
    traj = evolve_trajectory(st0, FractionalOrder(alpha), 1.0, ts, ml_tol=1e-9)
    for i in (0, 50, 100):
        s = traj.state(i)
        assert abs(s.norm() - 1.0) <= 1e-8
        assert abs(s.excitation() - st0.excitation()) <= 1e-8
