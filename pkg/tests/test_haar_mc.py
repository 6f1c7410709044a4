import numpy as np
import pytest

from rmoments import twirl
from rmoments.haar_mc import haar_su2_batch, mc_moment
from rmoments.linalg import kron
from rmoments.observables import random_rank_observable
from rmoments.paulis import PAULIS
from rmoments.states import bell_state, bloch_from_density, random_state

I, X, Y, Z = PAULIS


def test_haar_su2_is_special_unitary(rng):
    for u in haar_su2_batch(rng, 200):
        assert abs(np.linalg.det(u) - 1.0) <= 1e-12
        assert np.max(np.abs(u @ u.conj().T - np.eye(2))) <= 1e-12


def test_haar_mean_of_rotated_pauli_vanishes(rng):
    us = haar_su2_batch(rng, 100_000)
    rotated = np.einsum("kba,bc,kcd->kad", us.conj(), Z, us)
    mean = rotated.mean(axis=0)
    # each entry is an average of bounded terms; 4 sigma ~ 4/sqrt(n)
    assert np.max(np.abs(mean)) <= 4.0 / np.sqrt(100_000) * 2


def test_haar_first_nontrivial_moment(rng):
    # E[(tr(U sz U^dag sz)/2)^2] = E[n_z^2] = 1/3 for a uniform Bloch axis
    us = haar_su2_batch(rng, 100_000)
    vals = np.real(np.einsum("kba,bc,kcd,da->k", us.conj(), Z, us, Z)) / 2.0
    mean = np.mean(vals**2)
    stderr = np.std(vals**2, ddof=1) / np.sqrt(len(vals))
    assert abs(mean - 1.0 / 3.0) <= 4 * stderr


def test_mc_identity_observable():
    est = mc_moment(np.eye(4, dtype=complex), bell_state(), 3, 500, seed=1)
    assert est.mean == pytest.approx(1.0, abs=1e-12)
    assert est.stderr <= 1e-12


def test_mc_pauli_sum_bell():
    from rmoments.observables import pauli_sum_observable

    est = mc_moment(pauli_sum_observable(), bell_state(), 3, 100_000, seed=7)
    assert abs(est.mean + 1.0) <= 4 * est.stderr


def test_mc_reproducible():
    ob = kron(Z, Z)
    a = mc_moment(ob, bell_state(), 2, 2000, seed=5)
    b = mc_moment(ob, bell_state(), 2, 2000, seed=5)
    assert a.mean == b.mean and a.stderr == b.stderr
    c = mc_moment(ob, bell_state(), 2, 2000, seed=6)
    assert c.mean != a.mean


def test_mc_pt_invariance_of_product_observable(rng):
    from rmoments.linalg import partial_transpose

    rho = random_state("mixed", 2, 9)
    ob = kron(Z + 0.3 * X, Z - 0.2 * Y)
    a = mc_moment(ob, rho, 3, 60_000, seed=2)
    b = mc_moment(ob, partial_transpose(rho, 2), 3, 60_000, seed=3)
    assert abs(a.mean - b.mean) <= 4 * np.hypot(a.stderr, b.stderr)


def test_mc_converges_to_engine(rng):
    hits = 0
    for i in range(12):
        t = 1 + i % 4
        ob = random_rank_observable(rng, 1 + i % 4)
        rho = random_state("mixed", 2, 300 + i)
        exact = twirl.twirl_coefficients(ob, t).moment(bloch_from_density(rho))
        est = mc_moment(ob.matrix(), rho, t, 50_000, seed=100 + i)
        if abs(exact - est.mean) <= 3 * est.stderr:
            hits += 1
    assert hits >= 11


def test_mc_stderr_scaling():
    from rmoments.observables import pauli_sum_observable

    ns = (1000, 10_000, 100_000)
    errs = [mc_moment(pauli_sum_observable(), bell_state(), 3, n, seed=4).stderr for n in ns]
    slope = np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert abs(slope + 0.5) <= 0.1


def test_mc_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        mc_moment(np.eye(8, dtype=complex), bell_state(), 2, 10, seed=0)
