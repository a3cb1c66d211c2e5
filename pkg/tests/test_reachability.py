import numpy as np
import pytest
from numpy.testing import assert_allclose

from gatereach import profiles as pf
from gatereach import reachability as rc
from gatereach import su4
from gatereach.canonical import equivalent_gate_vectors, weyl_reduce
from gatereach.errors import HorizonExceeded, ValidationError
from conftest import random_nonlocal_hamiltonian

PI = np.pi
SWAP_THETA = np.array([PI / 4] * 3)


def test_swap_constant_boundary():
    p = pf.ConstantProfile(theta=[2, 1, -1])
    T0 = 3 * PI / 16
    assert rc.reachable(SWAP_THETA, p, T0)
    assert not rc.reachable(SWAP_THETA, p, 0.999 * T0)


def test_identity_reachable_at_zero():
    p = pf.ConstantProfile(theta=[2, 1, -1])
    assert rc.reachable(np.zeros(3), p, 0.0)


def test_ising_threshold():
    # beta = (pi/4, 0, 0) needs Theta1 >= pi/4 under a pure XX drift
    p = pf.ConstantProfile(theta=[1, 0, 0])
    assert rc.reachable(np.array([PI / 4, 0, 0]), p, PI / 4 + 1e-9)
    assert not rc.reachable(np.array([PI / 4, 0, 0]), p, PI / 4 * 0.999)


def test_reachable_requires_gate_cell():
    p = pf.ConstantProfile(theta=[1, 0, 0])
    with pytest.raises(ValidationError):
        rc.reachable(np.array([1.0, 0.0, 0.0]), p, 1.0)


def test_min_time_swap_constant():
    p = pf.ConstantProfile(theta=[2, 1, -1])
    r = rc.min_time(SWAP_THETA, p, tol=1e-12)
    assert abs(r.T_min - 3 * PI / 16) < 1e-9
    assert r.activeShift == (-1, 0, 0)
    assert r.bindingInequality == 3
    assert abs(r.margins[2]) < 1e-8


def test_min_time_identity():
    p = pf.ConstantProfile(theta=[2, 1, -1])
    assert rc.min_time(np.zeros(3), p).T_min == 0.0


def test_min_time_mas_period_count():
    m = pf.MasDipolarProfile(D=1.0, omega=100.0, beta=PI / 4)
    r = rc.min_time(SWAP_THETA, m, tol=1e-11)
    assert r.wholePeriodCount == 27
    assert 26.0 < r.periods <= 27.0
    # the omega >> D rotor-period estimate agrees
    assert m.approx_min_period_count(3 * PI / 4) == 27
    # exact minimum time solves int (3|D| + D) dt = 3 pi / 4
    drive = m.accumulated_drive(r.T_min, tol=1e-13)
    assert abs(drive - 3 * PI / 4) < 1e-7


def test_min_time_matches_analytic_constant(rng):
    # independent closed-form solver for constant profiles
    def analytic(theta_U, theta_H):
        best = np.inf
        for beta in equivalent_gate_vectors(theta_U):
            xs = np.array([beta[0], beta.sum(), beta[0] + beta[1] - beta[2]])
            ys = np.array([theta_H[0], theta_H.sum(),
                           theta_H[0] + theta_H[1] - theta_H[2]])
            T = 0.0
            ok = True
            for x, y in zip(xs, ys):
                if x <= 1e-15:
                    continue
                if y <= 1e-15:
                    ok = False
                    break
                T = max(T, x / y)
            if ok:
                best = min(best, T)
        return best

    for _ in range(50):
        H = random_nonlocal_hamiltonian(rng)
        p = pf.ConstantProfile(hamiltonian=H)
        theta_U, _ = weyl_reduce(rng.uniform(-1, 1, 3))
        expected = analytic(theta_U, p.theta_at(0.0))
        got = rc.min_time(theta_U, p, tol=1e-11).T_min
        assert abs(got - expected) < 1e-8


def test_min_time_monotone_feasibility(rng):
    p = pf.MasDipolarProfile(D=1.0, omega=40.0, beta=0.8)
    theta_U, _ = weyl_reduce(rng.uniform(-0.6, 0.6, 3))
    r = rc.min_time(theta_U, p, tol=1e-10)
    for fac in (1.0, 1.1, 1.7, 3.0):
        assert rc.reachable(theta_U, p, r.T_min * fac)
    if r.T_min > 1e-6:
        assert not rc.reachable(theta_U, p, r.T_min * 0.99)


def test_min_time_null_profile_raises():
    m = pf.MasDipolarProfile(D=1.0, omega=1.0, beta=0.0)
    with pytest.raises(HorizonExceeded):
        rc.min_time(SWAP_THETA, m)


def test_min_time_domain_limited_profile_raises():
    p = pf.PiecewiseConstantProfile([(0.05, su4.coupling_hamiltonian([1, 0, 0]))])
    with pytest.raises(HorizonExceeded):
        rc.min_time(SWAP_THETA, p)


def test_condition_report_swap_boundary():
    p = pf.ConstantProfile(theta=[2, 1, -1])
    rep = rc.condition_report(SWAP_THETA, p, 3 * PI / 16)
    shifted = [s for s in rep["shifts"] if s["n"] == (-1, 0, 0)][0]
    assert abs(shifted["margins"][2]) < 1e-12
    assert shifted["feasible"]


def test_condition_report_at_zero():
    p = pf.ConstantProfile(theta=[2, 1, -1])
    rep = rc.condition_report(SWAP_THETA, p, 0.0)
    for entry in rep["shifts"]:
        beta = entry["beta"]
        expect = -np.array([beta[0], beta.sum(), beta[0] + beta[1] - beta[2]])
        assert_allclose(entry["margins"], expect, atol=1e-12)
        assert not entry["feasible"]


def test_flat_feasibility_flag():
    # coupling switches off after the boundary: the minimal T is at the
    # left edge of a flat feasible region and gets flagged
    p = pf.PiecewiseConstantProfile([
        (PI / 4, su4.coupling_hamiltonian([1, 0, 0])),
        (1.0, np.zeros((4, 4))),
    ])
    r = rc.min_time(np.array([PI / 4, 0, 0]), p, tol=1e-10)
    assert abs(r.T_min - PI / 4) < 1e-8
    assert r.flatFeasibility


def test_condition_report_mas_drive():
    m = pf.MasDipolarProfile(D=1.0, omega=100.0, beta=PI / 4)
    rep = rc.condition_report(SWAP_THETA, m, m.period)
    s1, s2 = m.period_areas()
    assert abs(rep["accumulated_drive"] - (2 * s1 + 4 * s2)) < 1e-9
    assert abs(rep["accumulated_drive"] - 6 * 1.4922 / 100.0) < 1e-3
    assert rep["drive_threshold"] == 3 * PI / 4
