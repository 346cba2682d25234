"""Closed-form trajectories: helix, pendulum reduction, elliptic z(t)."""

import math

import numpy as np
import pytest

import magsuper as ms

from helpers import random_states, rng


TIGHT = ms.IntegratorConfig(rel_tol=1e-12, abs_tol=1e-12)


def _helical():
    return ms.HelicalB(A_amp=1.0, beta=1.0)


def test_helix_satisfies_equations_of_motion():
    B = 1.7
    model = ms.ConstantB(B=B)
    gen = rng(51)
    h = 1e-6
    for s0 in random_states(gen, 10):
        for t in (0.0, 0.9, 4.3):
            st = ms.helix_solution(B, s0, t)
            dx_want, dp_want = ms.eom_rhs(model, st)
            plus = ms.helix_solution(B, s0, t + h)
            minus = ms.helix_solution(B, s0, t - h)
            assert np.allclose((plus.x - minus.x) / (2 * h), dx_want, atol=1e-7)
            assert np.allclose((plus.p - minus.p) / (2 * h), dp_want, atol=1e-7)


def test_helix_matches_numerical_integration():
    B = 1.5
    model = ms.ConstantB(B=B)
    s0 = ms.PhaseState([0.3, -0.2, 0.8], [0.9, 0.1, -0.4])
    traj = ms.integrate(model, s0, 10.0, TIGHT)
    for t in np.linspace(0.0, 10.0, 25):
        want = ms.helix_solution(B, s0, float(t))
        got = traj.sample(float(t))
        assert np.max(np.abs(got.x - want.x)) < 1e-9
        assert np.max(np.abs(got.p - want.p)) < 1e-9


def test_helix_requires_field():
    with pytest.raises(ValueError):
        ms.helix_solution(0.0, ms.PhaseState([0, 0, 0], [1, 0, 0]), 1.0)


def test_x5_x6_constant_along_helix():
    B = 2.0
    s0 = ms.PhaseState([0.1, 0.5, -0.3], [1.2, 0.4, 0.7])
    v5_0 = ms.x5_integral(B, s0)
    v6_0 = ms.x6_integral(B, s0)
    for t in np.linspace(0.0, 15.0, 40):
        st = ms.helix_solution(B, s0, float(t))
        assert ms.x5_integral(B, st) == pytest.approx(v5_0, abs=1e-10)
        assert ms.x6_integral(B, st) == pytest.approx(v6_0, abs=1e-10)
    # X5^2 + X6^2 = (B z - p2)^2 + p3^2 = 2H - p1^2
    h0 = ms.hamiltonian(ms.ConstantB(B=B), s0)
    assert v5_0**2 + v6_0**2 == pytest.approx(2 * h0 - s0.p[0] ** 2, rel=1e-12)


def test_degenerate_momentum_paths():
    B = 1.0
    flat = ms.PhaseState([0.5, 0, 0], [1e-10, 0.3, 0.2])
    with pytest.raises(ms.DegenerateMomentum):
        ms.x5_integral(B, flat)
    with pytest.raises(ms.DegenerateMomentum):
        ms.x6_integral(B, flat)
    with pytest.raises(ms.DegenerateMomentum):
        ms.tilde_transform(ms.PhaseState([0, 0, 0], [-1.0, 0, 0]))
    with pytest.raises(ms.DegenerateMomentum):
        ms.pendulum_reduction(_helical(), ms.PhaseState([0, 0, 0], [0, 0, 1.0]))


def test_tilde_transform_values():
    s = ms.PhaseState([3.0, 0, 0], [2.0, 1.0, -1.0])
    xt, e1 = ms.tilde_transform(s)
    assert xt == pytest.approx(1.5)
    assert e1 == pytest.approx(2.0)


def test_reference_kappa_values():
    model = _helical()
    librating = ms.pendulum_reduction(
        model, ms.PhaseState([0, 0, 0], [3.0, 0.0, 3.2]))
    assert librating.kappa == 3.2**2 / 6.0 - 1.0
    assert librating.regime == "librating"

    critical = ms.pendulum_reduction(
        model, ms.PhaseState([0, 0, 0], [3.0, 0.0, 2.0 * math.sqrt(3.0)]))
    assert abs(critical.kappa - 1.0) < 1e-14
    assert critical.regime == "separatrix"

    rotating = ms.pendulum_reduction(
        model, ms.PhaseState([0, 0, 0], [3.0, 0.0, 3.8]))
    assert rotating.kappa == pytest.approx(3.8**2 / 6.0 - 1.0, rel=1e-15)
    assert rotating.regime == "rotating"


def _red_for_kappa(kappa):
    return ms.PendulumReduction(p=1.0, phi_p=0.0, kappa=kappa,
                                tau0=0.0, z0=0.0, zdot0=1.0)


def test_zeta_satisfies_cubic_ode():
    # (dzeta/dtau)^2 + (zeta - 1)(zeta + 1)(zeta + kappa) == 0
    # step 1e-5 balances truncation against roundoff in the quotient
    gen = rng(52)
    h = 1e-5
    for _ in range(1000):
        if gen.uniform() < 0.5:
            kappa = float(gen.uniform(-0.95, 0.95))
        else:
            kappa = float(gen.uniform(1.05, 5.0))
        red = _red_for_kappa(kappa)
        tau = float(gen.uniform(-20, 20))
        z = ms.zeta_solution(red, tau)
        dz = (ms.zeta_solution(red, tau + h) - ms.zeta_solution(red, tau - h)) / (2 * h)
        resid = dz**2 + (z - 1.0) * (z + 1.0) * (z + kappa)
        assert abs(resid) < 1e-8, (kappa, tau, resid)


def test_zeta_reference_turning_values():
    model = _helical()
    lib = ms.pendulum_reduction(model, ms.PhaseState([0, 0, 0.4], [3.0, 0.0, 1.5]))
    assert ms.zeta_solution(lib, lib.tau0) == pytest.approx(-lib.kappa, abs=1e-9)
    rot = ms.pendulum_reduction(model, ms.PhaseState([0, 0, 0.4], [3.0, 0.0, 3.9]))
    assert ms.zeta_solution(rot, rot.tau0) == pytest.approx(-1.0, abs=1e-9)
    # zeta equals cos(theta) at tau = 0, i.e. at the initial state
    theta0 = (lib.z0 - lib.phi_p) / model.beta
    assert ms.zeta_solution(lib, 0.0) == pytest.approx(math.cos(theta0), abs=1e-9)


def test_zeta_regime_guards():
    with pytest.raises(ms.SeparatrixRegime):
        ms.zeta_solution(_red_for_kappa(1.0), 0.5)
    with pytest.raises(ms.DegenerateKappa):
        ms.zeta_solution(_red_for_kappa(-1.0), 0.5)
    with pytest.raises(ValueError):
        _red_for_kappa(-1.5)


def _z_error(model, s0, t_end=20.0, n=80):
    red = ms.pendulum_reduction(model, s0)
    traj = ms.integrate(model, s0, t_end, TIGHT)
    ts = np.linspace(0.0, t_end, n)
    zc = ms.helical_z_of_t(model, red, ts)
    zn = np.array([traj.sample(float(t)).x[2] for t in ts])
    return red, float(np.max(np.abs(zc - zn)))


def test_closed_form_z_librating():
    red, err = _z_error(_helical(), ms.PhaseState([0, 0, 0], [3.0, 0.0, 3.2]))
    assert red.regime == "librating"
    assert err < 1e-6


def test_closed_form_z_rotating():
    red, err = _z_error(_helical(), ms.PhaseState([0, 0, 0], [3.0, 0.0, 3.8]))
    assert red.regime == "rotating"
    assert err < 1e-6


def test_closed_form_z_negative_vertical_speed():
    red, err = _z_error(_helical(), ms.PhaseState([0, 0, 0.3], [3.0, 0.0, -1.5]))
    assert red.regime == "librating"
    assert err < 1e-6
    red, err = _z_error(_helical(), ms.PhaseState([0, 0, 0.3], [3.0, 0.0, -3.8]))
    assert red.regime == "rotating"
    assert err < 1e-6


def test_closed_form_z_separatrix_band():
    # deviations grow like exp(sqrt(3) t) here, so keep the horizon short
    s0 = ms.PhaseState([0, 0, 0], [3.0, 0.0, 2.0 * math.sqrt(3.0)])
    red, err = _z_error(_helical(), s0, t_end=8.0)
    assert red.regime == "separatrix"
    assert err < 1e-6
    with pytest.raises(ms.SeparatrixRegime):
        ms.zeta_solution(red, 1.0)


def test_closed_form_z_nonzero_phase_offset():
    model = ms.HelicalB(A_amp=1.0, beta=1.0, phi0=0.7)
    for p3 in (1.5, 3.8):
        _, err = _z_error(model, ms.PhaseState([0, 0, 0.2], [3.0, 0.0, p3]))
        assert err < 1e-6


def test_closed_form_z_wound_start():
    model = _helical()
    z0 = 6.0 * math.pi + 0.3
    _, err = _z_error(model, ms.PhaseState([0, 0, z0], [3.0, 0.0, 1.5]))
    assert err < 1e-6


def test_rest_state_stays_put():
    model = _helical()
    # zdot = 0 at the potential minimum theta = 0: kappa = -1
    s0 = ms.PhaseState([0, 0, 0], [3.0, 0.0, 0.0])
    red = ms.pendulum_reduction(model, s0)
    assert red.kappa == -1.0
    ts = np.linspace(0.0, 12.0, 30)
    assert np.max(np.abs(ms.helical_z_of_t(model, red, ts) - 0.0)) < 1e-12
    with pytest.raises(ms.DegenerateKappa):
        ms.zeta_solution(red, 1.0)


def test_bounded_and_unbounded_z():
    model = _helical()
    ts = np.linspace(0.0, 60.0, 600)
    lib = ms.pendulum_reduction(model, ms.PhaseState([0, 0, 0], [3.0, 0.0, 3.2]))
    z = ms.helical_z_of_t(model, lib, ts)
    bound = abs(model.beta) * math.acos(-lib.kappa)
    assert np.max(np.abs(z - lib.phi_p)) <= bound + 1e-9

    rot = ms.pendulum_reduction(model, ms.PhaseState([0, 0, 0], [3.0, 0.0, 3.8]))
    z = ms.helical_z_of_t(model, rot, ts)
    assert np.all(np.diff(z) > 0)
    down = ms.pendulum_reduction(model, ms.PhaseState([0, 0, 0], [3.0, 0.0, -3.8]))
    z = ms.helical_z_of_t(model, down, ts)
    assert np.all(np.diff(z) < 0)


def test_helical_z_scalar_and_array_agree():
    model = _helical()
    red = ms.pendulum_reduction(model, ms.PhaseState([0, 0, 0], [3.0, 0.0, 3.2]))
    ts = np.array([0.0, 1.3, 7.7])
    arr = ms.helical_z_of_t(model, red, ts)
    assert arr.shape == (3,)
    for t, z in zip(ts, arr):
        scalar = ms.helical_z_of_t(model, red, float(t))
        assert isinstance(scalar, float)
        assert scalar == pytest.approx(z, abs=1e-12)
