"""Equations of motion, integrators, trajectory diagnostics."""

import numpy as np
import pytest

import magsuper as ms

from helpers import monopole_states, random_states, rng


def _models():
    return [
        ms.ConstantB(B=1.0),
        ms.HelicalB(A_amp=3.0, beta=3.0),
        ms.Monopole(g=2.0, Q=1.0),
        ms.Cylindrical(
            f1=lambda r: r**2, df1=lambda r: 2 * r,
            f2=lambda r: r**3, df2=lambda r: 3 * r**2,
            v=lambda r: 0.5 * r**2, dv=lambda r: r,
        ),
    ]


def _states_for(model, gen, n):
    if isinstance(model, ms.Monopole):
        return monopole_states(gen, n)
    states = random_states(gen, n)
    if isinstance(model, ms.Cylindrical):
        states = [s for s in states if np.hypot(s.x[0], s.x[1]) > 0.3]
    return states


def test_eom_matches_hamiltonian_gradients():
    # dual route: rhs formula vs central differences of H
    gen = rng(21)
    h = 1e-6
    for model in _models():
        for s in _states_for(model, gen, 12):
            dx, dp = ms.eom_rhs(model, s)
            for k in range(3):
                e = np.zeros(3)
                e[k] = h
                dHdp = (ms.hamiltonian(model, ms.PhaseState(s.x, s.p + e))
                        - ms.hamiltonian(model, ms.PhaseState(s.x, s.p - e))) / (2 * h)
                dHdx = (ms.hamiltonian(model, ms.PhaseState(s.x + e, s.p))
                        - ms.hamiltonian(model, ms.PhaseState(s.x - e, s.p))) / (2 * h)
                assert abs(dx[k] - dHdp) < 1e-6
                assert abs(dp[k] + dHdx) < 1e-6


def test_rk45_energy_conservation():
    gen = rng(22)
    for model in _models():
        s0 = _states_for(model, gen, 1)[0]
        traj = ms.integrate(model, s0, 10.0)
        assert traj.energy_drift() < 1e-8
        assert traj.times[0] == 0.0
        assert traj.times[-1] == 10.0


def test_boris_exact_energy_for_pure_magnetic_field():
    model = ms.ConstantB(B=1.3)
    s0 = ms.PhaseState([0.2, -0.4, 0.9], [1.0, 0.3, -0.7])
    cfg = ms.IntegratorConfig(method="boris", dt=1e-2)
    traj = ms.integrate(model, s0, 100.0, cfg)
    assert traj.energy_drift() < 1e-10
    assert traj.method == "boris"


def test_boris_tracks_rk45():
    model = ms.HelicalB(A_amp=1.0, beta=1.0)
    s0 = ms.PhaseState([0.1, 0.0, 0.3], [1.2, 0.4, 0.5])
    ref = ms.integrate(model, s0, 5.0)
    cfg = ms.IntegratorConfig(method="boris", dt=1e-3)
    traj = ms.integrate(model, s0, 5.0, cfg)
    assert np.max(np.abs(traj.final_state.x - ref.final_state.x)) < 1e-5
    assert np.max(np.abs(traj.final_state.p - ref.final_state.p)) < 1e-5


def test_watched_integrals_stay_constant():
    model = ms.ConstantB(B=2.0)
    s0 = ms.PhaseState([0.0, 1.0, 0.5], [1.1, 0.2, -0.3])
    traj = ms.integrate(model, s0, 20.0, watch=ms.known_integrals(model))
    assert set(traj.diagnostics) == {"X1", "X2", "X3", "X4"}
    for name in traj.diagnostics:
        assert traj.drift(name) < 1e-8, name


def test_watch_accepts_callables_and_named_objects():
    model = ms.ConstantB(B=1.0)
    s0 = ms.PhaseState([0, 0, 0], [1.0, 0, 0])
    fn = ms.PhaseFunction("half_px", lambda s: 0.5 * s.p[0])
    traj = ms.integrate(model, s0, 1.0, watch=[fn, lambda s: s.x[2]])
    assert "half_px" in traj.diagnostics
    assert "watch1" in traj.diagnostics
    with pytest.raises(TypeError):
        ms.integrate(model, s0, 1.0, watch=[object()])


def test_dense_sampling_matches_closed_form():
    model = ms.ConstantB(B=1.5)
    s0 = ms.PhaseState([0.3, -0.2, 0.8], [0.9, 0.1, -0.4])
    traj = ms.integrate(model, s0, 10.0)
    gen = rng(23)
    for t in gen.uniform(0, 10, 20):
        got = traj.sample(t)
        want = ms.helix_solution(1.5, s0, float(t))
        assert np.max(np.abs(got.x - want.x)) < 1e-8
        assert np.max(np.abs(got.p - want.p)) < 1e-8


def test_hermite_sampling_for_boris():
    model = ms.ConstantB(B=1.0)
    s0 = ms.PhaseState([0.0, 0.0, 0.0], [1.0, 0.5, 0.2])
    cfg = ms.IntegratorConfig(method="boris", dt=1e-3)
    traj = ms.integrate(model, s0, 2.0, cfg)
    for t in (0.0, 0.3777, 1.25001, 2.0):
        got = traj.sample(t)
        want = ms.helix_solution(1.0, s0, t)
        assert np.max(np.abs(got.x - want.x)) < 1e-6
    with pytest.raises(ValueError):
        traj.sample(2.5)
    with pytest.raises(ValueError):
        traj.sample(-0.1)


def test_runaway_potential_raises_step_failure():
    model = ms.Custom(a=lambda x: np.zeros(3), v=lambda x: -float((x @ x) ** 2))
    s0 = ms.PhaseState([1.0, 0.0, 0.0], [1.0, 0.0, 0.0])
    with pytest.raises(ms.StepFailure):
        ms.integrate(model, s0, 10.0)


def test_domain_error_on_bad_start():
    model = ms.Monopole(g=1.0)
    s0 = ms.PhaseState([0.0, 0.0, -1.0], [0.0, 1.0, 0.0])
    with pytest.raises(ms.DomainError):
        ms.integrate(model, s0, 1.0)


def test_t_end_and_config_validation():
    model = ms.ConstantB(B=1.0)
    s0 = ms.PhaseState([0, 0, 0], [1.0, 0, 0])
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError):
            ms.integrate(model, s0, bad)
    with pytest.raises(ValueError):
        ms.IntegratorConfig(method="verlet")
    with pytest.raises(ValueError):
        ms.IntegratorConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        ms.IntegratorConfig(dt=-0.1)


def test_gauge_invariance_of_positions():
    base = ms.HelicalB(A_amp=1.0, beta=1.0)
    chi = ms.GaugeFunction(
        chi=lambda x: x[0] * x[1] + 0.5 * x[2] ** 2,
        gradient=lambda x: np.array([x[1], x[0], x[2]]),
    )
    shifted = ms.gauge_shift(base, chi)
    x0 = np.array([0.2, -0.1, 0.4])
    p0 = np.array([1.0, 0.3, -0.2])
    traj_a = ms.integrate(base, ms.PhaseState(x0, p0), 8.0)
    traj_b = ms.integrate(shifted, ms.PhaseState(x0, p0 - chi.gradient(x0)), 8.0)
    for t in np.linspace(0.5, 8.0, 12):
        xa = traj_a.sample(t).x
        xb = traj_b.sample(t).x
        assert np.max(np.abs(xa - xb)) < 1e-8


def test_phase_state_round_trip():
    s = ms.PhaseState([1, 2, 3], [4, 5, 6])
    assert np.array_equal(s.as_array(), [1, 2, 3, 4, 5, 6])
    s2 = ms.PhaseState.from_array(s.as_array())
    assert np.array_equal(s2.x, s.x) and np.array_equal(s2.p, s.p)
    with pytest.raises(ValueError):
        ms.PhaseState([1, 2], [3, 4, 5])


def test_trajectory_validation():
    times = np.array([0.0, 1.0, 0.5])
    arr = np.zeros((3, 3))
    with pytest.raises(ValueError):
        ms.Trajectory(times, arr, arr, np.zeros(3), {}, ms.ConstantB(B=1.0), "rk45")
