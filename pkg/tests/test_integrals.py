"""Covariant integrals, determining equations, Poisson brackets."""

import numpy as np
import pytest

import magsuper as ms
from magsuper.integrals import RESIDUAL_KEYS, build_hn_from_alpha

from helpers import monopole_states, random_states, rng


def _cyl_model():
    return ms.Cylindrical(
        f1=lambda r: r**2, df1=lambda r: 2 * r,
        f2=lambda r: r**3, df2=lambda r: 3 * r**2,
        v=lambda r: 0.5 * r**2, dv=lambda r: r,
    )


def _off_axis(states, rmin=0.3):
    return [s for s in states if np.hypot(s.x[0], s.x[1]) > rmin]


def _all_pairs():
    return [(a, b) for a in range(1, 7) for b in range(a, 7)]


def test_alpha_input_forms_agree():
    model = ms.Monopole(g=2.0)
    dict_form = {(2, 6): 1.0, (3, 5): -1.0}
    str_form = {"26": 1.0, "35": -1.0}
    mat = np.zeros((6, 6))
    mat[1, 5] = mat[5, 1] = 1.0
    mat[2, 4] = mat[4, 2] = -1.0
    specs = [ms.IntegralSpec("a", form) for form in (dict_form, str_form, mat)]
    assert specs[0].alpha == specs[1].alpha == specs[2].alpha
    gen = rng(31)
    for s in monopole_states(gen, 10):
        vals = [ms.evaluate_integral(sp, model, s) for sp in specs]
        assert vals[0] == vals[1] == vals[2]


def test_alpha_validation():
    with pytest.raises(ValueError):
        ms.IntegralSpec("bad", {(3, 2): 1.0})  # unordered
    with pytest.raises(ValueError):
        ms.IntegralSpec("bad", {(0, 4): 1.0})
    with pytest.raises(ValueError):
        ms.IntegralSpec("bad", {(1, 7): 1.0})
    with pytest.raises(ValueError):
        ms.IntegralSpec("bad", np.ones((5, 5)))
    asym = np.zeros((6, 6))
    asym[0, 1] = 1.0
    with pytest.raises(ValueError):
        ms.IntegralSpec("bad", asym)
    assert ms.IntegralSpec("ok", None).is_first_order()
    assert not ms.IntegralSpec("ok", {(1, 1): 2.0}).is_first_order()


def test_quadratic_expansion_identity():
    # sum alpha_ab Y_a Y_b == sum_j h_j (pA_j)^2 + n1 pA2 pA3 + n2 pA1 pA3 + n3 pA1 pA2
    gen = rng(32)
    alpha = {pair: float(gen.standard_normal()) for pair in _all_pairs()}
    spec = ms.IntegralSpec("q", alpha)
    poly = build_hn_from_alpha(alpha)
    model = ms.HelicalB(A_amp=2.0, beta=1.5)
    for s in random_states(gen, 50):
        left = ms.evaluate_integral(spec, model, s)
        pa = ms.covariant_momentum(model, s)
        h = poly.h(s.x)
        n = poly.n(s.x)
        right = (h @ pa**2 + n[0] * pa[1] * pa[2]
                 + n[1] * pa[0] * pa[2] + n[2] * pa[0] * pa[1])
        assert abs(left - right) < 1e-10 * max(1.0, abs(left))


def test_coefficient_polynomial_jacobians():
    gen = rng(33)
    alpha = {pair: float(gen.standard_normal()) for pair in _all_pairs()}
    poly = build_hn_from_alpha(alpha)
    h = 1e-6
    for _ in range(20):
        x = gen.uniform(-3, 3, 3)
        jh, jn = poly.jac_h(x), poly.jac_n(x)
        for col in range(3):
            e = np.zeros(3)
            e[col] = h
            assert np.allclose((poly.h(x + e) - poly.h(x - e)) / (2 * h),
                               jh[:, col], atol=1e-7)
            assert np.allclose((poly.n(x + e) - poly.n(x - e)) / (2 * h),
                               jn[:, col], atol=1e-7)
        # structural identities: div n = 0 and dh_j/dx_j = 0
        assert abs(np.trace(jn)) < 1e-13
        assert np.max(np.abs(np.diag(jh))) < 1e-13


def test_known_integrals_satisfy_determining_equations():
    gen = rng(34)
    cases = [
        (ms.ConstantB(B=2.0), random_states(gen, 50)),
        (ms.HelicalB(A_amp=3.0, beta=3.0), random_states(gen, 50)),
        (ms.Monopole(g=2.0, Q=1.0), monopole_states(gen, 50)),
        (_cyl_model(), _off_axis(random_states(gen, 80))),
    ]
    for model, states in cases:
        for spec in ms.known_integrals(model):
            worst = 0.0
            for s in states:
                res = ms.determining_residuals(spec, model, s.x)
                assert set(res) == set(RESIDUAL_KEYS)
                worst = max(worst, max(abs(v) for v in res.values()))
            assert worst < 1e-9, (type(model).__name__, spec.name, worst)


def test_residuals_detect_wrong_m():
    B = 2.0
    model = ms.ConstantB(B=B)
    broken = ms.IntegralSpec("X2_wrong", {}, s=lambda x: np.array([0.0, 1.0, 0.0]),
                             m=lambda x: 0.0)
    res = ms.determining_residuals(broken, model, [0.3, -0.2, 0.7])
    assert res["dm_dz"] == pytest.approx(-B)
    others = {k: v for k, v in res.items() if k != "dm_dz"}
    assert max(abs(v) for v in others.values()) < 1e-12


def test_quantum_mode_matches_classical_for_first_order():
    model = ms.HelicalB(A_amp=1.0, beta=2.0)
    x = np.array([0.4, -0.6, 1.1])
    for spec in ms.known_integrals(model):
        assert spec.is_first_order()
        rc = ms.determining_residuals(spec, model, x, mode="classical")
        rq = ms.determining_residuals(spec, model, x, mode="quantum", hbar=3.0)
        assert rc == rq


def test_quantum_correction_vanishes_for_constant_field():
    # second order in momenta, but jacobian of B is identically zero
    B = 1.5
    model = ms.ConstantB(B=B)
    sq = ms.IntegralSpec(
        "X2_sq", {(2, 2): 1.0},
        s=lambda x: np.array([0.0, 2 * B * x[2], 0.0]),
        m=lambda x: (B * x[2]) ** 2,
    )
    gen = rng(35)
    for _ in range(10):
        x = gen.uniform(-2, 2, 3)
        rc = ms.determining_residuals(sq, model, x, mode="classical")
        rq = ms.determining_residuals(sq, model, x, mode="quantum")
        assert max(abs(v) for v in rc.values()) < 1e-9
        assert rc == rq


def test_quantum_correction_vanishes_for_monopole_integrals():
    model = ms.Monopole(g=2.0, Q=1.0)
    gen = rng(36)
    states = monopole_states(gen, 25)
    second_order = [sp for sp in ms.known_integrals(model) if not sp.is_first_order()]
    assert {sp.name for sp in second_order} == {"X_sq", "R1", "R2", "R3"}
    for spec in second_order:
        for s in states:
            rc = ms.determining_residuals(spec, model, s.x, mode="classical")
            rq = ms.determining_residuals(spec, model, s.x, mode="quantum")
            assert abs(rq["zero_order"] - rc["zero_order"]) < 1e-8


def test_quantum_correction_scales_as_hbar_squared():
    model = ms.HelicalB(A_amp=2.0, beta=1.0)
    spec = ms.IntegralSpec("l1_sq", {(4, 4): 1.0}, m=lambda x: 0.0)
    x = np.array([0.7, 0.9, 0.3])
    rc = ms.determining_residuals(spec, model, x, mode="classical")
    r1 = ms.determining_residuals(spec, model, x, mode="quantum", hbar=1.0)
    r2 = ms.determining_residuals(spec, model, x, mode="quantum", hbar=2.0)
    c1 = r1["zero_order"] - rc["zero_order"]
    c2 = r2["zero_order"] - rc["zero_order"]
    assert abs(c1) > 1e-3
    assert c2 == pytest.approx(4.0 * c1, rel=1e-9)
    for k in RESIDUAL_KEYS:
        if k != "zero_order":
            assert r1[k] == rc[k]


def test_determining_residuals_validation():
    model = ms.ConstantB(B=1.0)
    spec = ms.known_integrals(model)[0]
    with pytest.raises(ValueError):
        ms.determining_residuals(spec, model, [0, 0, 0], mode="semiclassical")
    with pytest.raises(ms.DomainError):
        ms.determining_residuals(spec, ms.Monopole(g=1.0), [0, 0, -1.0])


def test_canonical_poisson_brackets():
    gen = rng(37)
    for s in random_states(gen, 5):
        for i in range(3):
            for j in range(3):
                br = ms.poisson_bracket(lambda q, i=i: q.x[i],
                                        lambda q, j=j: q.p[j], s)
                assert br == pytest.approx(1.0 if i == j else 0.0, abs=1e-9)
        f = ms.PhaseFunction("f", lambda q: q.x[0] * q.p[1] ** 2)
        g = ms.PhaseFunction("g", lambda q: np.sin(q.x[1]) + q.p[0])
        assert ms.poisson_bracket(f, g, s) == pytest.approx(
            -ms.poisson_bracket(g, f, s), abs=1e-9)


def test_hamiltonian_function_gradient():
    gen = rng(38)
    for model, states in ((ms.HelicalB(A_amp=2.0, beta=1.0), random_states(gen, 10)),
                          (ms.Monopole(g=2.0, Q=1.0), monopole_states(gen, 10))):
        hf = ms.hamiltonian_function(model)
        for s in states:
            gx, gp = hf.grad(s)
            fx, fp = ms.phase_gradient(ms.PhaseFunction("h", hf.fn), s)
            assert np.allclose(gx, fx, atol=2e-6)
            assert np.allclose(gp, fp, atol=2e-6)
            assert hf(s) == ms.hamiltonian(model, s)


def test_brackets_with_hamiltonian_vanish():
    gen = rng(39)
    cases = [
        (ms.ConstantB(B=2.0), random_states(gen, 30)),
        (ms.HelicalB(A_amp=3.0, beta=3.0), random_states(gen, 30)),
        (ms.Monopole(g=2.0, Q=1.0), monopole_states(gen, 30)),
    ]
    for model, states in cases:
        hf = ms.hamiltonian_function(model)
        for spec in ms.known_integrals(model):
            f = ms.as_phase_function(spec, model)
            worst = max(abs(ms.poisson_bracket(f, hf, s)) for s in states)
            assert worst < 1e-6, (type(model).__name__, spec.name, worst)


def test_known_integrals_dispatch():
    assert [sp.name for sp in ms.known_integrals(ms.ConstantB(B=1.0))] == \
        ["X1", "X2", "X3", "X4"]
    assert [sp.name for sp in ms.known_integrals(ms.HelicalB(A_amp=1, beta=1))] == \
        ["X1", "X2", "X3"]
    full = ms.known_integrals(ms.Monopole(g=2.0, Q=1.0))
    assert [sp.name for sp in full] == ["X1", "X2", "X3", "X_sq", "R1", "R2", "R3"]
    bare = ms.known_integrals(ms.Monopole(g=2.0, Q=1.0, barrier=False))
    assert [sp.name for sp in bare] == ["X1", "X2", "X3", "X_sq"]
    assert [sp.name for sp in ms.known_integrals(_cyl_model())] == ["l3", "p3"]
    with pytest.raises(ms.UnsupportedModel):
        ms.known_integrals(ms.Custom(a=lambda x: np.zeros(3), v=lambda x: 0.0))


def test_x4_reference_value():
    model = ms.ConstantB(B=2.0)
    spec = next(sp for sp in ms.known_integrals(model) if sp.name == "X4")
    s = ms.PhaseState([0.0, 1.0, 2.0], [0.0, 0.0, 0.0])
    assert spec.value_at(model, s) == pytest.approx(3.0, abs=1e-14)


def test_as_phase_function_paths():
    model = ms.ConstantB(B=1.0)
    spec = ms.known_integrals(model)[0]
    pf = ms.as_phase_function(spec, model)
    assert pf.name == "X1"
    s = ms.PhaseState([0, 0, 0], [2.0, 0, 0])
    assert pf(s) == ms.evaluate_integral(spec, model, s)
    assert pf.value(s) == pf(s)
    with pytest.raises(ValueError):
        ms.as_phase_function(spec)  # spec without model
    with pytest.raises(TypeError):
        ms.as_phase_function(42)
    named = ms.as_phase_function(lambda q: q.x[0], name="x0")
    assert named.name == "x0"
