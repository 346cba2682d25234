"""Shared test utilities: seeded sampling and independent oracles."""

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from magsuper import PhaseState


def rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def random_states(gen, n, box=2.0, p1_min=0.0):
    out = []
    while len(out) < n:
        x = gen.uniform(-box, box, 3)
        p = gen.uniform(-box, box, 3)
        if p1_min > 0 and abs(p[0]) < p1_min:
            continue
        out.append(PhaseState(x, p))
    return out


def monopole_positions(gen, n):
    # off the center, with r + z bounded away from the gauge string
    out = []
    while len(out) < n:
        x = gen.uniform(-2.0, 2.0, 3)
        r = np.linalg.norm(x)
        if not 0.5 < r < 5.0 or r + x[2] <= 0.5:
            continue
        out.append(x)
    return out


def monopole_states(gen, n):
    return [PhaseState(x, gen.uniform(-2.0, 2.0, 3))
            for x in monopole_positions(gen, n)]


def _mathieu_endpoint(a, q, y0, dy0):
    sol = solve_ivp(
        lambda x, y: [y[1], -(a - 2.0 * q * np.cos(2.0 * x)) * y[0]],
        (0.0, np.pi / 2.0), [y0, dy0], method="DOP853",
        rtol=1e-12, atol=1e-12,
    )
    return sol.y[0, -1], sol.y[1, -1]


def mathieu_shooting(r, parity, q, center, half_width=0.5):
    """Characteristic value by quarter-period ODE shooting.

    Fourier series of the periodic solutions give the boundary
    conditions: even parity starts y(0)=1, y'(0)=0 and needs
    y'(pi/2)=0 for even r, y(pi/2)=0 for odd r; odd parity starts
    y(0)=0, y'(0)=1 and needs y(pi/2)=0 for even r, y'(pi/2)=0 for
    odd r. The root is bracketed around `center`.
    """
    if parity == "even":
        y0, dy0 = 1.0, 0.0
        pick = 1 if r % 2 == 0 else 0
    else:
        y0, dy0 = 0.0, 1.0
        pick = 1 if r % 2 == 1 else 0

    def f(a):
        return _mathieu_endpoint(a, q, y0, dy0)[pick]

    lo, hi = center - half_width, center + half_width
    flo, fhi = f(lo), f(hi)
    grow = 0
    while flo * fhi > 0:
        grow += 1
        if grow > 8:
            raise RuntimeError("no sign change around the candidate value")
        lo -= half_width
        hi += half_width
        flo, fhi = f(lo), f(hi)
    return brentq(f, lo, hi, xtol=1e-11, rtol=8.9e-16)
