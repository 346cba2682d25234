"""Closed-form classical trajectories.

Covers the constant-field helix with its nonpolynomial fifth integral
and canonical tilde transformation, and the helical-field system's
reduction to a pendulum equation solved by Jacobi elliptic functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .dynamics import PhaseState
from .elliptic import ellipk, inv_am, inv_sn, jacobi_am, jacobi_sn
from .errors import DegenerateKappa, DegenerateMomentum, SeparatrixRegime
from .fields import HelicalB

__all__ = [
    "helix_solution", "x5_integral", "x6_integral", "tilde_transform",
    "PendulumReduction", "pendulum_reduction", "zeta_solution",
    "helical_z_of_t", "jacobi_sn",
]

#: half-width of the separatrix band |kappa - 1| routed to numerics
SEPARATRIX_DELTA = 1e-6


def helix_solution(B: float, s0: PhaseState, t: float) -> PhaseState:
    """Exact constant-field state at time t from initial state s0.

    Uniform drift along x and gyration in the (y, z) plane with
    angular frequency B; p1 and p2 are constant.
    """
    if B == 0:
        raise ValueError("helix_solution requires B != 0")
    x0, y0, z0 = s0.x
    p1, p2, p3 = s0.p
    c, s = math.cos(B * t), math.sin(B * t)
    x = x0 + p1 * t
    y = y0 - p3 / B + c * p3 / B - s * (z0 - p2 / B)
    z = p2 / B + s * p3 / B + c * (z0 - p2 / B)
    p3t = c * p3 + s * (p2 - B * z0)
    return PhaseState(np.array([x, y, z]), np.array([p1, p2, p3t]))


def _phase_angle(B: float, s: PhaseState, tol: float) -> float:
    p1 = s.p[0]
    if abs(p1) < tol:
        raise DegenerateMomentum(
            f"|p1|={abs(p1)} below {tol}: the helix degenerates to a circle")
    return B * s.x[0] / p1


def x5_integral(B: float, s: PhaseState, tol: float = 1e-8) -> float:
    """(Bz - p2) cos(Bx/p1) - p3 sin(Bx/p1); needs p1 away from 0."""
    th = _phase_angle(B, s, tol)
    return (B * s.x[2] - s.p[1]) * math.cos(th) - s.p[2] * math.sin(th)


def x6_integral(B: float, s: PhaseState, tol: float = 1e-8) -> float:
    """(p2 - Bz) sin(Bx/p1) - p3 cos(Bx/p1); companion of x5_integral."""
    th = _phase_angle(B, s, tol)
    return (s.p[1] - B * s.x[2]) * math.sin(th) - s.p[2] * math.cos(th)


def tilde_transform(s: PhaseState) -> tuple[float, float]:
    """Canonical pair (x/p1, p1^2/2) replacing (x, p1); needs p1 > 0."""
    p1 = s.p[0]
    if p1 <= 0:
        raise DegenerateMomentum(f"tilde_transform needs p1 > 0, got {p1}")
    return float(s.x[0] / p1), float(0.5 * p1 * p1)


@dataclass(frozen=True)
class PendulumReduction:
    """Reduced description of helical-field z-motion.

    The z coordinate obeys a pendulum equation in the scaled time
    tau = sqrt(2 A p) t / beta with angle theta = (z + phi0 - phi_p)/beta
    and energy-like constant kappa; zeta = cos(theta) satisfies
    (dzeta/dtau)^2 = -(zeta - 1)(zeta + 1)(zeta + kappa).
    z0 and zdot0 pin the solution branch (winding and direction) that
    (kappa, tau0) alone cannot distinguish.
    """

    p: float
    phi_p: float
    kappa: float
    tau0: float
    z0: float
    zdot0: float

    def __post_init__(self):
        if self.p < 0:
            raise ValueError("momentum modulus p must be nonnegative")
        if self.kappa < -1:
            raise ValueError("kappa < -1 is unphysical")

    @property
    def regime(self) -> str:
        if abs(self.kappa - 1.0) <= SEPARATRIX_DELTA:
            return "separatrix"
        return "librating" if self.kappa < 1.0 else "rotating"


def pendulum_reduction(model: HelicalB, s0: PhaseState) -> PendulumReduction:
    """Conserved pendulum data (p, phi_p, kappa, tau0) of an initial state."""
    p1, p2, zdot0 = s0.p
    p = math.hypot(p1, p2)
    if p < 1e-12:
        raise DegenerateMomentum("pendulum reduction needs |(p1,p2)| > 0")
    beta = model.beta
    phi_p = beta * math.atan2(p2, p1)
    z0 = float(s0.x[2])
    theta0 = (z0 + model.phi0 - phi_p) / beta
    kappa = zdot0**2 / (2.0 * model.A_amp * p) - math.cos(theta0)
    kappa = max(kappa, -1.0)
    tau0 = _reference_phase(kappa, theta0, zdot0)
    return PendulumReduction(p, phi_p, kappa, tau0, z0, float(zdot0))


def _reference_phase(kappa: float, theta0: float, zdot0: float) -> float:
    """Phase offset tau0 at which zeta reaches its reference turning value."""
    if abs(kappa - 1.0) <= SEPARATRIX_DELTA or kappa <= -1.0 + 1e-15:
        return 0.0
    if kappa < 1.0:
        k = math.sqrt((kappa + 1.0) / 2.0)
        bigk = ellipk(k)
        theta_r = theta0 - 2.0 * math.pi * round(theta0 / (2.0 * math.pi))
        xt = max(-1.0, min(1.0, math.sin(0.5 * theta_r) / k))
        ub = inv_sn(xt, k)
        if zdot0 < 0:
            ub = 2.0 * bigk - ub
        return -math.sqrt(2.0) * ub - math.sqrt(2.0) * bigk
    k = math.sqrt(2.0 / (kappa + 1.0))
    bigk = ellipk(k)
    psi = 0.5 * theta0
    n = round(psi / math.pi)
    psi_r = max(-math.pi / 2, min(math.pi / 2, psi - n * math.pi))
    w0 = 2.0 * n * bigk + inv_am(psi_r, k)
    sigma = 1.0 if zdot0 >= 0 else -1.0
    return -2.0 / math.sqrt(kappa + 1.0) * (sigma * w0 + bigk)


def zeta_solution(red: PendulumReduction, tau: float) -> float:
    """zeta(tau) = cos(theta(tau)) from the elliptic-function solution.

    Uses the bounded-motion formula for -1 < kappa < 1 (zeta = -kappa
    at tau0) and the rotating formula for kappa > 1 (zeta = -1 at
    tau0). The separatrix band must be integrated numerically instead.
    """
    kappa = red.kappa
    if kappa <= -1.0 + SEPARATRIX_DELTA:
        raise DegenerateKappa(
            f"kappa={kappa} too close to -1: motion degenerates to rest")
    if abs(kappa - 1.0) <= SEPARATRIX_DELTA:
        raise SeparatrixRegime(
            f"kappa={kappa} within {SEPARATRIX_DELTA} of 1: integrate numerically")
    dt = float(tau) - red.tau0
    if kappa > 1.0:
        k = math.sqrt(2.0 / (kappa + 1.0))
        sn = jacobi_sn(0.5 * math.sqrt(kappa + 1.0) * dt, k)
        return (1.0 - kappa**2) / (2.0 * sn**2 - kappa - 1.0) - kappa
    k = math.sqrt((kappa + 1.0) / 2.0)
    sn = jacobi_sn(dt / math.sqrt(2.0), k)
    return 2.0 * (1.0 - kappa) / (2.0 - (kappa + 1.0) * sn**2) - 1.0


def _theta_librating(red: PendulumReduction, theta0: float, taus: np.ndarray) -> np.ndarray:
    k = math.sqrt((red.kappa + 1.0) / 2.0)
    if k < 1e-8:
        return np.full_like(taus, theta0)
    bigk = ellipk(k)
    nw = round(theta0 / (2.0 * math.pi))
    tau_b = red.tau0 + math.sqrt(2.0) * bigk
    out = np.empty_like(taus)
    for i, tau in enumerate(taus):
        u = (tau - tau_b) / math.sqrt(2.0)
        m = round(u / (2.0 * bigk))
        sn = jacobi_sn(u - 2.0 * bigk * m, k)
        if m % 2:
            sn = -sn
        out[i] = 2.0 * math.asin(max(-1.0, min(1.0, k * sn))) + 2.0 * math.pi * nw
    return out


def _theta_rotating(red: PendulumReduction, theta0: float, taus: np.ndarray) -> np.ndarray:
    kappa = red.kappa
    k = math.sqrt(2.0 / (kappa + 1.0))
    bigk = ellipk(k)
    psi = 0.5 * theta0
    n = round(psi / math.pi)
    psi_r = max(-math.pi / 2, min(math.pi / 2, psi - n * math.pi))
    w0 = 2.0 * n * bigk + inv_am(psi_r, k)
    sigma = 1.0 if red.zdot0 >= 0 else -1.0
    out = np.empty_like(taus)
    for i, tau in enumerate(taus):
        w = w0 + sigma * 0.5 * math.sqrt(kappa + 1.0) * tau
        m = round(w / (2.0 * bigk))
        out[i] = 2.0 * (m * math.pi + jacobi_am(w - 2.0 * bigk * m, k))
    return out


def helical_z_of_t(model: HelicalB, red: PendulumReduction, t) -> float | np.ndarray:
    """Closed-form z(t) for the helical field, continuous across turns.

    Librating and rotating regimes use the elliptic-function solution
    with winding bookkeeping; the separatrix band |kappa - 1| <= 1e-6
    and the rest state kappa = -1 fall back to direct integration or a
    constant. Accepts scalar or array t.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    scale = math.sqrt(2.0 * model.A_amp * red.p) / model.beta
    taus = scale * t_arr
    theta0 = (red.z0 + model.phi0 - red.phi_p) / model.beta
    kappa = red.kappa
    if abs(kappa - 1.0) <= SEPARATRIX_DELTA:
        dtheta0 = red.zdot0 / math.sqrt(2.0 * model.A_amp * red.p)
        theta = _separatrix_theta(theta0, dtheta0, taus)
    elif kappa < 1.0:
        theta = _theta_librating(red, theta0, taus)
    else:
        theta = _theta_rotating(red, theta0, taus)
    z = red.phi_p - model.phi0 + model.beta * theta
    return float(z[0]) if np.isscalar(t) or np.asarray(t).ndim == 0 else z


def _separatrix_theta(theta0: float, dtheta0: float, taus: np.ndarray) -> np.ndarray:
    out = np.empty_like(taus)
    for sign in (1.0, -1.0):
        mask = taus >= 0 if sign > 0 else taus < 0
        if not np.any(mask):
            continue
        span = float(np.max(sign * taus[mask]))
        if span == 0.0:
            out[mask] = theta0
            continue
        sol = solve_ivp(
            lambda _t, y: [y[1], -0.5 * math.sin(y[0])],
            (0.0, sign * span),
            [theta0, dtheta0],
            method="DOP853", rtol=1e-12, atol=1e-12, dense_output=True,
        )
        out[mask] = sol.sol(taus[mask])[0]
    return out
