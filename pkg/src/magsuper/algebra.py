"""Poisson-algebra verification for the uniform-field and monopole systems.

The uniform-field integrals close into a 7-dimensional Lie algebra once
X1 is replaced by X1^2/2; the monopole angular integrals close like
angular momenta. Both facts are checked numerically at sampled states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import PhaseState
from .errors import DomainError
from .fields import Custom, Monopole, Vec3
from .integrals import PhaseFunction, poisson_bracket

_BASIS_NAMES = ("X1t", "X2", "X3", "X4", "X5", "X6", "X7")


def constantB_basis(B: float) -> list[PhaseFunction]:
    """The 7 closed-algebra generators X1t=p1^2/2, X2..X7, with gradients.

    X5 and X6 contain cos(Bx/p1) and sin(Bx/p1) and are regular only
    away from p1 = 0.
    """
    if B == 0:
        raise ValueError("constantB_basis requires B != 0")

    def theta(s: PhaseState) -> float:
        return B * s.x[0] / s.p[0]

    def x5(s):
        th = theta(s)
        return (B * s.x[2] - s.p[1]) * math.cos(th) - s.p[2] * math.sin(th)

    def x6(s):
        th = theta(s)
        return (s.p[1] - B * s.x[2]) * math.sin(th) - s.p[2] * math.cos(th)

    def grad_x5(s):
        th = theta(s)
        v6 = x6(s)
        gx = np.array([B / s.p[0] * v6, 0.0, B * math.cos(th)])
        gp = np.array([-B * s.x[0] / s.p[0] ** 2 * v6, -math.cos(th), -math.sin(th)])
        return gx, gp

    def grad_x6(s):
        th = theta(s)
        v5 = x5(s)
        gx = np.array([-B / s.p[0] * v5, 0.0, -B * math.sin(th)])
        gp = np.array([B * s.x[0] / s.p[0] ** 2 * v5, math.sin(th), -math.cos(th)])
        return gx, gp

    zero3 = np.zeros(3)
    return [
        PhaseFunction("X1t", lambda s: 0.5 * s.p[0] ** 2,
                      lambda s: (zero3, np.array([s.p[0], 0.0, 0.0]))),
        PhaseFunction("X2", lambda s: s.p[1],
                      lambda s: (zero3, np.array([0.0, 1.0, 0.0]))),
        PhaseFunction("X3", lambda s: s.p[2] - B * s.x[1],
                      lambda s: (np.array([0.0, -B, 0.0]), np.array([0.0, 0.0, 1.0]))),
        PhaseFunction(
            "X4",
            lambda s: s.x[1] * s.p[2] - s.x[2] * s.p[1]
            + 0.5 * B * (s.x[2] ** 2 - s.x[1] ** 2),
            lambda s: (np.array([0.0, s.p[2] - B * s.x[1], B * s.x[2] - s.p[1]]),
                       np.array([0.0, -s.x[2], s.x[1]])),
        ),
        PhaseFunction("X5", x5, grad_x5),
        PhaseFunction("X6", x6, grad_x6),
        PhaseFunction("X7", lambda s: 1.0, lambda s: (zero3, zero3)),
    ]


@dataclass(frozen=True)
class BracketTable:
    """Structure constants {basis[i], basis[j]} = sum_k structure[i,j][k] basis[k]."""

    basis: tuple[str, ...]
    structure: dict[tuple[int, int], dict[str, float]]

    def combination(self, i: int, j: int) -> dict[str, float]:
        if i == j:
            return {}
        if i < j:
            return self.structure.get((i, j), {})
        return {k: -c for k, c in self.structure.get((j, i), {}).items()}


def constantB_bracket_table(B: float) -> BracketTable:
    s = {
        (0, 4): {"X6": -B},
        (0, 5): {"X5": B},
        (1, 2): {"X7": B},
        (1, 3): {"X3": -1.0},
        (2, 3): {"X2": 1.0},
        (3, 4): {"X6": 1.0},
        (3, 5): {"X5": -1.0},
        (4, 5): {"X7": -B},
    }
    return BracketTable(_BASIS_NAMES, s)


def verify_bracket_table(B: float, states, use_gradients: bool = True) -> dict:
    """Max discrepancy of every basis pair against the structure table.

    With use_gradients=False the analytic gradients are stripped and
    the brackets fall back to central differences.
    """
    basis = constantB_basis(B)
    if not use_gradients:
        basis = [PhaseFunction(f.name, f.fn, None) for f in basis]
    table = constantB_bracket_table(B)
    by_name = {f.name: f for f in basis}
    pairs: dict[str, float] = {}
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            key = f"{{{basis[i].name},{basis[j].name}}}"
            combo = table.combination(i, j)
            worst = 0.0
            for s in states:
                br = poisson_bracket(basis[i], basis[j], s)
                pred = sum(c * by_name[k](s) for k, c in combo.items())
                worst = max(worst, abs(br - pred))
            pairs[key] = worst
    return {
        "pairs": pairs,
        "max_discrepancy": max(pairs.values()),
        "n_states": len(list(states)),
    }


def _const_b_hamiltonian(B: float, s: PhaseState) -> float:
    return 0.5 * (s.p[0] ** 2 + (s.p[1] - B * s.x[2]) ** 2 + s.p[2] ** 2)


def casimir_check(B: float, states) -> dict:
    """Residuals of 2 X1t X7 + X5^2 + X6^2 = 2H and
    2(B X4 + X1t) X7 + X2^2 + X3^2 = 2H at the given states."""
    basis = {f.name: f for f in constantB_basis(B)}
    r1 = r2 = 0.0
    for s in states:
        h2 = 2.0 * _const_b_hamiltonian(B, s)
        v = {name: f(s) for name, f in basis.items()}
        r1 = max(r1, abs(2 * v["X1t"] * v["X7"] + v["X5"] ** 2 + v["X6"] ** 2 - h2))
        r2 = max(r2, abs(2 * (B * v["X4"] + v["X1t"]) * v["X7"]
                         + v["X2"] ** 2 + v["X3"] ** 2 - h2))
    return {
        "first_casimir": r1,
        "second_casimir": r2,
        "max_residual": max(r1, r2),
        "n_states": len(list(states)),
    }


def _zero_field_model() -> Custom:
    return Custom(
        a=lambda x: np.zeros(3),
        v=lambda x: 0.0,
        b=lambda x: np.zeros(3),
        jac_a=lambda x: np.zeros((3, 3)),
        grad_v=lambda x: np.zeros(3),
    )


def _monopole_angular_functions(g: float, model) -> list[PhaseFunction]:
    """X_j = (x cross p^A)_j + g x_j/|x| with analytic gradients."""

    def make(j: int) -> PhaseFunction:
        def fn(s: PhaseState) -> float:
            pa = s.p + model.vector_potential(s.x)
            r = float(np.linalg.norm(s.x))
            return float(np.cross(s.x, pa)[j] + g * s.x[j] / r)

        def grad(s: PhaseState):
            pa = s.p + model.vector_potential(s.x)
            ja = model.jacobian_a(s.x)
            r = float(np.linalg.norm(s.x))
            gx = np.zeros(3)
            gp = np.zeros(3)
            for k in range(3):
                e = np.zeros(3)
                e[k] = 1.0
                gp[k] = np.cross(s.x, e)[j]
                gx[k] = (np.cross(e, pa)[j] + np.cross(s.x, ja[:, k])[j]
                         + g * ((j == k) / r - s.x[j] * s.x[k] / r**3))
            return gx, gp

        return PhaseFunction(f"X{j + 1}", fn, grad)

    return [make(j) for j in range(3)]


def _monopole_square_function(g: float, model) -> PhaseFunction:
    """(X)^2 = |x cross p^A|^2 + g^2 (l^A is orthogonal to x)."""

    def fn(s: PhaseState) -> float:
        pa = s.p + model.vector_potential(s.x)
        l = np.cross(s.x, pa)
        return float(l @ l) + g * g

    def grad(s: PhaseState):
        pa = s.p + model.vector_potential(s.x)
        ja = model.jacobian_a(s.x)
        l = np.cross(s.x, pa)
        gx = np.zeros(3)
        gp = np.zeros(3)
        for k in range(3):
            e = np.zeros(3)
            e[k] = 1.0
            gp[k] = 2.0 * float(l @ np.cross(s.x, e))
            gx[k] = 2.0 * float(l @ (np.cross(e, pa) + np.cross(s.x, ja[:, k])))
        return gx, gp

    return PhaseFunction("X_sq", fn, grad)


def monopole_closure_check(g: float, states, Q: float = 0.0,
                           use_gradients: bool = True) -> dict:
    """Checks {X1,X2}=X3 (cyclically) and involution of (X)^2 with each X_j.

    g = 0 reduces to the ordinary angular momenta l_j. Analytic
    gradients are the default; use_gradients=False falls back to
    central differences.
    """
    model = Monopole(g=g, Q=Q) if g != 0 else _zero_field_model()
    fns = _monopole_angular_functions(g, model)
    fsq = _monopole_square_function(g, model)
    if not use_gradients:
        fns = [PhaseFunction(f.name, f.fn, None) for f in fns]
        fsq = PhaseFunction(fsq.name, fsq.fn, None)
    checks: dict[str, float] = {}
    for j in range(3):
        k, l = (j + 1) % 3, (j + 2) % 3
        name = f"{{X{j + 1},X{k + 1}}}-X{l + 1}"
        worst = 0.0
        for s in states:
            worst = max(worst, abs(poisson_bracket(fns[j], fns[k], s) - fns[l](s)))
        checks[name] = worst
    for j in range(3):
        worst = 0.0
        for s in states:
            worst = max(worst, abs(poisson_bracket(fsq, fns[j], s)))
        checks[f"{{X_sq,X{j + 1}}}"] = worst
    return {
        "checks": checks,
        "max_discrepancy": max(checks.values()),
        "n_states": len(list(states)),
    }


def runge_lenz(g: float, Q: float, s: PhaseState) -> Vec3:
    """Modified Runge-Lenz vector R = p^A x X - Q x/|x|.

    X = l^A + g x/|x| is the conserved angular vector; R is conserved
    when the scalar potential is g^2/(2|x|^2) - Q/|x|.
    """
    r = float(np.linalg.norm(s.x))
    if g != 0:
        a = Monopole(g=g).vector_potential(s.x)
    else:
        if r < 1e-8:
            raise DomainError("runge_lenz evaluated too close to the center")
        a = np.zeros(3)
    pa = s.p + a
    big_x = np.cross(s.x, pa) + g * s.x / r
    return np.cross(pa, big_x) - Q * s.x / r


def runge_lenz_functions(g: float, Q: float) -> list[PhaseFunction]:
    """R_1, R_2, R_3 as watchable phase functions."""
    return [
        PhaseFunction(f"R{j + 1}", lambda s, jj=j: float(runge_lenz(g, Q, s)[jj]))
        for j in range(3)
    ]


def sample_states(rng, n: int, box: float = 2.0, p1_min: float = 0.0,
                  admissible=None, max_tries: int = 100000) -> list[PhaseState]:
    """Uniform random states in [-box, box]^6 with optional constraints.

    `admissible` filters positions (used to stay off singular loci);
    `p1_min` keeps |p1| away from 0 where X5, X6 need it.
    """
    out: list[PhaseState] = []
    tries = 0
    while len(out) < n:
        tries += 1
        if tries > max_tries:
            raise RuntimeError("state sampling failed to find admissible points")
        x = rng.uniform(-box, box, 3)
        p = rng.uniform(-box, box, 3)
        if p1_min > 0 and abs(p[0]) < p1_min:
            continue
        if admissible is not None and not admissible(x):
            continue
        out.append(PhaseState(x, p))
    return out


def monopole_admissible(x) -> bool:
    """Position filter keeping samples well off the center and the string.

    The gauge factor 1/(r (r + z)) controls both the size of A and the
    accuracy of finite-difference probes, so the exclusion is phrased as
    a lower bound on r + z rather than on the cylinder radius.
    """
    r = float(np.linalg.norm(x))
    return 0.5 < r < 5.0 and r + x[2] > 0.5
