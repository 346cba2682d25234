"""First- and second-order integrals of motion over the covariant basis.

A second-order integral is stored as
    X = sum_{a<=b} alpha_ab Y_a Y_b + s(x) . p^A + m(x),
where Y = (p1^A, p2^A, p3^A, l1^A, l2^A, l3^A) collects the covariant
linear and angular momenta. The module evaluates such integrals,
computes Poisson brackets, and checks the pointwise residuals of the
determining equations that characterize integrals of motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .dynamics import PhaseState
from .errors import UnsupportedModel
from .fields import (
    ConstantB,
    Custom,
    Cylindrical,
    FieldModel,
    HelicalB,
    Monopole,
    Vec3,
    _as_vec3,
    jacobian_fd,
)

#: central-difference step factor for phase-space derivatives
_STEP = float(np.finfo(float).eps) ** (1.0 / 3.0)

_PAIRS = [(a, b) for a in range(1, 7) for b in range(a, 7)]


def _normalize_alpha(alpha) -> dict[tuple[int, int], float]:
    """Accept {(a,b): v} with 1 <= a <= b <= 6, {"ab": v}, or a 6x6 array."""
    if alpha is None:
        return {}
    out: dict[tuple[int, int], float] = {}
    if isinstance(alpha, Mapping):
        for key, val in alpha.items():
            if isinstance(key, str):
                a, b = int(key[0]), int(key[1])
            else:
                a, b = int(key[0]), int(key[1])
            if not (1 <= a <= b <= 6):
                raise ValueError(f"alpha index ({a},{b}) out of range or unordered")
            if val != 0.0:
                out[(a, b)] = out.get((a, b), 0.0) + float(val)
        return out
    arr = np.asarray(alpha, dtype=float)
    if arr.shape != (6, 6):
        raise ValueError("alpha array must be 6x6")
    if not np.allclose(arr, arr.T):
        raise ValueError("alpha array must be symmetric")
    for a, b in _PAIRS:
        v = arr[a - 1, b - 1]
        if v != 0.0:
            out[(a, b)] = float(v)
    return out


def _a(alpha: dict, a: int, b: int) -> float:
    return alpha.get((a, b), 0.0)


@dataclass(frozen=True)
class IntegralSpec:
    """One integral of motion in covariant form.

    `jac_s` (rows ds_i/dx_j) and `grad_m` are optional analytic
    derivatives; central differences are used when absent.
    """

    name: str
    alpha: dict
    s: Callable[[Vec3], Vec3] | None = None
    m: Callable[[Vec3], float] | None = None
    jac_s: Callable[[Vec3], np.ndarray] | None = None
    grad_m: Callable[[Vec3], Vec3] | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", _normalize_alpha(self.alpha))

    def is_first_order(self) -> bool:
        return not self.alpha

    def value_at(self, model: FieldModel, s: PhaseState) -> float:
        return evaluate_integral(self, model, s)


@dataclass(frozen=True)
class CoeffPolynomials:
    """The quadratic polynomials h, n determined by the alpha matrix.

    They are exactly the coefficients of the momentum-quadratic part:
    sum alpha_ab Y_a Y_b = sum_j h_j (p_j^A)^2
                           + n_1 p_2^A p_3^A + n_2 p_1^A p_3^A + n_3 p_1^A p_2^A.
    """

    alpha: dict

    def h(self, pos) -> Vec3:
        x, y, z = _as_vec3(pos)
        al = self.alpha
        h1 = (_a(al, 6, 6) * y**2 + (-_a(al, 5, 6) * z - _a(al, 1, 6)) * y
              + _a(al, 5, 5) * z**2 + _a(al, 1, 5) * z + _a(al, 1, 1))
        h2 = (_a(al, 6, 6) * x**2 + (-_a(al, 4, 6) * z + _a(al, 2, 6)) * x
              + _a(al, 4, 4) * z**2 - _a(al, 2, 4) * z + _a(al, 2, 2))
        h3 = (_a(al, 5, 5) * x**2 + (-_a(al, 4, 5) * y - _a(al, 3, 5)) * x
              + _a(al, 4, 4) * y**2 + _a(al, 3, 4) * y + _a(al, 3, 3))
        return np.array([h1, h2, h3])

    def n(self, pos) -> Vec3:
        x, y, z = _as_vec3(pos)
        al = self.alpha
        n1 = (-_a(al, 5, 6) * x**2
              + (_a(al, 4, 6) * y + _a(al, 4, 5) * z - _a(al, 2, 5) + _a(al, 3, 6)) * x
              + (-2 * _a(al, 4, 4) * z + _a(al, 2, 4)) * y
              - _a(al, 3, 4) * z + _a(al, 2, 3))
        n2 = ((_a(al, 5, 6) * y - 2 * _a(al, 5, 5) * z - _a(al, 1, 5)) * x
              - _a(al, 4, 6) * y**2
              + (_a(al, 4, 5) * z - _a(al, 3, 6) + _a(al, 1, 4)) * y
              + _a(al, 3, 5) * z + _a(al, 1, 3))
        n3 = ((-2 * _a(al, 6, 6) * y + _a(al, 1, 6) + _a(al, 5, 6) * z) * x
              + (_a(al, 4, 6) * z - _a(al, 2, 6)) * y
              - _a(al, 4, 5) * z**2 + (_a(al, 2, 5) - _a(al, 1, 4)) * z + _a(al, 1, 2))
        return np.array([n1, n2, n3])

    def jac_h(self, pos) -> np.ndarray:
        x, y, z = _as_vec3(pos)
        al = self.alpha
        return np.array([
            [0.0,
             2 * _a(al, 6, 6) * y - _a(al, 5, 6) * z - _a(al, 1, 6),
             -_a(al, 5, 6) * y + 2 * _a(al, 5, 5) * z + _a(al, 1, 5)],
            [2 * _a(al, 6, 6) * x - _a(al, 4, 6) * z + _a(al, 2, 6),
             0.0,
             -_a(al, 4, 6) * x + 2 * _a(al, 4, 4) * z - _a(al, 2, 4)],
            [2 * _a(al, 5, 5) * x - _a(al, 4, 5) * y - _a(al, 3, 5),
             -_a(al, 4, 5) * x + 2 * _a(al, 4, 4) * y + _a(al, 3, 4),
             0.0],
        ])

    def jac_n(self, pos) -> np.ndarray:
        x, y, z = _as_vec3(pos)
        al = self.alpha
        return np.array([
            [-2 * _a(al, 5, 6) * x + _a(al, 4, 6) * y + _a(al, 4, 5) * z
             - _a(al, 2, 5) + _a(al, 3, 6),
             _a(al, 4, 6) * x - 2 * _a(al, 4, 4) * z + _a(al, 2, 4),
             _a(al, 4, 5) * x - 2 * _a(al, 4, 4) * y - _a(al, 3, 4)],
            [_a(al, 5, 6) * y - 2 * _a(al, 5, 5) * z - _a(al, 1, 5),
             _a(al, 5, 6) * x - 2 * _a(al, 4, 6) * y + _a(al, 4, 5) * z
             - _a(al, 3, 6) + _a(al, 1, 4),
             -2 * _a(al, 5, 5) * x + _a(al, 4, 5) * y + _a(al, 3, 5)],
            [-2 * _a(al, 6, 6) * y + _a(al, 1, 6) + _a(al, 5, 6) * z,
             -2 * _a(al, 6, 6) * x + _a(al, 4, 6) * z - _a(al, 2, 6),
             _a(al, 5, 6) * x + _a(al, 4, 6) * y - 2 * _a(al, 4, 5) * z
             + _a(al, 2, 5) - _a(al, 1, 4)],
        ])


def build_hn_from_alpha(alpha) -> CoeffPolynomials:
    return CoeffPolynomials(_normalize_alpha(alpha))


def covariant_momentum(model: FieldModel, s: PhaseState) -> Vec3:
    return s.p + model.vector_potential(s.x)


def covariant_angular_momentum(model: FieldModel, s: PhaseState) -> Vec3:
    return np.cross(s.x, covariant_momentum(model, s))


def evaluate_integral(spec: IntegralSpec, model: FieldModel, s: PhaseState) -> float:
    pa = covariant_momentum(model, s)
    val = 0.0
    if spec.alpha:
        y = np.concatenate([pa, np.cross(s.x, pa)])
        for (a, b), c in spec.alpha.items():
            val += c * y[a - 1] * y[b - 1]
    if spec.s is not None:
        val += float(_as_vec3(spec.s(s.x)) @ pa)
    if spec.m is not None:
        val += float(spec.m(s.x))
    return val


# ---------------------------------------------------------------------------
# Poisson brackets


@dataclass(frozen=True)
class PhaseFunction:
    """Scalar function on phase space, optionally with analytic gradient.

    `grad(state)` returns (df/dx, df/dp) as two 3-vectors.
    """

    name: str
    fn: Callable[[PhaseState], float]
    grad: Callable[[PhaseState], tuple[Vec3, Vec3]] | None = None

    def __call__(self, s: PhaseState) -> float:
        return float(self.fn(s))

    @property
    def value(self):
        return self.fn


def as_phase_function(obj, model: FieldModel | None = None, name: str = "") -> PhaseFunction:
    if isinstance(obj, PhaseFunction):
        return obj
    if isinstance(obj, IntegralSpec):
        if model is None:
            raise ValueError("an IntegralSpec needs a model to become a phase function")
        return PhaseFunction(name or obj.name, lambda s: evaluate_integral(obj, model, s))
    if callable(obj):
        return PhaseFunction(name or getattr(obj, "__name__", "f"), obj)
    raise TypeError(f"cannot interpret {type(obj).__name__} as a phase-space function")


def hamiltonian_function(model: FieldModel) -> PhaseFunction:
    def fn(s: PhaseState) -> float:
        v = s.p + model.vector_potential(s.x)
        return 0.5 * float(v @ v) + model.scalar_potential(s.x)

    def grad(s: PhaseState):
        v = s.p + model.vector_potential(s.x)
        gx = model.jacobian_a(s.x).T @ v + model.grad_potential(s.x)
        return gx, v

    return PhaseFunction("H", fn, grad)


def _fd_phase_gradient(fn, s: PhaseState) -> tuple[Vec3, Vec3]:
    gx = np.zeros(3)
    gp = np.zeros(3)
    for j in range(3):
        h = _STEP * max(1.0, abs(s.x[j]))
        xp, xm = s.x.copy(), s.x.copy()
        xp[j] += h
        xm[j] -= h
        gx[j] = (fn(PhaseState(xp, s.p)) - fn(PhaseState(xm, s.p))) / (2 * h)
        h = _STEP * max(1.0, abs(s.p[j]))
        pp, pm = s.p.copy(), s.p.copy()
        pp[j] += h
        pm[j] -= h
        gp[j] = (fn(PhaseState(s.x, pp)) - fn(PhaseState(s.x, pm))) / (2 * h)
    return gx, gp


def phase_gradient(f, s: PhaseState) -> tuple[Vec3, Vec3]:
    if isinstance(f, PhaseFunction) and f.grad is not None:
        gx, gp = f.grad(s)
        return _as_vec3(gx), _as_vec3(gp)
    fn = f.fn if isinstance(f, PhaseFunction) else f
    return _fd_phase_gradient(fn, s)


def poisson_bracket(f, g, s: PhaseState) -> float:
    """{f, g} at s; analytic gradients are used when both carry them."""
    fx, fp = phase_gradient(f, s)
    gx, gp = phase_gradient(g, s)
    return float(fx @ gp - gx @ fp)


# ---------------------------------------------------------------------------
# determining-equation residuals

#: residual record keys, in report order
RESIDUAL_KEYS = (
    "ds1_dx", "ds2_dy", "ds3_dz",
    "ds1_dy+ds2_dx", "ds1_dz+ds3_dx", "ds3_dy+ds2_dz",
    "dm_dx", "dm_dy", "dm_dz",
    "zero_order",
)


def _spec_s(spec: IntegralSpec, x: Vec3) -> Vec3:
    return _as_vec3(spec.s(x)) if spec.s is not None else np.zeros(3)


def _spec_jac_s(spec: IntegralSpec, x: Vec3) -> np.ndarray:
    if spec.s is None:
        return np.zeros((3, 3))
    if spec.jac_s is not None:
        return np.asarray(spec.jac_s(x), dtype=float)
    return _fd_jacobian(lambda q: _as_vec3(spec.s(q)), x)


def _spec_grad_m(spec: IntegralSpec, x: Vec3) -> Vec3:
    if spec.m is None:
        return np.zeros(3)
    if spec.grad_m is not None:
        return _as_vec3(spec.grad_m(x))
    g = np.zeros(3)
    for j in range(3):
        h = _STEP * max(1.0, abs(x[j]))
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        g[j] = (spec.m(xp) - spec.m(xm)) / (2 * h)
    return g


def _fd_jacobian(fn, x: Vec3) -> np.ndarray:
    j = np.zeros((3, 3))
    for col in range(3):
        h = _STEP * max(1.0, abs(x[col]))
        xp, xm = x.copy(), x.copy()
        xp[col] += h
        xm[col] -= h
        j[:, col] = (fn(xp) - fn(xm)) / (2 * h)
    return j


def determining_residuals(
    spec: IntegralSpec,
    model: FieldModel,
    x,
    mode: str = "classical",
    hbar: float = 1.0,
) -> dict[str, float]:
    """Pointwise residuals of the determining equations at x.

    Keys: the three diagonal and three mixed second-order conditions,
    the three first-order conditions, and the zero-order condition. In
    quantum mode the zero-order entry gains the hbar^2/4 term built from
    derivatives of n and B; first-order integrals get no correction.
    """
    if mode not in ("classical", "quantum"):
        raise ValueError(f"unknown mode {mode!r}")
    x = _as_vec3(x)
    model.check_domain(x)
    poly = build_hn_from_alpha(spec.alpha)
    h1, h2, h3 = poly.h(x)
    n1, n2, n3 = poly.n(x)
    b1, b2, b3 = model.magnetic_field(x)
    vx, vy, vz = model.grad_potential(x)
    sv = _spec_s(spec, x)
    js = _spec_jac_s(spec, x)
    gm = _spec_grad_m(spec, x)

    res = {
        "ds1_dx": js[0, 0] - (n2 * b2 - n3 * b3),
        "ds2_dy": js[1, 1] - (n3 * b3 - n1 * b1),
        "ds3_dz": js[2, 2] - (n1 * b1 - n2 * b2),
        "ds1_dy+ds2_dx": js[0, 1] + js[1, 0]
        - (n1 * b2 - n2 * b1 + 2 * (h1 - h2) * b3),
        "ds1_dz+ds3_dx": js[0, 2] + js[2, 0]
        - (n3 * b1 - n1 * b3 + 2 * (h3 - h1) * b2),
        "ds3_dy+ds2_dz": js[2, 1] + js[1, 2]
        - (n2 * b3 - n3 * b2 + 2 * (h2 - h3) * b1),
        "dm_dx": gm[0] - (2 * h1 * vx + n3 * vy + n2 * vz + sv[2] * b2 - sv[1] * b3),
        "dm_dy": gm[1] - (n3 * vx + 2 * h2 * vy + n1 * vz + sv[0] * b3 - sv[2] * b1),
        "dm_dz": gm[2] - (n2 * vx + n1 * vy + 2 * h3 * vz + sv[1] * b1 - sv[0] * b2),
        "zero_order": float(sv @ np.array([vx, vy, vz])),
    }
    if mode == "quantum" and spec.alpha:
        jn = poly.jac_n(x)
        jb = jacobian_fd(model.magnetic_field, x)
        corr = (jn[0, 2] * jb[0, 2] - jn[0, 1] * jb[0, 1]
                + jn[1, 0] * jb[1, 0] - jn[1, 2] * jb[1, 2]
                + jn[2, 1] * jb[2, 1] - jn[2, 0] * jb[2, 0]
                + jn[0, 0] * jb[1, 1] - jn[1, 1] * jb[0, 0])
        res["zero_order"] += 0.25 * hbar**2 * corr
    return {k: float(v) for k, v in res.items()}


# ---------------------------------------------------------------------------
# known integrals per system


def _const_b_specs(model: ConstantB) -> list[IntegralSpec]:
    B = model.B
    return [
        IntegralSpec(
            "X1", {},
            s=lambda x: np.array([1.0, 0.0, 0.0]),
            m=lambda x: 0.0,
            jac_s=lambda x: np.zeros((3, 3)),
            grad_m=lambda x: np.zeros(3),
        ),
        IntegralSpec(
            "X2", {},
            s=lambda x: np.array([0.0, 1.0, 0.0]),
            m=lambda x: B * x[2],
            jac_s=lambda x: np.zeros((3, 3)),
            grad_m=lambda x: np.array([0.0, 0.0, B]),
        ),
        IntegralSpec(
            "X3", {},
            s=lambda x: np.array([0.0, 0.0, 1.0]),
            m=lambda x: -B * x[1],
            jac_s=lambda x: np.zeros((3, 3)),
            grad_m=lambda x: np.array([0.0, -B, 0.0]),
        ),
        IntegralSpec(
            "X4", {},
            s=lambda x: np.array([0.0, -x[2], x[1]]),
            m=lambda x: -0.5 * B * (x[1] ** 2 + x[2] ** 2),
            jac_s=lambda x: np.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]], dtype=float),
            grad_m=lambda x: np.array([0.0, -B * x[1], -B * x[2]]),
        ),
    ]


def _helical_specs(model: HelicalB) -> list[IntegralSpec]:
    amp, beta, phi0 = model.A_amp, model.beta, model.phi0

    def u(x):
        return (x[2] + phi0) / beta

    return [
        IntegralSpec(
            "X1", {},
            s=lambda x: np.array([1.0, 0.0, 0.0]),
            m=lambda x: amp * math.cos(u(x)),
            jac_s=lambda x: np.zeros((3, 3)),
            grad_m=lambda x: np.array([0.0, 0.0, -amp * math.sin(u(x)) / beta]),
        ),
        IntegralSpec(
            "X2", {},
            s=lambda x: np.array([0.0, 1.0, 0.0]),
            m=lambda x: amp * math.sin(u(x)),
            jac_s=lambda x: np.zeros((3, 3)),
            grad_m=lambda x: np.array([0.0, 0.0, amp * math.cos(u(x)) / beta]),
        ),
        IntegralSpec(
            "X3", {},
            s=lambda x: np.array([-x[1], x[0], beta]),
            m=lambda x: amp * (x[0] * math.sin(u(x)) - x[1] * math.cos(u(x))),
            jac_s=lambda x: np.array([[0, -1, 0], [1, 0, 0], [0, 0, 0]], dtype=float),
            grad_m=lambda x: np.array([
                amp * math.sin(u(x)),
                -amp * math.cos(u(x)),
                amp * (x[0] * math.cos(u(x)) + x[1] * math.sin(u(x))) / beta,
            ]),
        ),
    ]


def _unit_radial(j: int):
    """x_j/|x| and its gradient, as closures."""

    def val(x):
        return x[j] / np.linalg.norm(x)

    def grad(x):
        r = np.linalg.norm(x)
        g = -x[j] * x / r**3
        g[j] += 1.0 / r
        return g

    return val, grad


def monopole_angular_specs(g: float) -> list[IntegralSpec]:
    """X_j = l_j^A + g x_j/|x| for j = 1..3."""
    s_rows = {
        0: lambda x: np.array([0.0, -x[2], x[1]]),
        1: lambda x: np.array([x[2], 0.0, -x[0]]),
        2: lambda x: np.array([-x[1], x[0], 0.0]),
    }
    jac_rows = {
        0: np.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]], dtype=float),
        1: np.array([[0, 0, 1], [0, 0, 0], [-1, 0, 0]], dtype=float),
        2: np.array([[0, -1, 0], [1, 0, 0], [0, 0, 0]], dtype=float),
    }
    specs = []
    for j in range(3):
        val, grad = _unit_radial(j)
        specs.append(IntegralSpec(
            f"X{j + 1}", {},
            s=s_rows[j],
            m=(lambda x, v=val: g * v(x)),
            jac_s=(lambda x, jr=jac_rows[j]: jr),
            grad_m=(lambda x, gr=grad: g * gr(x)),
        ))
    return specs


def monopole_total_square_spec(g: float) -> IntegralSpec:
    """(X)^2 = sum_j (l_j^A)^2 + g^2."""
    return IntegralSpec(
        "X_sq", {(4, 4): 1.0, (5, 5): 1.0, (6, 6): 1.0},
        s=None,
        m=lambda x: g**2,
        grad_m=lambda x: np.zeros(3),
    )


def monopole_runge_lenz_specs(g: float, Q: float) -> list[IntegralSpec]:
    """R_j = eps_jkl p_k^A X_l - Q x_j/|x| in covariant form.

    The quadratic parts are p2^A l3^A - p3^A l2^A and cyclic; the rest
    folds into s and m.
    """
    alphas = [
        {(2, 6): 1.0, (3, 5): -1.0},
        {(1, 6): -1.0, (3, 4): 1.0},
        {(1, 5): 1.0, (2, 4): -1.0},
    ]

    def s_fn(j):
        def s(x):
            r = np.linalg.norm(x)
            e = np.zeros(3)
            e[j] = 1.0
            return g * np.cross(x, e) / r

        return s

    def jac_s_fn(j):
        def jac(x):
            r = np.linalg.norm(x)
            e = np.zeros(3)
            e[j] = 1.0
            c = np.cross(x, e)
            jc = np.zeros((3, 3))
            jc[(j + 1) % 3, (j + 2) % 3] = 1.0
            jc[(j + 2) % 3, (j + 1) % 3] = -1.0
            # rows: d/dx_k of g c_i / r
            return g * (jc / r - np.outer(c, x) / r**3)

        return jac

    specs = []
    for j in range(3):
        val, grad = _unit_radial(j)
        specs.append(IntegralSpec(
            f"R{j + 1}", alphas[j],
            s=s_fn(j),
            m=(lambda x, v=val: -Q * v(x)),
            jac_s=jac_s_fn(j),
            grad_m=(lambda x, gr=grad: -Q * gr(x)),
        ))
    return specs


def _cylindrical_specs(model: Cylindrical) -> list[IntegralSpec]:
    def radius(x):
        return math.hypot(x[0], x[1])

    return [
        IntegralSpec(
            "l3", {},
            s=lambda x: np.array([-x[1], x[0], 0.0]),
            m=lambda x: -model.f2(radius(x)),
            jac_s=lambda x: np.array([[0, -1, 0], [1, 0, 0], [0, 0, 0]], dtype=float),
            grad_m=lambda x: (lambda r: np.array(
                [-model.df2(r) * x[0] / r, -model.df2(r) * x[1] / r, 0.0]))(radius(x)),
        ),
        IntegralSpec(
            "p3", {},
            s=lambda x: np.array([0.0, 0.0, 1.0]),
            m=lambda x: model.f1(radius(x)),
            jac_s=lambda x: np.zeros((3, 3)),
            grad_m=lambda x: (lambda r: np.array(
                [model.df1(r) * x[0] / r, model.df1(r) * x[1] / r, 0.0]))(radius(x)),
        ),
    ]


def known_integrals(model: FieldModel) -> list[IntegralSpec]:
    """The integrals of motion attached to each named field model.

    For the monopole, the Runge-Lenz components are included only when
    the scalar potential carries the g^2/(2|x|^2) barrier that makes
    them conserved.
    """
    if isinstance(model, ConstantB):
        return _const_b_specs(model)
    if isinstance(model, HelicalB):
        return _helical_specs(model)
    if isinstance(model, Monopole):
        specs = monopole_angular_specs(model.g)
        specs.append(monopole_total_square_spec(model.g))
        if model.barrier:
            specs.extend(monopole_runge_lenz_specs(model.g, model.Q))
        return specs
    if isinstance(model, Cylindrical):
        return _cylindrical_specs(model)
    raise UnsupportedModel(f"no known integrals for {type(model).__name__}")
