"""Equivariant witness functions on S^5 x D x S^3 x S^3, the common zero set of
v1, v2, v3 on S^3 and the checks around it.

Points of S^3 are unit quaternions z1 + z2 j, stored as real 4-vectors
(Re z1, Im z1, Re z2, Im z2). Points of the full space live in R^16 with
coordinates (a0..a5, Re z, Im z, first quaternion, second quaternion).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .sphere_groups import FiniteGroup, HAT_G1, HAT_G2, Transform, group_closure, right_matrix, tilde_generators

EPSILON = 1.0 / 2026.0
ROOT_HALF = 2.0 ** -0.5

# rows: g0, g1, g2 ; columns: f0..f4
F_SIGN_TABLE = np.array([
    [-1, -1, -1, -1, -1],
    [1, -1, -1, 1, 1],
    [1, -1, 1, -1, 1],
])
# v1, v2, v3 do not depend on a, so g0 leaves them fixed; g1 and g2 flip them
V_SIGN_TABLE = np.array([
    [1, 1, 1],
    [-1, -1, -1],
    [-1, -1, -1],
])


@dataclass(frozen=True)
class WitnessPoint:
    z1: complex
    z2: complex
    a: tuple[float, ...] | None = None
    label: tuple[int, int] | None = None  # (l, m) for enumerated points
    theta: float | None = None

    def __post_init__(self):
        if abs(abs(self.z1) ** 2 + abs(self.z2) ** 2 - 1.0) > 1e-12:
            raise ValueError("(z1, z2) must be a unit vector")
        if self.a is not None and abs(np.linalg.norm(self.a) - 1.0) > 1e-12:
            raise ValueError("a must be a unit vector")

    def as_real(self) -> np.ndarray:
        return np.array([self.z1.real, self.z1.imag, self.z2.real, self.z2.imag])


def _complex(q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    q = np.asarray(q, dtype=float)
    return q[..., 0] + 1j * q[..., 1], q[..., 2] + 1j * q[..., 3]


def v_real(q: np.ndarray) -> np.ndarray:
    """(v1, v2, v3) at quaternions given as (..., 4) real arrays."""
    z1, z2 = _complex(q)
    d = z1**12 - z2**12
    w = np.exp(1j * EPSILON * np.pi) * (z1 * z2**13 + z1**13 * z2)
    return np.stack([d.real, d.imag, w.real], axis=-1)


def v_values(p: WitnessPoint) -> tuple[float, float, float]:
    return tuple(float(x) for x in v_real(p.as_real()))


def f_real(a: np.ndarray, q: np.ndarray) -> np.ndarray:
    """(f0, .., f4) for a in R^6 and quaternions q, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    z1, z2 = _complex(q)
    first = (np.conj(z1) ** 6 + z2**6) * (a[..., 1] + 1j * a[..., 2])
    second = (np.conj(z1) ** 4 + z2**4) * (a[..., 3] + 1j * a[..., 4])
    return np.stack(np.broadcast_arrays(a[..., 0], first.real, first.imag, second.real, second.imag), axis=-1)


def f_values(a: Sequence[float], p: WitnessPoint) -> tuple[float, ...]:
    return tuple(float(x) for x in f_real(np.asarray(a), p.as_real()))


# ---------------------------------------------------------------- zero set


def enumerate_z_alpha3() -> list[WitnessPoint]:
    """All 336 common zeros of v1, v2, v3 in closed form."""
    out = []
    for l in range(12):
        for m in range(28):
            theta = ((0.5 + m) - EPSILON - l / 6) * np.pi / 14
            z1 = ROOT_HALF * np.exp(1j * theta)
            z2 = ROOT_HALF * np.exp(1j * (theta + l * np.pi / 6))
            out.append(WitnessPoint(complex(z1), complex(z2), label=(l, m), theta=float(theta)))
    return out


def zero_set_array(points: Sequence[WitnessPoint] | None = None) -> np.ndarray:
    pts = enumerate_z_alpha3() if points is None else points
    return np.array([p.as_real() for p in pts])


def min_pairwise_distance(q: np.ndarray) -> float:
    d = np.linalg.norm(q[:, None, :] - q[None, :, :], axis=-1)
    np.fill_diagonal(d, np.inf)
    return float(d.min())


def nonvanishing_factors(q: np.ndarray) -> tuple[float, float]:
    """Smallest moduli of conj(z1)^6 + z2^6 and conj(z1)^4 + z2^4 over the points."""
    z1, z2 = _complex(q)
    return float(np.abs(np.conj(z1) ** 6 + z2**6).min()), float(np.abs(np.conj(z1) ** 4 + z2**4).min())


def torus_zero_search(n_grid: int = 720, tol: float = 1e-12) -> np.ndarray:
    """Oracle: dense search of {v = 0} on the torus |z1| = |z2| = 2^-1/2, then Gauss-Newton polish."""
    from scipy.optimize import least_squares

    def point(t):
        return ROOT_HALF * np.stack([np.cos(t[..., 0]), np.sin(t[..., 0]), np.cos(t[..., 1]), np.sin(t[..., 1])], -1)

    ang = np.linspace(0, 2 * np.pi, n_grid, endpoint=False)
    T1, T2 = np.meshgrid(ang, ang, indexing="ij")
    G = (v_real(point(np.stack([T1, T2], -1))) ** 2).sum(-1)
    is_min = np.ones_like(G, dtype=bool)
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            if dx or dy:
                is_min &= G <= np.roll(np.roll(G, dx, 0), dy, 1)
    found: list[np.ndarray] = []
    for i, j in np.argwhere(is_min):
        sol = least_squares(lambda t: v_real(point(t)) * 64, [T1[i, j], T2[i, j]], xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if np.abs(v_real(point(sol.x))).max() < tol:
            q = point(sol.x)
            if all(np.linalg.norm(q - r) > 1e-6 for r in found):
                found.append(q)
    return np.array(found)


def match_point_sets(a: np.ndarray, b: np.ndarray, tol: float = 1e-6) -> bool:
    """True when the nearest-neighbour relation is a bijection within ``tol``."""
    if len(a) != len(b):
        return False
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)
    nn_ab = d.argmin(axis=1)
    nn_ba = d.argmin(axis=0)
    return bool(np.all(d.min(axis=1) < tol) and np.all(nn_ba[nn_ab] == np.arange(len(a))))


def first_factor_group() -> FiniteGroup:
    """The order-48 group acting on the first S^3 factor by right multiplication."""
    return group_closure([Transform(right_matrix(HAT_G1[0])), Transform(right_matrix(HAT_G2[0]))])


def orbit_count(q: np.ndarray, group: FiniteGroup | None = None, tol: float = 1e-8) -> tuple[int, list[int]]:
    grp = group or first_factor_group()
    orbits = grp.orbit_partition(q, tol)
    return len(orbits), [len(o) for o in orbits]


# ---------------------------------------------------------------- sign laws


@dataclass(frozen=True)
class SignLawReport:
    v_residual: float
    f_residual: float
    samples: int

    @property
    def max_residual(self) -> float:
        return max(self.v_residual, self.f_residual)


def random_total_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random points of S^5 x D x S^3 x S^3 in R^16."""
    a = rng.normal(size=(n, 6))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    r = np.sqrt(rng.uniform(size=n))
    t = rng.uniform(0, 2 * np.pi, n)
    q1 = rng.normal(size=(n, 4))
    q1 /= np.linalg.norm(q1, axis=1, keepdims=True)
    q2 = rng.normal(size=(n, 4))
    q2 /= np.linalg.norm(q2, axis=1, keepdims=True)
    return np.column_stack([a, r * np.cos(t), r * np.sin(t), q1, q2])


def _witness_vectors(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return v_real(x[:, 8:12]), f_real(x[:, :6], x[:, 8:12])


def equivariance_table_check(samples: int = 100, seed: int = 0, points: np.ndarray | None = None) -> SignLawReport:
    """Largest deviation from v(p g) = sign v(p) and f(p g) = sign f(p) over the three generators."""
    x = random_total_points(np.random.default_rng(seed), samples) if points is None else points
    v0, f0 = _witness_vectors(x)
    worst_v = worst_f = 0.0
    for k, g in enumerate(tilde_generators()):
        v1, f1 = _witness_vectors(g.apply(x))
        worst_v = max(worst_v, float(np.abs(v1 - V_SIGN_TABLE[k] * v0).max()))
        worst_f = max(worst_f, float(np.abs(f1 - F_SIGN_TABLE[k] * f0).max()))
    return SignLawReport(worst_v, worst_f, len(x))


def measured_sign_table(samples: int = 50, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Signs read off numerically, independent of the tables above."""
    x = random_total_points(np.random.default_rng(seed), samples)
    v0, f0 = _witness_vectors(x)
    vt, ft = [], []
    for g in tilde_generators():
        v1, f1 = _witness_vectors(g.apply(x))
        vt.append(np.sign(np.median(v1 / v0, axis=0)))
        ft.append(np.sign(np.median(f1 / f0, axis=0)))
    return np.array(vt, dtype=int), np.array(ft, dtype=int)


# ---------------------------------------------------------------- differential checks


def _fd_gradient(func: Callable[[np.ndarray], np.ndarray], x: np.ndarray, step: float) -> np.ndarray:
    n = len(x)
    e = np.eye(n) * step
    return np.array([(func(x + e[i]) - func(x - e[i])) / (2 * step) for i in range(n)]).T


def gradient_independence(point: np.ndarray, functions: Callable[[np.ndarray], np.ndarray] | Sequence[Callable],
                          step: float = 1e-5) -> float:
    """Smallest singular value of the sphere-tangential Jacobian of the functions at ``point``."""
    x = np.asarray(point, dtype=float)
    if callable(functions):
        func = functions
    else:
        funcs = list(functions)
        func = lambda y: np.array([f(y) for f in funcs], dtype=float)  # noqa: E731
    jac = np.atleast_2d(_fd_gradient(func, x, step))
    normal = x / np.linalg.norm(x)
    jac = jac - np.outer(jac @ normal, normal)
    return float(np.linalg.svd(jac, compute_uv=False).min())


def v_functions() -> list[Callable[[np.ndarray], float]]:
    return [lambda q, k=k: float(v_real(q)[k]) for k in range(3)]


def f_functions_of_a(q: np.ndarray) -> list[Callable[[np.ndarray], float]]:
    return [lambda a, k=k: float(f_real(a, q)[k]) for k in range(5)]


_J = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)


def holomorphy_residual(f: Callable[[complex, complex], complex], points: np.ndarray, step: float = 1e-5) -> float:
    """max |J grad Re f - grad Im f| over the points, gradients by central differences."""
    def real_parts(q):
        val = f(complex(q[0], q[1]), complex(q[2], q[3]))
        return np.array([val.real, val.imag])

    worst = 0.0
    for q in np.asarray(points, dtype=float):
        jac = _fd_gradient(real_parts, q, step)
        worst = max(worst, float(np.linalg.norm(_J @ jac[0] - jac[1])))
    return worst


# ---------------------------------------------------------------- export


def write_zero_set_csv(path: str, points: Sequence[WitnessPoint] | None = None) -> None:
    pts = enumerate_z_alpha3() if points is None else points
    with open(path, "w") as fh:
        fh.write("theta,l,m,re_z1,im_z1,re_z2,im_z2\n")
        for p in pts:
            l, m = p.label if p.label else ("", "")
            fh.write(f"{p.theta!r},{l},{m},{p.z1.real!r},{p.z1.imag!r},{p.z2.real!r},{p.z2.imag!r}\n")
