"""The implicit surface family on S^3: cut-offs, the defining functions, the
critical curve near the singular circle, and genus by zero counting.

Parameters are ``(a, z)`` with ``a`` a point of RP^5 and ``z = r e^{i theta}``
in the closed unit disc. For ``a5 != 0`` every quantity is computed on the
representative scaled to ``a5 = 1``; the family is homogeneous of degree 0 in
``a`` so the choice of representative never matters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .sphere_groups import Isometry4, act_on_chart, generator, r4_to_chart, varsigma
from .trigpoly import TWO_PI, SignedZeroData, ZeroResolutionError, zeros_of_smooth

DELTA0 = 1e-4
A5_GUARD = 1e-14
FP_TOL = 1e-12
FP_MAX_ITER = 200
N_ALPHA = 4096


class NonContractionError(RuntimeError):
    """Fixed-point iteration for the critical curve failed to converge."""

    code = "NON_CONTRACTION"


class ParameterError(ValueError):
    """Parameter outside the domain of an operation."""


# ---------------------------------------------------------------- parameters


def normalize_projective(a: Sequence[float]) -> tuple[float, ...]:
    """Unit-norm representative whose first nonzero coordinate is positive."""
    v = np.asarray(a, dtype=float)
    if v.shape != (6,):
        raise ParameterError("projective parameter needs 6 coordinates")
    n = np.linalg.norm(v)
    if n == 0 or not np.isfinite(n):
        raise ParameterError("projective parameter must be nonzero and finite")
    v = v / n
    nz = np.nonzero(v)[0]
    if v[nz[0]] < 0:
        v = -v
    return tuple(float(x) + 0.0 for x in v)


@dataclass(frozen=True)
class FamilyParameter:
    a: tuple[float, ...]
    r: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", normalize_projective(self.a))
        r = float(self.r)
        if not (0.0 <= r <= 1.0 + 1e-12):
            raise ParameterError(f"disc radius {r} outside [0, 1]")
        object.__setattr__(self, "r", min(r, 1.0))
        object.__setattr__(self, "theta", float(np.mod(self.theta, TWO_PI)) % TWO_PI)

    @classmethod
    def from_z(cls, a: Sequence[float], z: complex) -> "FamilyParameter":
        return cls(tuple(a), abs(z), float(np.angle(z)) if z != 0 else 0.0)

    @property
    def z(self) -> complex:
        return self.r * np.exp(1j * self.theta)

    @property
    def on_boundary(self) -> bool:
        return self.r == 1.0

    @property
    def affine(self) -> np.ndarray:
        """Representative with a5 = 1."""
        a = np.asarray(self.a)
        if abs(a[5]) < A5_GUARD:
            raise ParameterError("a5 = 0: the defining function has no implicit form")
        return a / a[5]

    def to_dict(self) -> dict:
        return {"a": list(self.a), "r": self.r, "theta": self.theta}


def same_projective_point(a: Sequence[float], b: Sequence[float], tol: float = 1e-12) -> bool:
    return bool(np.allclose(normalize_projective(a), normalize_projective(b), atol=tol))


# ---------------------------------------------------------------- cut-offs


def _h(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def zeta(s):
    """Smooth non-increasing step: 1 on (-inf, 1/2], 0 on [1, inf)."""
    s = np.asarray(s, dtype=float)
    p, q = _h(1.0 - s), _h(s - 0.5)
    out = np.where(s <= 0.5, 1.0, 0.0)
    mid = (s > 0.5) & (s < 1.0)
    out = np.where(mid, p / np.where(mid, p + q, 1.0), out)
    return out if out.ndim else float(out)


def zeta_prime(s):
    s = np.asarray(s, dtype=float)
    mid = (s > 0.5) & (s < 1.0)
    t1 = np.where(mid, 1.0 - s, 1.0)
    t2 = np.where(mid, s - 0.5, 1.0)
    p, q = np.exp(-1.0 / t1), np.exp(-1.0 / t2)
    dp, dq = p / t1**2, q / t2**2
    # d/ds p(1-s) = -dp ; d/ds q(s-1/2) = dq
    val = (-dp * (p + q) - p * (-dp + dq)) / (p + q) ** 2
    out = np.where(mid, val, 0.0)
    return out if out.ndim else float(out)


def delta(s, delta0: float = DELTA0):
    """delta0 * exp(-s^2 / (1 - s^2)) on (-1, 1), zero outside."""
    s = np.asarray(s, dtype=float)
    inside = np.abs(s) < 1.0
    ss = np.where(inside, s, 0.0)
    out = np.where(inside, delta0 * np.exp(-(ss**2) / (1.0 - ss**2)), 0.0)
    return out if out.ndim else float(out)


def kappa(a: Sequence[float]) -> float:
    """Radius scale (1 - |(a1, a2)|) / 4 of the cut-off around the singular circle."""
    b = np.asarray(a, dtype=float)
    b = b / b[5]
    return (1.0 - np.hypot(b[1], b[2])) / 4.0


# ---------------------------------------------------------------- the family


@dataclass(frozen=True)
class CriticalCurve:
    alpha: np.ndarray
    points: np.ndarray  # (n, 2) values of the critical curve
    residual: float  # max |grad_x F| at the returned points
    iterations: int
    center: tuple[float, float]
    kappa: float
    spline: Callable = field(repr=False, compare=False, default=None)

    @property
    def max_deviation(self) -> float:
        return float(np.linalg.norm(self.points - np.asarray(self.center), axis=1).max())

    def __call__(self, alpha) -> np.ndarray:
        """Periodic cubic interpolation of the sampled curve."""
        return self.spline(np.mod(alpha, TWO_PI))


@dataclass(frozen=True)
class Phi5Classification:
    kind: str  # empty | great_sphere | plane_section | singular_pair | quadric
    singular: bool
    linear: bool
    empty: bool
    circle_center: tuple[float, float] | None
    circle_radius: float | None
    expected_genus: int | None
    nontransverse_bound: int = 9


class SurfaceFamily:
    """The family with a fixed cut-off amplitude ``delta0``."""

    def __init__(self, delta0: float = DELTA0):
        if not (0 < delta0 < 1):
            raise ParameterError("delta0 must lie in (0, 1)")
        self.delta0 = float(delta0)

    # ---- rho

    def _rho_parts(self, b: np.ndarray):
        """Offsets, support radius and the constant factor of rho for a5 = 1."""
        s = b[1] ** 2 + b[2] ** 2
        if s >= 1.0:
            return None
        d = delta(s, self.delta0)
        if d <= 0.0:
            return None
        second = zeta((b[3] ** 2 + b[4] ** 2 + (b[0] - b[1] * b[2]) ** 2) / d)
        const = float(second * d)
        if const <= 0.0:
            return None
        return s, const

    def rho_affine(self, b: np.ndarray, x1, x2):
        parts = self._rho_parts(b)
        x1 = np.asarray(x1, dtype=float)
        if parts is None:
            return np.zeros(np.broadcast(x1, x2).shape)
        s, const = parts
        u = 64.0 * ((x1 + b[2]) ** 2 + (x2 + b[1]) ** 2) / (1.0 - s) ** 2
        return const * zeta(u)

    def rho_grad_affine(self, b: np.ndarray, x1, x2):
        parts = self._rho_parts(b)
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        if parts is None:
            z = np.zeros(np.broadcast(x1, x2).shape)
            return z, z
        s, const = parts
        c = 64.0 / (1.0 - s) ** 2
        u = c * ((x1 + b[2]) ** 2 + (x2 + b[1]) ** 2)
        dz = const * zeta_prime(u)
        return dz * 2 * c * (x1 + b[2]), dz * 2 * c * (x2 + b[1])

    def rho(self, a: Sequence[float], x1, x2):
        """rho(a, x); zero when a5 = 0 or a1^2 + a2^2 >= a5^2."""
        v = np.asarray(a, dtype=float)
        if abs(v[5]) < A5_GUARD or v[1] ** 2 + v[2] ** 2 >= v[5] ** 2:
            return np.zeros(np.broadcast(np.asarray(x1), np.asarray(x2)).shape)
        return self.rho_affine(v / v[5], x1, x2)

    def rho_identically_zero(self, a: Sequence[float]) -> bool:
        v = np.asarray(a, dtype=float)
        if abs(v[5]) < A5_GUARD:
            return True
        return self._rho_parts(v / v[5]) is None

    # ---- F

    @staticmethod
    def _weight(param: FamilyParameter, alpha):
        r, th = param.r, param.theta
        return r * np.cos(th + 2 * alpha) + (1 - r) * np.cos(3 * alpha)

    def F(self, param: FamilyParameter, x1, x2, alpha):
        """Defining function in chart coordinates."""
        b = param.affine
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        alpha = np.asarray(alpha, dtype=float)
        s = varsigma(x1, x2)
        return (
            b[0]
            + b[1] * x1
            + b[2] * x2
            + s * (b[3] * np.cos(alpha) + b[4] * np.sin(alpha))
            + x1 * x2
            + self.rho_affine(b, x1, x2) * self._weight(param, alpha)
        )

    def F_points(self, param: FamilyParameter, points: np.ndarray):
        """Defining function at points of S^3 given in R^4."""
        p = np.asarray(points, dtype=float)
        b = param.affine
        x1, x2, alpha = r4_to_chart(p)
        rho = self.rho_affine(b, x1, x2)
        return (
            b[0]
            + b[1] * x1
            + b[2] * x2
            + b[3] * p[..., 2]
            + b[4] * p[..., 3]
            + x1 * x2
            + rho * self._weight(param, alpha)
        )

    def grad_x_F(self, param: FamilyParameter, x1, x2, alpha):
        """Gradient in (x1, x2) at fixed alpha; analytic."""
        b = param.affine
        s = varsigma(x1, x2)
        lin = b[3] * np.cos(alpha) + b[4] * np.sin(alpha)
        w = self._weight(param, alpha)
        r1, r2 = self.rho_grad_affine(b, x1, x2)
        g1 = b[1] + x2 - lin * x1 / s + w * r1
        g2 = b[2] + x1 - lin * x2 / s + w * r2
        return g1, g2

    # ---- critical curve

    def _fixed_point(self, param: FamilyParameter, alpha, tol=FP_TOL, max_iter=FP_MAX_ITER):
        b = param.affine
        cx, cy = -b[2], -b[1]
        kap = kappa(b)
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        y1 = np.zeros_like(alpha)
        y2 = np.zeros_like(alpha)
        for it in range(1, max_iter + 1):
            g1, g2 = self.grad_x_F(param, cx + y1, cy + y2, alpha)
            # y - M grad, with M swapping the two components
            n1, n2 = y1 - g2, y2 - g1
            step = np.max(np.hypot(n1 - y1, n2 - y2))
            y1, y2 = n1, n2
            if not np.all(np.isfinite(step)):
                raise NonContractionError("critical-curve iteration produced non-finite values")
            if np.max(np.hypot(y1, y2)) > kap / 4 * (1 + 1e-9):
                raise NonContractionError(
                    f"critical-curve iterate left the disc of radius kappa/4 = {kap / 4:.3e}"
                )
            if step < tol:
                return cx + y1, cy + y2, it
        raise NonContractionError(f"no convergence within {max_iter} iterations (last step {step:.2e})")

    def critical_point(self, param: FamilyParameter, alpha):
        x1, x2, _ = self._fixed_point(param, alpha)
        return x1, x2

    def critical_curve(self, param: FamilyParameter, n_alpha: int = N_ALPHA) -> CriticalCurve:
        """Fiberwise critical points near the singular circle by fixed-point iteration."""
        if self.rho_identically_zero(param.a):
            raise ParameterError("rho vanishes identically; no critical curve")
        alpha = TWO_PI * np.arange(n_alpha) / n_alpha
        x1, x2, its = self._fixed_point(param, alpha)
        g1, g2 = self.grad_x_F(param, x1, x2, alpha)
        res = float(np.max(np.hypot(g1, g2)))
        b = param.affine
        pts = np.stack([x1, x2], axis=1)
        closed_a = np.append(alpha, TWO_PI)
        closed_p = np.vstack([pts, pts[:1]])
        spline = CubicSpline(closed_a, closed_p, bc_type="periodic", axis=0)
        return CriticalCurve(alpha, pts, res, its, (float(-b[2]), float(-b[1])), kappa(b), spline)

    def contraction_constant(self, param: FamilyParameter, n_alpha: int = 64, n_radial: int = 4, h: float = 1e-7) -> float:
        """Largest finite-difference Jacobian norm of the fixed-point map on the kappa/4 disc."""
        b = param.affine
        cx, cy = -b[2], -b[1]
        rad = kappa(b) / 4
        alpha = TWO_PI * np.arange(n_alpha) / n_alpha
        worst = 0.0
        for rr in np.linspace(0, rad * 0.999, n_radial):
            for phi in (0.0, np.pi / 2, np.pi, 3 * np.pi / 2):
                y1 = np.full_like(alpha, rr * np.cos(phi))
                y2 = np.full_like(alpha, rr * np.sin(phi))

                def pi_map(u1, u2):
                    g1, g2 = self.grad_x_F(param, cx + u1, cy + u2, alpha)
                    return u1 - g2, u2 - g1

                cols = []
                for d1, d2 in ((h, 0.0), (0.0, h)):
                    p1, p2 = pi_map(y1 + d1, y2 + d2)
                    m1, m2 = pi_map(y1 - d1, y2 - d2)
                    cols.append(((p1 - m1) / (2 * h), (p2 - m2) / (2 * h)))
                jac = np.stack(
                    [np.stack([cols[0][0], cols[1][0]], -1), np.stack([cols[0][1], cols[1][1]], -1)], -2
                )
                worst = max(worst, float(np.linalg.norm(jac, ord=2, axis=(-2, -1)).max()))
        return worst

    # ---- restricted function and genus

    def restricted_function(self, param: FamilyParameter) -> Callable:
        """alpha -> F at the critical point over alpha."""
        if self.rho_identically_zero(param.a):
            raise ParameterError("rho vanishes identically; restricted function not defined")

        def f(alpha):
            alpha = np.asarray(alpha, dtype=float)
            x1, x2, _ = self._fixed_point(param, alpha.ravel())
            return self.F(param, x1, x2, alpha.ravel()).reshape(alpha.shape)

        return f

    def f_az(self, param: FamilyParameter, n_samples: int = N_ALPHA, max_refine: int = 2) -> tuple[Callable, SignedZeroData]:
        """Restricted function and its zero analysis; retries on a finer grid when unresolved."""
        f = self.restricted_function(param)
        n = n_samples
        for attempt in range(max_refine + 1):
            try:
                return f, zeros_of_smooth(f, n_samples=n)
            except ZeroResolutionError as err:
                if err.code != "UNRESOLVED" or attempt == max_refine:
                    raise
                n *= 4
        raise AssertionError("unreachable")

    def psi_genus(self, param: FamilyParameter) -> tuple[int, dict]:
        """Genus of the member; the record says which rule produced it."""
        if self.rho_identically_zero(param.a):
            return 0, {"branch": "rho_zero", "genus": 0, "zero_count": None}
        _, sd = self.f_az(param)
        g = genus_by_zeros(sd)
        return g, {
            "branch": "zero_count",
            "genus": g,
            "zero_count": sd.count,
            "orders": [m for _, m in sd.zeros.zeros],
            "exact": sd.all_simple,
        }

    # ---- symmetries

    def equivariance_residual(self, param: FamilyParameter, g, sample_points: int = 1000, seed: int = 0,
                              points: np.ndarray | None = None) -> float:
        """max |F_{sigma(g^-1)(a,z)}(p) - (-1)^len(g) F_{a,z}(g p)| over samples p."""
        word = _as_word(g)
        if points is None:
            rng = np.random.default_rng(seed)
            points = random_points_near_circle(rng, param, sample_points)
        gp = points
        for letter in reversed(word):
            iso = generator(f"g{abs(letter)}")
            gp = (iso if letter > 0 else iso.inverse()).apply(gp)
        moved = sigma_action([-x for x in reversed(word)], param)
        sign = (-1) ** len(word)
        return float(np.abs(self.F_points(moved, points) - sign * self.F_points(param, gp)).max())

    def rho_symmetry_residual(self, a: Sequence[float], g: str, n: int = 1000, seed: int = 0) -> float:
        """max |rho(a, g x) - rho(sigma(g^-1) a, x)| on samples concentrated on the support."""
        rng = np.random.default_rng(seed)
        v = np.asarray(a, dtype=float)
        b = v / v[5]
        rad = (1 - b[1] ** 2 - b[2] ** 2) / 8
        t = rng.uniform(0, TWO_PI, n)
        rr = rad * np.sqrt(rng.uniform(0, 1.3, n))
        x1 = -b[2] + rr * np.cos(t)
        x2 = -b[1] + rr * np.sin(t)
        gx1, gx2, _ = act_on_chart(g, x1, x2, 0.0)
        moved = sigma_action(f"{g}^-1", FamilyParameter(tuple(v))).a
        return float(np.abs(self.rho(v, gx1, gx2) - self.rho(moved, x1, x2)).max())

    def xi(self, param: FamilyParameter, R: Isometry4) -> Callable:
        """p -> F(param, R^{-1} p); its zero set is the rotated member."""
        inv = R.inverse()
        return lambda p: self.F_points(param, inv.apply(p))

    # ---- quadratic part alone

    def classify_phi5(self, a: Sequence[float], tol: float = 1e-12) -> Phi5Classification:
        v = np.asarray(normalize_projective(a))
        if abs(v[5]) < A5_GUARD:
            lin = np.linalg.norm(v[1:5])
            empty = abs(v[0]) > lin
            kind = "empty" if empty else ("great_sphere" if abs(v[0]) < tol else "plane_section")
            return Phi5Classification(kind, False, True, bool(empty), None, None, None if empty else 0)
        b = v / v[5]
        s = b[1] ** 2 + b[2] ** 2
        singular = abs(b[3]) < tol and abs(b[4]) < tol and abs(b[0] - b[1] * b[2]) < tol and s < 1
        if singular:
            return Phi5Classification(
                "singular_pair", True, False, False, (float(-b[2]), float(-b[1])), float(np.sqrt(1 - s)), None
            )
        lo, hi = quadric_range(b)
        empty = lo > 0 or hi < 0
        return Phi5Classification("empty" if empty else "quadric", False, False, bool(empty), None, None,
                                  None if empty else 0)

    def validate_delta0(self, n_s: int = 12, s_max: float = 0.9, max_halvings: int = 8) -> tuple[float, float]:
        """Preflight: contraction constant below 1/2 on worst-case parameters.

        Halves ``delta0`` until the check passes. Returns (delta0, constant).
        """
        d0 = self.delta0
        for _ in range(max_halvings + 1):
            fam = SurfaceFamily(d0)
            worst = 0.0
            for s in np.linspace(0.0, s_max, n_s):
                a1 = np.sqrt(s)
                lin = np.sqrt(0.49 * delta(s, d0))  # second cut-off factor still positive
                param = FamilyParameter((0.0, a1, 0.0, lin, 0.0, 1.0), 1.0, 0.0)
                if fam.rho_identically_zero(param.a):
                    continue
                worst = max(worst, fam.contraction_constant(param))
            if worst < 0.5:
                self.delta0 = d0
                return d0, worst
            d0 /= 2
        raise NonContractionError("contraction constant stays above 1/2 after halving delta0")


def quadric_range(b: np.ndarray, n_start: int = 24, seed: int = 0) -> tuple[float, float]:
    """Numerical min and max of the quadratic part on S^3 (multistart on the sphere)."""
    from scipy.optimize import minimize

    def phi(p):
        p = p / np.linalg.norm(p)
        return b[0] + b[1] * p[0] + b[2] * p[1] + b[3] * p[2] + b[4] * p[3] + p[0] * p[1]

    rng = np.random.default_rng(seed)
    starts = rng.normal(size=(n_start, 4))
    lo = min(minimize(phi, s, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12}).fun for s in starts)
    hi = max(-minimize(lambda p: -phi(p), s, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12}).fun
             for s in starts)
    return float(lo), float(hi)


def genus_by_zeros(zeros: SignedZeroData) -> int:
    """max(0, #odd-order zeros / 2 - 1)."""
    odd = sum(1 for _, m in zeros.zeros.zeros if m % 2 == 1)
    return max(0, odd // 2 - 1)


# ---------------------------------------------------------------- parameter maps


def _sigma_inv_g1(a, z):
    c, s = np.cos(np.pi / 3), np.sin(np.pi / 3)
    a0, a1, a2, a3, a4, a5 = a
    return (a0, a2, -a1, a3 * c + a4 * s, -a3 * s + a4 * c, -a5), z * np.exp(-1j * np.pi / 3)


def _sigma_g1(a, z):
    c, s = np.cos(np.pi / 3), np.sin(np.pi / 3)
    a0, a1, a2, a3, a4, a5 = a
    return (a0, -a2, a1, a3 * c - a4 * s, a3 * s + a4 * c, -a5), z * np.exp(1j * np.pi / 3)


def _sigma_g2(a, z):
    a0, a1, a2, a3, a4, a5 = a
    return (a0, -a1, a2, -a3, a4, -a5), -np.conj(z)


_SIGMA = {1: _sigma_g1, -1: _sigma_inv_g1, 2: _sigma_g2, -2: _sigma_g2}


def _as_word(g) -> list[int]:
    if isinstance(g, str):
        table = {"id": [], "g1": [1], "g2": [2], "g1^-1": [-1], "g2^-1": [-2]}
        if g not in table:
            raise ValueError(f"unknown generator id {g!r}")
        return table[g]
    word = [int(x) for x in g]
    if any(abs(x) not in (1, 2) for x in word):
        raise ValueError("words use letters +-1 (g1) and +-2 (g2)")
    return word


def sigma_action(g, param: FamilyParameter) -> FamilyParameter:
    """Parameter map attached to a group element (left action; words compose right to left)."""
    a, z = np.asarray(param.a, dtype=float), param.z
    for letter in reversed(_as_word(g)):
        a, z = _SIGMA[letter](a, z)
    return FamilyParameter.from_z(tuple(a), complex(z))


# ---------------------------------------------------------------- sampling helpers


def random_points_near_circle(rng: np.random.Generator, param: FamilyParameter, n: int) -> np.ndarray:
    """Half uniform on S^3, half inside the cut-off disc around the singular circle."""
    m = n // 2
    u = rng.normal(size=(m, 4))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    v = np.asarray(param.a)
    if abs(v[5]) > A5_GUARD and v[1] ** 2 + v[2] ** 2 < v[5] ** 2:
        b = v / v[5]
        rad = (1 - b[1] ** 2 - b[2] ** 2) / 8
        t = rng.uniform(0, TWO_PI, n - m)
        rr = rad * np.sqrt(rng.uniform(0, 1.2, n - m))
        x1 = -b[2] + rr * np.cos(t)
        x2 = -b[1] + rr * np.sin(t)
        al = rng.uniform(0, TWO_PI, n - m)
        s = varsigma(x1, x2)
        w = np.stack([x1, x2, s * np.cos(al), s * np.sin(al)], axis=1)
    else:
        w = rng.normal(size=(n - m, 4))
        w /= np.linalg.norm(w, axis=1, keepdims=True)
    return np.vstack([u, w])


def sample_near_singular(
    rng: np.random.Generator,
    r: float | None,
    delta0: float = DELTA0,
    radius_max: float = 0.6,
    spread: float = 1.0,
) -> FamilyParameter:
    """Random parameter with rho not identically zero.

    ``spread`` scales the offsets (a0 - a1 a2, a3, a4) relative to the square
    root of the cut-off amplitude; values below 1 keep the second cut-off
    factor at its plateau more often.
    """
    rad = radius_max * np.sqrt(rng.uniform())
    phi = rng.uniform(0, TWO_PI)
    a1, a2 = rad * np.cos(phi), rad * np.sin(phi)
    d = float(delta(rad**2, delta0))
    e = rng.normal(size=3)
    # stay inside the support of the second cut-off so rho is not identically zero
    e *= 0.95 * spread * np.sqrt(d) * rng.uniform() ** (1 / 3) / np.linalg.norm(e)
    rr = float(rng.uniform()) if r is None else r
    return FamilyParameter((a1 * a2 + e[0], a1, a2, e[1], e[2], 1.0), rr, float(rng.uniform(0, TWO_PI)))


def sample_four_zero_candidate(rng: np.random.Generator, delta0: float = DELTA0, radius_max: float = 0.6) -> FamilyParameter:
    """Boundary parameter whose restricted function likely has four zeros."""
    rad = radius_max * np.sqrt(rng.uniform())
    phi = rng.uniform(0, TWO_PI)
    a1, a2 = rad * np.cos(phi), rad * np.sin(phi)
    d = float(delta(rad**2, delta0))
    sig = np.sqrt(1 - rad**2)
    c0 = rng.uniform(-0.7, 0.7) * d
    amp = rng.uniform(0, 0.8) * d / sig
    psi = rng.uniform(0, TWO_PI)
    return FamilyParameter(
        (a1 * a2 + c0, a1, a2, amp * np.cos(psi), amp * np.sin(psi), 1.0), 1.0, float(rng.uniform(0, TWO_PI))
    )


def sample_rho_zero(rng: np.random.Generator, delta0: float = DELTA0) -> FamilyParameter:
    fam = SurfaceFamily(delta0)
    while True:
        a = rng.normal(size=6)
        if fam.rho_identically_zero(a):
            return FamilyParameter(tuple(a), float(rng.uniform()), float(rng.uniform(0, TWO_PI)))


DEFAULT_FAMILY = SurfaceFamily()


def F(param: FamilyParameter, x1, x2, alpha):
    return DEFAULT_FAMILY.F(param, x1, x2, alpha)


def rho(a, x1, x2):
    return DEFAULT_FAMILY.rho(a, x1, x2)


def critical_curve(param: FamilyParameter, n_alpha: int = N_ALPHA) -> CriticalCurve:
    return DEFAULT_FAMILY.critical_curve(param, n_alpha)


def f_az(param: FamilyParameter):
    return DEFAULT_FAMILY.f_az(param)


def psi_genus(param: FamilyParameter):
    return DEFAULT_FAMILY.psi_genus(param)


def classify_phi5(a):
    return DEFAULT_FAMILY.classify_phi5(a)
