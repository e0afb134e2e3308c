"""Labeled four-point configurations on the circle, the maps built from them,
piecewise-linear Hopf links in S^3 and their linking numbers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .level_topology import far_pole, stereographic
from .sphere_groups import chart_to_r4
from .surface_family import DEFAULT_FAMILY, FamilyParameter, ParameterError, SurfaceFamily
from .trigpoly import TWO_PI, SignedZeroData, circle_distance, wrap


class ConfigError(ValueError):
    def __init__(self, message: str, code: str = "INVALID_CONFIG"):
        super().__init__(message)
        self.code = code


class LinkError(RuntimeError):
    def __init__(self, message: str, code: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------- configurations


@dataclass(frozen=True)
class Config4:
    zeros: tuple[float, float, float, float]
    mu_plus: tuple[float, float]
    mu_minus: tuple[float, float]

    def arc_midpoints(self) -> np.ndarray:
        z = np.sort(np.asarray(self.zeros))
        nxt = np.roll(z, -1)
        nxt[-1] += TWO_PI
        return wrap((z + nxt) / 2)

    def violations(self, tol: float = 1e-9) -> list[str]:
        """Names of the invariants that fail; empty when the configuration is valid."""
        out = []
        z = np.sort(wrap(np.asarray(self.zeros, dtype=float)))
        if len(z) != 4 or np.min(circle_distance(z, np.roll(z, 1))) <= tol:
            out.append("distinct_zeros")
            return out
        plus = np.asarray(self.mu_plus, dtype=float)
        minus = np.asarray(self.mu_minus, dtype=float)
        if len(plus) != 2 or len(minus) != 2:
            return out + ["label_sizes"]
        if np.min(circle_distance(plus[:, None], minus[None, :])) <= tol:
            out.append("disjoint_labels")
        mids = self.arc_midpoints()
        labels = np.concatenate([plus, minus])
        match = circle_distance(mids[:, None], labels[None, :]) <= tol
        if not (match.any(axis=1).all() and match.any(axis=0).all()):
            out.append("midpoints")
        else:
            # arc i carries label +1 or -1; non-adjacent means alternating
            arc_label = np.where(match[:, :2].any(axis=1), 1, -1)
            if np.any(arc_label == np.roll(arc_label, 1)):
                out.append("non_adjacent")
        if circle_distance(plus.sum(), np.pi + minus.sum()) > 1e3 * tol:
            out.append("sum_relation")
        return out

    def is_valid(self, tol: float = 1e-9) -> bool:
        return not self.violations(tol)

    def canonical(self) -> "Config4":
        return Config4(
            tuple(float(x) for x in np.sort(wrap(np.asarray(self.zeros)))),
            tuple(float(x) for x in np.sort(wrap(np.asarray(self.mu_plus)))),
            tuple(float(x) for x in np.sort(wrap(np.asarray(self.mu_minus)))),
        )

    def distance(self, other: "Config4") -> float:
        """Largest angular mismatch between corresponding components (Hausdorff on the circle)."""
        parts = [(self.zeros, other.zeros), (self.mu_plus, other.mu_plus), (self.mu_minus, other.mu_minus)]
        worst = 0.0
        for x, y in parts:
            d = circle_distance(np.asarray(x, dtype=float)[:, None], np.asarray(y, dtype=float)[None, :])
            worst = max(worst, float(d.min(axis=1).max()), float(d.min(axis=0).max()))
        return worst

    def to_dict(self) -> dict:
        return {"zeros": list(self.zeros), "mu_plus": list(self.mu_plus), "mu_minus": list(self.mu_minus)}


def config_from_function(data: SignedZeroData) -> Config4:
    if data.count != 4:
        raise ConfigError(f"expected 4 zeros, found {data.count}", code="ZERO_COUNT")
    if not data.all_simple:
        raise ConfigError("a zero of higher order is present", code="MULTIPLE_ZERO")
    cfg = Config4(tuple(data.zeros.angles), tuple(data.positive_midpoints), tuple(data.negative_midpoints))
    bad = cfg.violations(tol=1e-9)
    if bad:
        raise ConfigError(f"configuration invariants fail: {bad}")
    return cfg


def p_sum(c: Config4) -> float:
    return wrap(sum(c.mu_minus))


def theta_map(param: FamilyParameter) -> float:
    if abs(param.r - 1.0) > 1e-12:
        raise ParameterError("defined on boundary parameters only")
    return wrap(-param.theta)


def member_config(param: FamilyParameter, family: SurfaceFamily = DEFAULT_FAMILY) -> Config4:
    _, sd = family.f_az(param)
    return config_from_function(sd)


def _circle_map(g: str) -> Callable[[np.ndarray], np.ndarray]:
    if g == "g1":
        return lambda a: wrap(np.asarray(a) + np.pi / 3)
    if g == "g2":
        return lambda a: wrap(np.pi - np.asarray(a))
    raise ValueError(f"unknown generator {g!r}")


def hat_rho_action(g: str | Sequence[str], c: Config4) -> Config4:
    """Move every angle by the circle map of ``g`` and swap the two labels.

    A sequence of generator names is applied right to left.
    """
    if not isinstance(g, str):
        for name in reversed(list(g)):
            c = hat_rho_action(name, c)
        return c
    move = _circle_map(g)
    return Config4(
        tuple(float(x) for x in move(c.zeros)),
        tuple(float(x) for x in move(c.mu_minus)),
        tuple(float(x) for x in move(c.mu_plus)),
    )


def bar_rho(g: str, angle: float) -> float:
    """Induced action on the value of :func:`p_sum`."""
    if g == "g1":
        return wrap(angle - np.pi / 3)
    if g == "g2":
        return wrap(np.pi - angle)
    raise ValueError(f"unknown generator {g!r}")


# ---------------------------------------------------------------- loops


@dataclass(frozen=True)
class PolylineLoop:
    points: np.ndarray  # (N, d); closing segment from last to first is implicit

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        return self.points, np.roll(self.points, -1, axis=0)

    def sample(self, per_segment: int = 4) -> np.ndarray:
        a, b = self.segments()
        t = np.linspace(0, 1, per_segment, endpoint=False)
        return (a[:, None, :] + t[None, :, None] * (b - a)[:, None, :]).reshape(-1, a.shape[1])

    def __len__(self) -> int:
        return len(self.points)


def _closed_loop(pieces: list[np.ndarray], tol: float = 1e-12) -> PolylineLoop:
    pts = np.concatenate(pieces)
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.linalg.norm(np.diff(pts, axis=0), axis=1) > tol
    pts = pts[keep]
    if np.linalg.norm(pts[0] - pts[-1]) <= tol:
        pts = pts[:-1]
    return PolylineLoop(pts)


def _chord(center: np.ndarray, direction: np.ndarray, alpha: float, n: int) -> np.ndarray:
    """Chart segment center + t direction clipped to the closed unit disc, as points of S^3."""
    aa = direction @ direction
    bb = 2 * center @ direction
    cc = center @ center - 1.0
    disc = bb * bb - 4 * aa * cc
    if disc <= 0:
        raise ConfigError("chord misses the unit disc")
    root = np.sqrt(disc)
    t_lo, t_hi = (-bb - root) / (2 * aa), (-bb + root) / (2 * aa)
    t = np.linspace(t_lo, t_hi, n + 1)
    xy = center[None, :] + t[:, None] * direction[None, :]
    norm = np.hypot(xy[:, 0], xy[:, 1])
    xy /= np.maximum(norm, 1.0)[:, None]
    return chart_to_r4(xy[:, 0], xy[:, 1], np.full(len(t), alpha))


def _bridge(p: np.ndarray, q: np.ndarray, n: int) -> np.ndarray:
    """Shorter arc of the great circle {x3 = x4 = 0} from p to q; antipodal ties go counterclockwise."""
    a0 = np.arctan2(p[1], p[0])
    a1 = np.arctan2(q[1], q[0])
    d = np.mod(a1 - a0, TWO_PI)
    if d > np.pi + 1e-15:
        d -= TWO_PI
    t = a0 + d * np.linspace(0, 1, n + 1)
    return np.stack([np.cos(t), np.sin(t), np.zeros_like(t), np.zeros_like(t)], axis=1)


def _label_loop(angles: Sequence[float], direction: np.ndarray, offset: Callable[[float], np.ndarray], n: int) -> PolylineLoop:
    first = _chord(offset(angles[0]), direction, angles[0], n)
    second = _chord(offset(angles[1]), direction, angles[1], n)
    return _closed_loop([
        first,
        _bridge(first[-1], second[-1], n),
        second[::-1],
        _bridge(second[0], first[0], n),
    ])


def hopf_link_pl(c: Config4, n_subdiv: int = 64,
                 offset: Callable[[float], np.ndarray] | None = None) -> tuple[PolylineLoop, PolylineLoop]:
    """Loops through the chords of slope +1 over the positive labels and slope -1 over the negative ones."""
    if offset is None:
        offset = lambda alpha: np.zeros(2)  # noqa: E731
    plus = _label_loop(c.mu_plus, np.array([1.0, 1.0]), offset, n_subdiv)
    minus = _label_loop(c.mu_minus, np.array([1.0, -1.0]), offset, n_subdiv)
    return plus, minus


def standard_hopf_link(n: int = 256) -> tuple[PolylineLoop, PolylineLoop]:
    t = np.linspace(0, TWO_PI, n, endpoint=False)
    c, s, z = np.cos(t), np.sin(t), np.zeros_like(t)
    return PolylineLoop(np.stack([c, s, z, z], 1)), PolylineLoop(np.stack([z, z, c, s], 1))


def torus_knot_pair(n: int = 512) -> tuple[PolylineLoop, PolylineLoop]:
    """A curve winding twice around the circle {x1 = x2 = 0} together with the circle {x3 = x4 = 0}."""
    t = np.linspace(0, TWO_PI, n, endpoint=False)
    curve = np.stack([np.cos(t), np.sin(t), np.cos(2 * t), np.sin(2 * t)], 1) / np.sqrt(2)
    z = np.zeros_like(t)
    return PolylineLoop(curve), PolylineLoop(np.stack([np.cos(t), np.sin(t), z, z], 1))


# ---------------------------------------------------------------- linking numbers


def _segment_distance(p0, p1, q0, q1) -> np.ndarray:
    """Distances between segment pairs (broadcast over leading axes), any dimension."""
    d1 = p1 - p0
    d2 = q1 - q0
    r = p0 - q0
    a = (d1 * d1).sum(-1)
    e = (d2 * d2).sum(-1)
    f = (d2 * r).sum(-1)
    c = (d1 * r).sum(-1)
    b = (d1 * d2).sum(-1)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-300, np.clip((b * f - c * e) / denom, 0, 1), 0.0)
        t = (b * s + f) / e
        t_clip = np.clip(t, 0, 1)
        s = np.where(t != t_clip, np.clip((b * t_clip - c) / a, 0, 1), s)
    diff = p0 + s[..., None] * d1 - q0 - t_clip[..., None] * d2
    return np.sqrt((diff * diff).sum(-1))


def min_loop_distance(l1: PolylineLoop, l2: PolylineLoop, block: int = 512) -> float:
    a0, a1 = l1.segments()
    b0, b1 = l2.segments()
    best = np.inf
    for i in range(0, len(a0), block):
        d = _segment_distance(a0[i:i + block, None], a1[i:i + block, None], b0[None], b1[None])
        best = min(best, float(d.min()))
    return best


def _pair_solid_angles(a0, a1, b0, b1) -> np.ndarray:
    """Signed solid angle (over 4 pi) subtended by each pair of straight segments in R^3."""
    r13 = b0 - a0
    r14 = b1 - a0
    r23 = b0 - a1
    r24 = b1 - a1

    def unit_cross(u, v):
        w = np.cross(u, v)
        n = np.linalg.norm(w, axis=-1, keepdims=True)
        return np.divide(w, n, out=np.zeros_like(w), where=n > 0)

    n1 = unit_cross(r13, r14)
    n2 = unit_cross(r14, r24)
    n3 = unit_cross(r24, r23)
    n4 = unit_cross(r23, r13)

    def asin_dot(u, v):
        return np.arcsin(np.clip((u * v).sum(-1), -1.0, 1.0))

    omega = asin_dot(n1, n2) + asin_dot(n2, n3) + asin_dot(n3, n4) + asin_dot(n4, n1)
    orient = np.sign((np.cross(b1 - b0, a1 - a0) * r13).sum(-1))
    return omega * orient / (4 * np.pi)


def linking_number_raw(l1: PolylineLoop, l2: PolylineLoop, seed: int = 0, block: int = 256) -> float:
    p1, p2 = l1.points, l2.points
    if p1.shape[1] == 4:
        pole = far_pole(np.vstack([p1, p2]), seed=seed)
        p1, p2 = stereographic(p1, pole), stereographic(p2, pole)
    a0, a1 = p1, np.roll(p1, -1, axis=0)
    b0, b1 = p2, np.roll(p2, -1, axis=0)
    total = 0.0
    for i in range(0, len(a0), block):
        total += float(_pair_solid_angles(a0[i:i + block, None], a1[i:i + block, None], b0[None], b1[None]).sum())
    return total


def linking_number(l1: PolylineLoop, l2: PolylineLoop, min_distance: float = 1e-6, seed: int = 0) -> int:
    gap = min_loop_distance(l1, l2)
    if gap <= min_distance:
        raise LinkError(f"loops are {gap:.2e} apart", code="INTERSECT")
    raw = linking_number_raw(l1, l2, seed)
    rounded = int(round(raw))
    if abs(rounded - raw) >= 0.05:
        raise LinkError(f"linking integral {raw:.4f} is not near an integer", code="REFINE")
    return rounded


def gauss_integral(l1: PolylineLoop, l2: PolylineLoop, quad: int = 4) -> float:
    """Midpoint-rule Gauss double integral in R^3 after projection; an independent check."""
    p1, p2 = l1.points, l2.points
    if p1.shape[1] == 4:
        pole = far_pole(np.vstack([p1, p2]), seed=1)
        p1, p2 = stereographic(p1, pole), stereographic(p2, pole)

    def nodes(p):
        a, b = p, np.roll(p, -1, axis=0)
        t = (np.arange(quad) + 0.5) / quad
        x = (a[:, None] + t[None, :, None] * (b - a)[:, None]).reshape(-1, 3)
        dx = np.repeat((b - a) / quad, quad, axis=0)
        return x, dx

    x, dx = nodes(p1)
    y, dy = nodes(p2)
    total = 0.0
    for i in range(0, len(x), 512):
        r = x[i:i + 512, None] - y[None]
        cr = np.cross(dx[i:i + 512, None], dy[None])
        total += float(((r * cr).sum(-1) / np.linalg.norm(r, axis=-1) ** 3).sum())
    return total / (4 * np.pi)


# ---------------------------------------------------------------- links from family members


@dataclass(frozen=True)
class UpsilonLink:
    plus: PolylineLoop
    minus: PolylineLoop
    config: Config4
    linking: int
    min_plus: float  # smallest F along the positive loop
    max_minus: float  # largest F along the negative loop


def upsilon_link(param: FamilyParameter, scale: float = 1.0, n_subdiv: int = 64, check_sign: bool = True,
                 family: SurfaceFamily = DEFAULT_FAMILY) -> UpsilonLink:
    """Hopf link whose chords pass through ``scale`` times the critical curve."""
    if family.rho_identically_zero(param.a):
        raise ParameterError("rho vanishes identically; no link is attached to this parameter")
    _, sd = family.f_az(param)
    cfg = config_from_function(sd)
    curve = family.critical_curve(param)
    plus, minus = hopf_link_pl(cfg, n_subdiv, offset=lambda alpha: scale * curve(np.array([alpha]))[0])
    fp = family.F_points(param, plus.sample())
    fm = family.F_points(param, minus.sample())
    if check_sign and (fp.min() <= 0 or fm.max() >= 0):
        raise LinkError(f"loop leaves its side (min F on + loop {fp.min():.3e}, max F on - loop {fm.max():.3e})",
                        code="SIGN_VIOLATION")
    return UpsilonLink(plus, minus, cfg, linking_number(plus, minus), float(fp.min()), float(fm.max()))


# ---------------------------------------------------------------- export


def write_loops_csv(path: str, loops: Sequence[PolylineLoop]) -> None:
    with open(path, "w") as fh:
        fh.write("loop,index,x1,x2,x3,x4\n")
        for k, loop in enumerate(loops):
            for i, p in enumerate(loop.points):
                fh.write(f"{k},{i}," + ",".join(f"{v:.12g}" for v in p) + "\n")


def write_loops_obj(path: str, loops: Sequence[PolylineLoop], pole=None) -> None:
    with open(path, "w") as fh:
        base = 1
        for k, loop in enumerate(loops):
            fh.write(f"o loop{k}\n")
            for x, y, z in stereographic(loop.points, pole):
                fh.write(f"v {x:.9g} {y:.9g} {z:.9g}\n")
            idx = list(range(base, base + len(loop))) + [base]
            fh.write("l " + " ".join(map(str, idx)) + "\n")
            base += len(loop)
