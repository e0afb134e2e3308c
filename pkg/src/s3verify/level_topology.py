"""Zero sets on S^3 as triangle meshes, their Euler characteristic and genus,
and the critical-point count for distance functions on two quadrics.

The sphere is triangulated as the boundary of the cube [-m, m]^4: each of the
eight facets carries an integer grid whose cubes are split into six tetrahedra
along their main diagonal. That splitting induces the min-to-max diagonal on
every square, so neighbouring facets agree and the tetrahedra form one
conforming complex. Marching tetrahedra on it yields a closed combinatorial
surface for any sign pattern; surface vertices are keyed by the grid edge
they sit on, so deduplication is exact.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .sphere_groups import chart_to_r4, r4_to_chart
from .surface_family import DEFAULT_FAMILY, FamilyParameter, SurfaceFamily, ParameterError
from .trigpoly import companion_roots


class ExtractionError(RuntimeError):
    def __init__(self, message: str, code: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------- mesh type


@dataclass(frozen=True)
class SurfaceMesh:
    vertices: np.ndarray  # (V, 4) on S^3
    triangles: np.ndarray  # (T, 3)
    resolution: int = 0

    @cached_property
    def _edge_data(self) -> tuple[np.ndarray, np.ndarray]:
        t = self.triangles.astype(np.int64)
        lo = np.minimum(t, np.roll(t, -1, axis=1)).ravel()
        hi = np.maximum(t, np.roll(t, -1, axis=1)).ravel()
        keys, counts = np.unique(lo * np.int64(len(self.vertices)) + hi, return_counts=True)
        n = np.int64(len(self.vertices))
        return np.stack([keys // n, keys % n], axis=1), counts

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Unique undirected edges and how many triangles contain each."""
        return self._edge_data

    def defect_edges(self) -> int:
        _, counts = self.edges()
        return int(np.count_nonzero(counts != 2))

    def is_watertight(self) -> bool:
        return len(self.triangles) > 0 and self.defect_edges() == 0

    def component_labels(self) -> tuple[int, np.ndarray]:
        e, _ = self.edges()
        n = len(self.vertices)
        g = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
        return connected_components(g, directed=False)

    def max_norm_error(self) -> float:
        return float(np.abs(np.linalg.norm(self.vertices, axis=1) - 1.0).max()) if len(self.vertices) else 0.0


def euler_characteristic(m: SurfaceMesh) -> int:
    e, _ = m.edges()
    return int(len(m.vertices) - len(e) + len(m.triangles))


def components(m: SurfaceMesh) -> int:
    return int(m.component_labels()[0])


def component_euler(m: SurfaceMesh) -> list[int]:
    ncomp, lab = m.component_labels()
    e, _ = m.edges()
    v = np.bincount(lab, minlength=ncomp)
    ed = np.bincount(lab[e[:, 0]], minlength=ncomp)
    f = np.bincount(lab[m.triangles[:, 0]], minlength=ncomp)
    return [int(x) for x in v - ed + f]


def genus(m: SurfaceMesh) -> int:
    """Sum over components of (2 - chi_i) / 2; refuses meshes with open or non-manifold edges."""
    if not m.is_watertight():
        raise ExtractionError(f"mesh has {m.defect_edges()} defect edges", code="DEFECT_EXCEEDED")
    total = 0
    for chi in component_euler(m):
        if chi > 2 or chi % 2:
            raise ExtractionError(f"component with Euler characteristic {chi}", code="NON_ORIENTABLE")
        total += (2 - chi) // 2
    return total


# ---------------------------------------------------------------- extraction


def _kuhn_paths() -> list[list[tuple[int, int, int]]]:
    paths = []
    for perm in itertools.permutations(range(3)):
        cur = [0, 0, 0]
        path = [tuple(cur)]
        for ax in perm:
            cur[ax] = 1
            path.append(tuple(cur))
        paths.append(path)
    return paths


def _triangle_table() -> list[list[list[tuple[int, int]]]]:
    table = []
    for mask in range(16):
        pos = [i for i in range(4) if mask >> i & 1]
        neg = [i for i in range(4) if not mask >> i & 1]
        if len(pos) in (0, 4):
            table.append([])
        elif len(pos) == 1 or len(neg) == 1:
            u = pos[0] if len(pos) == 1 else neg[0]
            others = [i for i in range(4) if i != u]
            table.append([[(u, o) for o in others]])
        else:
            p1, p2 = pos
            n1, n2 = neg
            table.append([[(p1, n1), (p1, n2), (p2, n2)], [(p1, n1), (p2, n2), (p2, n1)]])
    return table


_PATHS = _kuhn_paths()
_TABLE = _triangle_table()
_CORNERS = list(itertools.product((0, 1), repeat=3))


def _half_width(resolution: int) -> int:
    # resolution = grid points along a great circle = 8 m
    m = max(1, int(np.ceil(resolution / 8)))
    return m


def extract_levelset(
    F: Callable[[np.ndarray], np.ndarray],
    resolution: int = 128,
    warp: Callable[[np.ndarray], np.ndarray] | None = None,
) -> SurfaceMesh:
    """Zero set of ``F`` (vectorized over (N, 4) points of S^3) as a closed mesh.

    ``resolution`` counts grid vertices along a great circle through facet
    centres. When ``warp`` (a homeomorphism of S^3 acting on (N, 4) arrays) is
    given, ``F o warp`` is sampled on the grid and surface vertices are mapped
    through ``warp``, so the result is a mesh of the zero set of ``F`` itself.
    """
    m = _half_width(resolution)
    n = 2 * m
    side = 2 * m + 1
    kmax = np.int64(side) ** 4
    coords = np.arange(-m, m + 1)
    g = np.stack(np.meshgrid(coords, coords, coords, indexing="ij"), axis=-1).reshape(-1, 3)

    tri_keys: list[np.ndarray] = []
    edge_keys: list[np.ndarray] = []
    edge_pos: list[np.ndarray] = []

    for axis in range(4):
        free = [i for i in range(4) if i != axis]
        for sgn in (-1, 1):
            lat = np.empty((len(g), 4))
            lat[:, free] = g
            lat[:, axis] = sgn * m
            keys = ((lat + m).astype(np.int64) * (np.int64(side) ** np.arange(4))).sum(axis=1)
            pts = lat / np.linalg.norm(lat, axis=1, keepdims=True)
            if warp is not None:
                pts = warp(pts)
            vals = np.asarray(F(pts), dtype=float)
            if not np.all(np.isfinite(vals)):
                raise ExtractionError("non-finite function values on the grid", code="NONFINITE")
            v3 = vals.reshape(side, side, side)
            sl = [v3[dx:dx + n, dy:dy + n, dz:dz + n] for dx, dy, dz in _CORNERS]
            mn = np.minimum.reduce(sl)
            mx = np.maximum.reduce(sl)
            act = np.argwhere((mn < 0) & (mx >= 0))
            if len(act) == 0:
                continue
            for path in _PATHS:
                idx = np.stack(
                    [((act[:, 0] + p[0]) * side + act[:, 1] + p[1]) * side + act[:, 2] + p[2] for p in path],
                    axis=1,
                )
                tv = vals[idx]
                mask = ((tv >= 0) * (1 << np.arange(4))).sum(axis=1)
                for mval in np.unique(mask):
                    tris = _TABLE[mval]
                    if not tris:
                        continue
                    sel = idx[mask == mval]
                    for tri in tris:
                        ks = []
                        for a, b in tri:
                            ia, ib = sel[:, a], sel[:, b]
                            ka, kb = keys[ia], keys[ib]
                            swap = ka > kb
                            lo_i = np.where(swap, ib, ia)
                            hi_i = np.where(swap, ia, ib)
                            klo, khi = keys[lo_i], keys[hi_i]
                            va, vb = vals[lo_i], vals[hi_i]
                            t = va / (va - vb)
                            pos = lat[lo_i] + t[:, None] * (lat[hi_i] - lat[lo_i])
                            ek = klo * kmax + khi
                            ks.append(ek)
                            edge_keys.append(ek)
                            edge_pos.append(pos)
                        tri_keys.append(np.stack(ks, axis=1))

    if not tri_keys:
        raise ExtractionError("zero set is empty at this resolution", code="EMPTY_LEVELSET")
    all_tri = np.concatenate(tri_keys)
    all_keys = np.concatenate(edge_keys)
    all_pos = np.concatenate(edge_pos)
    uniq, first, inverse = np.unique(all_keys, return_index=True, return_inverse=True)
    verts = all_pos[first]
    verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    if warp is not None:
        verts = warp(verts)
        verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    tri = np.searchsorted(uniq, all_tri)
    return SurfaceMesh(verts, tri.astype(np.int64), resolution)


# ---------------------------------------------------------------- family members


def family_warp(curve, inner: float, outer: float = 0.97) -> Callable[[np.ndarray], np.ndarray]:
    """Homeomorphism of S^3 moving the chart origin onto the critical curve.

    In chart coordinates ``(x, alpha) -> (x + chi(|x|) c(alpha), alpha)`` where
    ``c`` interpolates the critical curve and ``chi`` ramps linearly from 1 at
    ``inner`` down to 0 at ``outer``. For each alpha the disc map is injective
    when max|c| < outer - inner, and then its image stays inside the disc.
    """
    width = outer - inner
    cmax = float(np.linalg.norm(curve.points, axis=1).max())
    if cmax >= 0.95 * width:
        raise ParameterError(f"critical curve too far from the chart origin for the warp ({cmax:.3f})")

    def warp(p: np.ndarray) -> np.ndarray:
        x1, x2, alpha = r4_to_chart(p)
        chi = np.clip((outer - np.hypot(x1, x2)) / width, 0.0, 1.0)
        c = curve(alpha)
        return chart_to_r4(x1 + chi * c[:, 0], x2 + chi * c[:, 1], alpha)

    return warp


def member_levelset(param: FamilyParameter, resolution: int = 128, family: SurfaceFamily = DEFAULT_FAMILY) -> SurfaceMesh:
    """Mesh of the zero set of the defining function of one family member."""
    a = np.asarray(param.a)
    if abs(a[5]) < 1e-14:
        return extract_levelset(lambda p: a[0] + p @ a[1:5], resolution)
    func = lambda p: family.F_points(param, p)  # noqa: E731
    if family.rho_identically_zero(param.a):
        return extract_levelset(func, resolution)
    curve = family.critical_curve(param)
    b = param.affine
    inner = 0.1
    return extract_levelset(func, resolution, warp=family_warp(curve, inner))


@dataclass(frozen=True)
class PoincareHopfReport:
    status: str  # PASS | FAIL | SKIP
    mesh_chi: int | None
    expected_chi: int | None
    zero_count: int | None
    mesh_genus: int | None
    zero_genus: int | None
    components: int | None
    reason: str = ""


def poincare_hopf_check(param: FamilyParameter, resolution: int = 256, family: SurfaceFamily = DEFAULT_FAMILY) -> PoincareHopfReport:
    """Compare the mesh Euler characteristic with 4 minus the number of zeros."""
    from .surface_family import genus_by_zeros

    if family.rho_identically_zero(param.a):
        mesh = member_levelset(param, resolution, family)
        g = genus(mesh)
        return PoincareHopfReport("PASS" if g == 0 else "FAIL", euler_characteristic(mesh), None, None, g, 0,
                                  components(mesh), "rho vanishes; quadric member")
    _, sd = family.f_az(param)
    if not sd.all_simple:
        return PoincareHopfReport("SKIP", None, None, sd.count, None, None, None, "restricted function has a multiple zero")
    mesh = member_levelset(param, resolution, family)
    chi = euler_characteristic(mesh)
    g = genus(mesh)
    expected = 4 - sd.count
    zg = genus_by_zeros(sd)
    ok = chi == expected and g == zg
    return PoincareHopfReport("PASS" if ok else "FAIL", chi, expected, sd.count, g, zg, components(mesh))


# ---------------------------------------------------------------- quadric critical points


class QuadricSurface(enum.Enum):
    HYPERBOLA_CYLINDER = "hyperbola_cylinder"  # x1 x2 = 1
    SADDLE = "saddle"  # x1 x2 = x3


@dataclass(frozen=True)
class QuadricCase:
    surface: QuadricSurface
    b: tuple[float, float, float]


@dataclass(frozen=True)
class CriticalPoints:
    count: int
    points: np.ndarray
    values: np.ndarray  # squared distances
    r_is_critical: bool | None = None


def _real_roots(coeffs_desc, imag_tol: float = 1e-8) -> np.ndarray:
    c = np.trim_zeros(np.asarray(coeffs_desc, dtype=float), "f")
    if len(c) <= 1:
        return np.zeros(0)
    roots = companion_roots(c.astype(complex))
    scale = np.maximum(1.0, np.abs(roots))
    return np.sort(roots[np.abs(roots.imag) < imag_tol * scale].real)


def _dedup(points: np.ndarray, tol: float = 1e-7) -> np.ndarray:
    out = []
    for p in points:
        if all(np.linalg.norm(p - q) > tol * max(1.0, np.linalg.norm(p)) for q in out):
            out.append(p)
    return np.array(out).reshape(-1, 3)


def _saddle_points(b: np.ndarray, denom_tol: float) -> np.ndarray:
    b1, b2, b3 = b
    # (b1 - b2 t)(b2 - b1 t) = (b3 + t)(1 - t^2)^2 with t = x3 - b3
    lhs = np.polymul([-b2, b1], [-b1, b2])
    rhs = np.polymul([1.0, b3], np.polymul([-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0]))
    pts = []
    for t in _real_roots(np.polysub(rhs, lhs)):
        d = 1.0 - t * t
        if abs(d) < denom_tol:
            continue
        x1 = (b1 - b2 * t) / d
        x2 = (b2 - b1 * t) / d
        pts.append((x1, x2, b3 + t))
    # t = +1: x1 + x2 = b1 = b2, x1 x2 = b3 + 1 ; t = -1: x1 - x2 = b1 = -b2, x1 x2 = b3 - 1
    scale = max(1.0, abs(b1), abs(b2))
    if abs(b1 - b2) < 1e-9 * scale:
        s = b1
        for x1 in _real_roots([1.0, -s, b3 + 1.0]):
            pts.append((x1, s - x1, b3 + 1.0))
    if abs(b1 + b2) < 1e-9 * scale:
        dlt = b1
        for x1 in _real_roots([1.0, -dlt, -(b3 - 1.0)]):
            pts.append((x1, x1 - dlt, b3 - 1.0))
    return np.array(pts).reshape(-1, 3)


def _cylinder_points(b: np.ndarray, denom_tol: float) -> np.ndarray:
    b1, b2, b3 = b
    # on x1 = s, x2 = 1/s: d/ds |x - b|^2 = 0  <=>  s^4 - b1 s^3 + b2 s - 1 = 0 (s = 0 is never a root)
    s = _real_roots([1.0, -b1, 0.0, b2, -1.0])
    s = s[np.abs(s) > denom_tol]
    return np.column_stack([s, 1.0 / s, np.full(len(s), b3)]).reshape(-1, 3)


def _critical_residual(surface: QuadricSurface, b: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Surface-equation violation plus the tangential part of x - b, scaled by |x|."""
    x1, x2, x3 = pts.T
    if surface is QuadricSurface.SADDLE:
        eq = x1 * x2 - x3
        normal = np.stack([x2, x1, -np.ones_like(x1)], axis=1)
    else:
        eq = x1 * x2 - 1.0
        normal = np.stack([x2, x1, np.zeros_like(x1)], axis=1)
    d = pts - b
    # a vanishing normal only occurs off the hyperbola, where eq already rejects the point
    nn = normal / np.maximum(np.linalg.norm(normal, axis=1, keepdims=True), 1e-300)
    tangential = d - (d * nn).sum(axis=1, keepdims=True) * nn
    scale = 1.0 + np.linalg.norm(pts, axis=1)
    return (np.abs(eq) + np.linalg.norm(tangential, axis=1)) / scale


def critical_count(case: QuadricCase, r: float | None = None, denom_tol: float = 1e-10) -> CriticalPoints:
    """Critical points of the squared distance to ``case.b`` restricted to the quadric."""
    b = np.asarray(case.b, dtype=float)
    if case.surface is QuadricSurface.SADDLE:
        pts = _saddle_points(b, denom_tol)
    else:
        pts = _cylinder_points(b, denom_tol)
    pts = _dedup(pts[_critical_residual(case.surface, b, pts) < 1e-7])
    vals = ((pts - b) ** 2).sum(axis=1)
    r_crit = None
    if r is not None:
        r_crit = bool(np.any(np.abs(vals - r * r) < 1e-9 * max(1.0, r * r)))
    return CriticalPoints(len(pts), pts, vals, r_crit)


def _grid_minima(G: np.ndarray) -> np.ndarray:
    inner = G[1:-1, 1:-1]
    is_min = np.ones_like(inner, dtype=bool)
    for dx, dy in itertools.product((-1, 0, 1), repeat=2):
        if dx or dy:
            is_min &= inner <= G[1 + dx:G.shape[0] - 1 + dx, 1 + dy:G.shape[1] - 1 + dy]
    return np.argwhere(is_min) + 1


def critical_count_bruteforce(case: QuadricCase, extent: float = 12.0, n_grid: int = 801,
                              zoom: int = 81) -> np.ndarray:
    """Oracle: grid seeds plus local descent on |grad|^2 over a graph parametrization.

    Every local minimum of the coarse grid is re-gridded ``zoom`` times finer
    over a few cells so that nearby pairs of critical points separate.
    """
    from scipy.optimize import least_squares

    b = np.asarray(case.b, dtype=float)
    found = []
    if case.surface is QuadricSurface.SADDLE:

        def grad(u):
            x1, x2 = u
            d3 = x1 * x2 - b[2]
            return np.array([2 * (x1 - b[0]) + 2 * d3 * x2, 2 * (x2 - b[1]) + 2 * d3 * x1])

        def grad_sq(X1, X2):
            D3 = X1 * X2 - b[2]
            return (2 * (X1 - b[0]) + 2 * D3 * X2) ** 2 + (2 * (X2 - b[1]) + 2 * D3 * X1) ** 2

        ax = np.linspace(-extent, extent, n_grid)
        h = ax[1] - ax[0]
        X1, X2 = np.meshgrid(ax, ax, indexing="ij")
        seeds = []
        for i, j in _grid_minima(grad_sq(X1, X2)):
            fine = np.linspace(-4 * h, 4 * h, zoom)
            F1, F2 = np.meshgrid(X1[i, j] + fine, X2[i, j] + fine, indexing="ij")
            seeds += [(F1[k, l], F2[k, l]) for k, l in _grid_minima(grad_sq(F1, F2))]
        for seed in seeds:
            sol = least_squares(grad, seed, xtol=1e-15, ftol=1e-15, gtol=1e-15)
            if np.linalg.norm(grad(sol.x)) < 1e-8:
                found.append((sol.x[0], sol.x[1], sol.x[0] * sol.x[1]))
    else:
        # branches x1 = s, x2 = 1/s, x3 = b3; 1-D critical points of the distance
        def dg(s):
            return 2 * (s - b[0]) - 2 * (1 / s - b[1]) / s**2

        for sign in (1, -1):
            ss = sign * np.geomspace(1e-3, extent, 20001)
            v = dg(ss)
            for k in np.nonzero(np.sign(v[:-1]) != np.sign(v[1:]))[0]:
                from scipy.optimize import brentq

                s0 = brentq(dg, ss[k], ss[k + 1], xtol=1e-15)
                found.append((s0, 1 / s0, b[2]))
    return _dedup(np.array(found).reshape(-1, 3), tol=1e-6)


# ---------------------------------------------------------------- export


def far_pole(points: np.ndarray, candidates: int = 64, seed: int = 0) -> np.ndarray:
    """A unit vector whose largest inner product with the points is as small as possible among samples."""
    rng = np.random.default_rng(seed)
    cand = np.vstack([np.eye(4), -np.eye(4), rng.normal(size=(candidates, 4))])
    cand /= np.linalg.norm(cand, axis=1, keepdims=True)
    return cand[np.argmin((np.asarray(points) @ cand.T).max(axis=0))]


def stereographic(points: np.ndarray, pole: np.ndarray | None = None) -> np.ndarray:
    """Stereographic projection of S^3 minus ``pole`` onto R^3; by default the pole avoids the points."""
    p = np.asarray(points, dtype=float)
    pole = far_pole(p) if pole is None else np.asarray(pole, dtype=float)
    pole = pole / np.linalg.norm(pole)
    q, _ = np.linalg.qr(np.column_stack([pole, np.eye(4)]))
    basis = q[:, 1:4].copy()
    # fix orientation so every pole gives the same sign as x -> (x1, x2, x3) / (1 - x4)
    if np.linalg.det(np.column_stack([pole, basis])) > 0:
        basis[:, 0] = -basis[:, 0]
    denom = 1.0 - p @ pole
    return (p @ basis) / denom[:, None]


def write_obj(path: str, mesh: SurfaceMesh, pole=None) -> None:
    v3 = stereographic(mesh.vertices, pole)
    with open(path, "w") as fh:
        for x, y, z in v3:
            fh.write(f"v {x:.9g} {y:.9g} {z:.9g}\n")
        for a, b, c in mesh.triangles + 1:
            fh.write(f"f {a} {b} {c}\n")


def write_vertex_csv(path: str, mesh: SurfaceMesh) -> None:
    np.savetxt(path, mesh.vertices, delimiter=",", header="x1,x2,x3,x4", comments="", fmt="%.12g")
