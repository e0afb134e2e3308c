"""Coordinates on S^3, quaternions, the double cover S^3 x S^3 -> SO(4) and
finite transform groups.

Points of R^4 are identified with quaternions ``x1 + x2 i + x3 j + x4 k``.
Writing ``u = x1 + i x2`` and ``v = x3 + i x4`` the same point is
``u + v j`` which is the complex-pair form used by the witness functions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

CHART_TOL = 1e-12


class DomainError(ValueError):
    """A point lies outside the domain of a chart or map."""


class ClosureError(RuntimeError):
    """Group closure did not terminate below the element cap."""


# ---------------------------------------------------------------- quaternions


@dataclass(frozen=True)
class Quaternion:
    w: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        w, x, y, z = (float(c) for c in arr)
        return cls(w, x, y, z)

    @classmethod
    def from_complex_pair(cls, z1: complex, z2: complex) -> "Quaternion":
        """Quaternion ``z1 + z2 j``."""
        return cls(z1.real, z1.imag, z2.real, z2.imag)

    @classmethod
    def exp_i(cls, phi: float) -> "Quaternion":
        return cls(np.cos(phi), np.sin(phi), 0.0, 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def complex_pair(self) -> tuple[complex, complex]:
        return complex(self.w, self.x), complex(self.y, self.z)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_array(qmul(self.as_array(), other.as_array()))

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def inverse(self) -> "Quaternion":
        n2 = self.norm() ** 2
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        c = self.conj()
        return Quaternion(c.w / n2, c.x / n2, c.y / n2, c.z / n2)


ONE = Quaternion(1.0)
QI = Quaternion(0.0, 1.0)
QJ = Quaternion(0.0, 0.0, 1.0)
QK = Quaternion(0.0, 0.0, 0.0, 1.0)


def qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product of quaternion arrays of shape (..., 4)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    a1, b1, c1, d1 = np.moveaxis(p, -1, 0)
    a2, b2, c2, d2 = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ],
        axis=-1,
    )


def left_matrix(q: Quaternion) -> np.ndarray:
    """Matrix of ``p -> q p`` on R^4."""
    return qmul(q.as_array(), np.eye(4)).T


def right_matrix(q: Quaternion) -> np.ndarray:
    """Matrix of ``p -> p q`` on R^4."""
    return qmul(np.eye(4), q.as_array()).T


def random_unit_quaternions(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=(n, 4))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


# ---------------------------------------------------------------- transforms


@dataclass(frozen=True, eq=False)
class Transform:
    """Affine map ``x -> A x + b`` of R^n.

    Every action handled here (SO(4), right multiplication on S^3 x S^3,
    the coordinate maps on S^5 x D, translations of the angle) is affine,
    so products and inverses are exact matrix algebra.
    """

    matrix: np.ndarray
    offset: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        off = np.zeros(m.shape[0]) if self.offset is None else np.asarray(self.offset, float)
        object.__setattr__(self, "offset", off)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts @ self.matrix.T + self.offset

    def after(self, other: "Transform") -> "Transform":
        """``self o other``: apply ``other`` first."""
        return Transform(self.matrix @ other.matrix, self.matrix @ other.offset + self.offset)

    def inverse(self) -> "Transform":
        inv = np.linalg.inv(self.matrix)
        return Transform(inv, -inv @ self.offset)

    def augmented(self) -> np.ndarray:
        n = self.dim
        out = np.eye(n + 1)
        out[:n, :n] = self.matrix
        out[:n, n] = self.offset
        return out

    def distance(self, other: "Transform") -> float:
        return float(np.linalg.norm(self.augmented() - other.augmented()))

    @classmethod
    def identity(cls, n: int) -> "Transform":
        return cls(np.eye(n), name="id")


def as_transform(g) -> Transform:
    if isinstance(g, Transform):
        return g
    if isinstance(g, Isometry4):
        return g.transform()
    return Transform(np.asarray(g, dtype=float))


# ---------------------------------------------------------------- SO(4)


@dataclass(frozen=True, eq=False)
class Isometry4:
    """Element of SO(4), optionally remembering a quaternion pair lift."""

    matrix: np.ndarray
    pair: tuple[Quaternion, Quaternion] | None = None

    @classmethod
    def from_pair(cls, q1: Quaternion, q2: Quaternion) -> "Isometry4":
        """Isometry ``p -> q1 p q2^{-1}``."""
        m = left_matrix(q1) @ right_matrix(q2.inverse())
        return cls(m, (q1, q2))

    @classmethod
    def identity(cls) -> "Isometry4":
        return cls(np.eye(4), (ONE, ONE))

    def apply(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.matrix.T

    def apply_pair(self, points: np.ndarray) -> np.ndarray:
        """Evaluate through quaternion multiplication instead of the matrix."""
        if self.pair is None:
            raise ValueError("isometry has no quaternion pair")
        q1, q2 = self.pair
        return qmul(qmul(q1.as_array(), points), q2.inverse().as_array())

    def inverse(self) -> "Isometry4":
        pair = None if self.pair is None else (self.pair[0].inverse(), self.pair[1].inverse())
        return Isometry4(self.matrix.T.copy(), pair)

    def __matmul__(self, other: "Isometry4") -> "Isometry4":
        pair = None
        if self.pair is not None and other.pair is not None:
            pair = (self.pair[0] * other.pair[0], self.pair[1] * other.pair[1])
        return Isometry4(self.matrix @ other.matrix, pair)

    def orthogonality_residual(self) -> float:
        m = self.matrix
        return float(max(np.abs(m.T @ m - np.eye(4)).max(), abs(np.linalg.det(m) - 1.0)))

    def transform(self) -> Transform:
        return Transform(self.matrix)


def random_rotation(rng: np.random.Generator) -> Isometry4:
    q = random_unit_quaternions(rng, 2)
    return Isometry4.from_pair(Quaternion.from_array(q[0]), Quaternion.from_array(q[1]))


# Lifts of the two generators of the order-24 symmetry group.
HAT_G1 = (Quaternion.exp_i(5 * np.pi / 12), Quaternion.exp_i(-np.pi / 12))
HAT_G2 = (QJ, -QJ)
G1 = Isometry4.from_pair(*HAT_G1)
G2 = Isometry4.from_pair(*HAT_G2)
GENERATORS = {"g1": G1, "g2": G2}


def generator(name: str) -> Isometry4:
    try:
        return GENERATORS[name]
    except KeyError:
        raise ValueError(f"unknown generator {name!r}; expected g1 or g2") from None


# ---------------------------------------------------------------- chart


@dataclass(frozen=True)
class ChartPoint:
    x1: float
    x2: float
    alpha: float


def varsigma(x1, x2):
    """sqrt(1 - x1^2 - x2^2), clamped at the rim of the disc."""
    return np.sqrt(np.maximum(0.0, 1.0 - np.asarray(x1) ** 2 - np.asarray(x2) ** 2))


def chart_to_r4(x1, x2, alpha) -> np.ndarray:
    """Map chart coordinates (arrays allowed) to points of S^3 in R^4."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.any(x1**2 + x2**2 > 1.0 + CHART_TOL):
        raise DomainError("chart point outside the closed unit disc")
    s = varsigma(x1, x2)
    alpha = np.asarray(alpha, dtype=float)
    return np.stack(np.broadcast_arrays(x1, x2, s * np.cos(alpha), s * np.sin(alpha)), axis=-1)


def r4_to_chart(points: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse chart. On the collapsed circle the returned angle is 0."""
    p = np.asarray(points, dtype=float)
    return p[..., 0], p[..., 1], np.arctan2(p[..., 3], p[..., 2])


def on_collapsed_circle(x1, x2, tol: float = 1e-12) -> np.ndarray:
    return np.abs(np.asarray(x1) ** 2 + np.asarray(x2) ** 2 - 1.0) <= tol


def act_on_chart(g: str, x1, x2, alpha):
    """Generator action in chart coordinates."""
    if g == "g1":
        return -np.asarray(x2), np.asarray(x1), np.asarray(alpha) + np.pi / 3
    if g == "g2":
        return -np.asarray(x1), np.asarray(x2), np.pi - np.asarray(alpha)
    raise ValueError(f"unknown generator {g!r}")


# ---------------------------------------------------------------- finite groups


class _MatrixIndex:
    """Lookup of matrices up to Frobenius distance ``tol``."""

    def __init__(self, dim: int, tol: float):
        rng = np.random.default_rng(12345)
        self.weights = rng.normal(size=dim * dim)
        self.tol = tol
        self.slack = tol * np.linalg.norm(self.weights)
        self.flats: list[np.ndarray] = []
        self.sigs: list[float] = []

    def _sig(self, flat: np.ndarray) -> float:
        return float(flat @ self.weights)

    def find(self, mat: np.ndarray) -> int:
        flat = mat.ravel()
        s = self._sig(flat)
        for i, (si, fi) in enumerate(zip(self.sigs, self.flats)):
            if abs(si - s) <= self.slack and np.linalg.norm(fi - flat) < self.tol:
                return i
        return -1

    def add(self, mat: np.ndarray) -> int:
        self.flats.append(mat.ravel().copy())
        self.sigs.append(self._sig(mat.ravel()))
        return len(self.flats) - 1


@dataclass
class FiniteGroup:
    """Elements of a finite transform group, identity first."""

    elements: list[Transform]
    generators: list[Transform]
    eq_tolerance: float = 1e-9
    _table: np.ndarray | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, g: Transform) -> int:
        target = g.augmented()
        for i, e in enumerate(self.elements):
            if np.linalg.norm(e.augmented() - target) < self.eq_tolerance:
                return i
        return -1

    @property
    def table(self) -> np.ndarray:
        """``table[i, j]`` is the index of ``elements[i] o elements[j]``; -1 if missing."""
        if self._table is None:
            mats = np.stack([e.augmented() for e in self.elements])
            n, d = len(mats), mats.shape[1]
            prods = np.einsum("iab,jbc->ijac", mats, mats).reshape(n * n, d * d)
            flats = mats.reshape(n, d * d)
            w = np.random.default_rng(7).normal(size=d * d)
            sig = flats @ w
            order = np.argsort(sig)
            sorted_sig = sig[order]
            psig = prods @ w
            pos = np.clip(np.searchsorted(sorted_sig, psig), 0, n - 1)
            best = np.full(n * n, -1)
            for shift in (-1, 0, 1):
                cand = order[np.clip(pos + shift, 0, n - 1)]
                dist = np.linalg.norm(prods - flats[cand], axis=1)
                best = np.where((best < 0) & (dist < self.eq_tolerance), cand, best)
            self._table = best.reshape(n, n)
        return self._table

    def is_closed(self) -> bool:
        t = self.table
        if np.any(t < 0):
            return False
        # every row is a permutation, so inverses exist
        return all(len(set(row)) == len(row) for row in t)

    def orbit_partition(self, points: np.ndarray, tol: float = 1e-8) -> list[list[int]]:
        """Partition sample points into orbits of the group action."""
        pts = np.asarray(points, dtype=float)
        label = -np.ones(len(pts), dtype=int)
        orbits: list[list[int]] = []
        for i in range(len(pts)):
            if label[i] >= 0:
                continue
            images = np.stack([g.apply(pts[i]) for g in self.elements])
            d = np.linalg.norm(pts[None, :, :] - images[:, None, :], axis=2)
            members = sorted(set(np.nonzero((d < tol).any(axis=0))[0].tolist()))
            for m in members:
                label[m] = len(orbits)
            orbits.append(members)
        return orbits


def group_closure(generators: Sequence, eq_tolerance: float = 1e-9, cap: int = 10000) -> FiniteGroup:
    """All distinct products of the generators (breadth first)."""
    gens = [as_transform(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].dim
    ident = Transform.identity(n)
    index = _MatrixIndex(n + 1, eq_tolerance)
    elements = [ident]
    index.add(ident.augmented())
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                prod = e.after(g)
                if index.find(prod.augmented()) < 0:
                    index.add(prod.augmented())
                    elements.append(prod)
                    nxt.append(prod)
                    if len(elements) > cap:
                        raise ClosureError(
                            f"closure exceeded {cap} elements; generators do not span a finite "
                            f"group at tolerance {eq_tolerance:g}"
                        )
        frontier = nxt
    return FiniteGroup(elements, gens, eq_tolerance)


def evaluate_word(generators: Sequence, word: Sequence[int], action: str = "left") -> Transform:
    """Product of a word over 1-based generator indices, negatives for inverses.

    With ``action="left"`` the word ``[a, b]`` means the map ``g_a o g_b``;
    with ``action="right"`` it means ``x -> (x . g_a) . g_b`` i.e. ``g_b o g_a``.
    """
    gens = [as_transform(g) for g in generators]
    out = Transform.identity(gens[0].dim)
    for letter in word:
        if letter == 0 or abs(letter) > len(gens):
            raise ValueError(f"word letter {letter} does not name a generator")
        g = gens[abs(letter) - 1]
        if letter < 0:
            g = g.inverse()
        out = out.after(g) if action == "left" else g.after(out)
    return out


@dataclass
class RelationReport:
    words: list[list[int]]
    matrix_residuals: list[float]
    point_residuals: list[float]

    @property
    def max_residual(self) -> float:
        return max(self.matrix_residuals + self.point_residuals, default=0.0)


def verify_relations(
    generators: Sequence,
    relations: Sequence[Sequence[int]],
    action: str = "left",
    points: np.ndarray | None = None,
) -> RelationReport:
    """Distance to the identity of each relator word.

    Relations of the form ``u = v`` are passed as the relator ``u v^{-1}``.
    When ``points`` is given the relator is also evaluated pointwise.
    """
    mres, pres = [], []
    for word in relations:
        t = evaluate_word(generators, word, action)
        mres.append(t.distance(Transform.identity(t.dim)))
        if points is not None:
            pts = np.asarray(points, dtype=float)
            pres.append(float(np.abs(t.apply(pts) - pts).max()))
    return RelationReport([list(w) for w in relations], mres, pres)


def inverse_word(word: Sequence[int]) -> list[int]:
    return [-x for x in reversed(word)]


D24_RELATIONS = [[1] * 12, [2, 2], [2, 1, 2, 1]]


# ---------------------------------------------------------------- lifted actions


def pair_transform(q1: Quaternion, q2: Quaternion, side: str = "right") -> Transform:
    """Right multiplication ``(p1, p2) -> (p1 q1, p2 q2)`` on R^8."""
    if side != "right":
        raise ValueError("only right multiplication is used")
    m = np.zeros((8, 8))
    m[:4, :4] = right_matrix(q1)
    m[4:, 4:] = right_matrix(q2)
    return Transform(m)


def hat_generators() -> list[Transform]:
    """The lifts of g1, g2 acting on S^3 x S^3 by right multiplication."""
    return [pair_transform(*HAT_G1), pair_transform(*HAT_G2)]


def _rot(phi: float) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def tilde_generators() -> list[Transform]:
    """Generators of Z2 + Q48 acting on S^5 x D x S^3 x S^3 inside R^16.

    Coordinates: a0..a5, Re z, Im z, then the two quaternions.
    """
    c, s = np.cos(np.pi / 3), np.sin(np.pi / 3)

    g0 = np.eye(16)
    g0[:6, :6] = -np.eye(6)

    g1 = np.zeros((16, 16))
    # a -> (a0, a2, -a1, a3 c + a4 s, -a3 s + a4 c, -a5)
    g1[0, 0] = 1
    g1[1, 2] = 1
    g1[2, 1] = -1
    g1[3, 3], g1[3, 4] = c, s
    g1[4, 3], g1[4, 4] = -s, c
    g1[5, 5] = -1
    g1[6:8, 6:8] = _rot(-np.pi / 3)
    g1[8:, 8:] = pair_transform(*HAT_G1).matrix

    g2 = np.zeros((16, 16))
    # a -> (a0, -a1, a2, -a3, a4, -a5); z -> -conj(z)
    g2[:6, :6] = np.diag([1, -1, 1, -1, 1, -1])
    g2[6, 6], g2[7, 7] = -1, 1
    g2[8:, 8:] = pair_transform(*HAT_G2).matrix
    return [Transform(g0, name="t0"), Transform(g1, name="t1"), Transform(g2, name="t2")]


def random_tilde_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random points of S^5 x D x S^3 x S^3 as rows of R^16."""
    a = rng.normal(size=(n, 6))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    r = np.sqrt(rng.uniform(size=n))
    th = rng.uniform(0, 2 * np.pi, size=n)
    z = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
    q = np.hstack([random_unit_quaternions(rng, n), random_unit_quaternions(rng, n)])
    return np.hstack([a, z, q])


def free_action_margin(group: FiniteGroup, points: np.ndarray) -> float:
    """Smallest displacement of any sample by a non-identity element."""
    ident = Transform.identity(group.elements[0].dim)
    worst = np.inf
    for g in group.elements:
        if g.distance(ident) < group.eq_tolerance:
            continue
        d = np.linalg.norm(g.apply(points) - points, axis=1).min()
        worst = min(worst, float(d))
    return worst


def h_generators() -> list[Transform]:
    """h0, h1, h2 acting on the right on (S^3 x S^3) x R inside R^9."""
    inv1 = (HAT_G1[0].inverse(), HAT_G1[1].inverse())
    inv2 = (HAT_G2[0].inverse(), HAT_G2[1].inverse())

    h0 = np.eye(9)
    off0 = np.zeros(9)
    off0[8] = 2 * np.pi

    h1 = np.eye(9)
    h1[:8, :8] = pair_transform(*inv1).matrix
    off1 = np.zeros(9)
    off1[8] = -np.pi / 3

    h2 = np.eye(9)
    h2[:8, :8] = pair_transform(*inv2).matrix
    h2[8, 8] = -1
    off2 = np.zeros(9)
    off2[8] = np.pi
    return [
        Transform(h0, off0, name="h0"),
        Transform(h1, off1, name="h1"),
        Transform(h2, off2, name="h2"),
    ]


# generator indices: 1 -> h0, 2 -> h1, 3 -> h2
H_RELATIONS = {
    "h1^24 h0^4 = id": [2] * 24 + [1] * 4,
    "h1^12 h0^2 = h2^2": [2] * 12 + [1] * 2 + [-3, -3],
    "h1 h2 = h2 h1^-1": [2, 3, 2, -3],
    "h0 h1 = h1 h0": [1, 2, -1, -2],
    "h0 h2 = h2 h0^-1": [1, 3, 1, -3],
}


def random_h_points(rng: np.random.Generator, n: int) -> np.ndarray:
    q = np.hstack([random_unit_quaternions(rng, n), random_unit_quaternions(rng, n)])
    return np.hstack([q, rng.uniform(-10, 10, size=(n, 1))])


def map_distance(f: Callable[[np.ndarray], np.ndarray], g: Callable[[np.ndarray], np.ndarray], pts) -> float:
    return float(np.abs(f(pts) - g(pts)).max())
