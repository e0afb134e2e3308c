"""Trigonometric polynomials on the circle and zero analysis of circle functions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

TWO_PI = 2 * np.pi


class ZeroResolutionError(RuntimeError):
    """Zeros could not be separated or classified at the requested sampling."""

    def __init__(self, message: str, code: str = "UNRESOLVED"):
        super().__init__(message)
        self.code = code


def wrap(angle):
    """Reduce angles to [0, 2 pi)."""
    out = np.mod(angle, TWO_PI)
    out = np.where(out >= TWO_PI, out - TWO_PI, out)
    return float(out) if np.ndim(out) == 0 else out


def circle_distance(a, b):
    d = np.abs(np.mod(np.asarray(a) - np.asarray(b), TWO_PI))
    return np.minimum(d, TWO_PI - d)


# ---------------------------------------------------------------- data types


@dataclass(frozen=True)
class TrigPoly:
    """``b0 + sum_j b_j cos(j alpha + theta_j)`` for j = 1..k."""

    b: tuple[float, ...]
    theta: tuple[float, ...] = ()

    def __post_init__(self):
        b = tuple(float(x) for x in self.b)
        th = tuple(float(x) for x in self.theta)
        if len(b) == 0:
            raise ValueError("need at least b0")
        if len(th) != len(b) - 1:
            raise ValueError("need one phase per non-constant amplitude")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "theta", th)

    @property
    def degree(self) -> int:
        return len(self.b) - 1

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.square(self.b))))

    def __call__(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        out = np.full(alpha.shape, self.b[0])
        for j in range(1, self.degree + 1):
            out = out + self.b[j] * np.cos(j * alpha + self.theta[j - 1])
        return out

    evaluate = __call__

    def fourier(self) -> np.ndarray:
        """Complex coefficients c_0..c_k with T = sum_{|j|<=k} c_j e^{i j alpha}."""
        c = np.zeros(self.degree + 1, dtype=complex)
        c[0] = self.b[0]
        for j in range(1, self.degree + 1):
            c[j] = 0.5 * self.b[j] * np.exp(1j * self.theta[j - 1])
        return c

    @classmethod
    def from_fourier(cls, c: Sequence[complex]) -> "TrigPoly":
        c = np.asarray(c, dtype=complex)
        b = [float(c[0].real)] + [2 * abs(x) for x in c[1:]]
        th = [float(np.angle(x)) for x in c[1:]]
        return cls(tuple(b), tuple(th))

    @classmethod
    def from_samples(cls, f: Callable, k: int) -> "TrigPoly":
        """Interpolate a function known to be a trigonometric polynomial of degree <= k."""
        n = 4 * k + 4
        alpha = TWO_PI * np.arange(n) / n
        c = np.fft.fft(f(alpha)) / n
        return cls.from_fourier(c[: k + 1])

    @classmethod
    def from_roots(cls, angles: Sequence[float], scale: float = 1.0) -> "TrigPoly":
        """Full-order polynomial vanishing at 2k prescribed angles (with multiplicity)."""
        angles = np.asarray(angles, dtype=float)
        if len(angles) % 2:
            raise ValueError("need an even number of roots")
        k = len(angles) // 2

        def prod(alpha):
            alpha = np.asarray(alpha)[..., None]
            return scale * np.prod(2 * np.sin((alpha - angles) / 2), axis=-1)

        return cls.from_samples(prod, k)

    def with_negated_leading(self) -> "TrigPoly":
        """Same function written with b_k -> -b_k and theta_k -> theta_k + pi."""
        b = list(self.b)
        th = list(self.theta)
        b[-1] = -b[-1]
        th[-1] = th[-1] + np.pi
        return TrigPoly(tuple(b), tuple(th))

    def to_dict(self) -> dict:
        return {"k": self.degree, "b": list(self.b), "theta": list(self.theta)}


@dataclass(frozen=True)
class ZeroMultiset:
    zeros: tuple[tuple[float, int], ...] = ()
    borderline: tuple[complex, ...] = ()

    @property
    def angles(self) -> np.ndarray:
        return np.array([z[0] for z in self.zeros], dtype=float)

    @property
    def orders(self) -> np.ndarray:
        return np.array([z[1] for z in self.zeros], dtype=int)

    @property
    def total_order(self) -> int:
        return int(sum(m for _, m in self.zeros))

    def __len__(self) -> int:
        return len(self.zeros)


@dataclass(frozen=True)
class SignedZeroData:
    zeros: ZeroMultiset
    negative_midpoints: tuple[float, ...]
    positive_midpoints: tuple[float, ...]
    n_counts: tuple[int, ...]
    constant_sign: int = 0  # sign of f when there are no zeros
    scale: float = 1.0

    @property
    def count(self) -> int:
        return len(self.zeros)

    @property
    def all_simple(self) -> bool:
        return all(m == 1 for _, m in self.zeros.zeros)

    def to_dict(self) -> dict:
        return {
            "zeros": [{"alpha": a, "order": m} for a, m in self.zeros.zeros],
            "neg_midpoints": list(self.negative_midpoints),
        }


class ZeroSum(NamedTuple):
    value: float
    full_order: bool


# ---------------------------------------------------------------- algebraic route


def _taylor_at(coeffs_desc: np.ndarray, z0: complex, upto: int) -> np.ndarray:
    """First ``upto`` Taylor coefficients of a polynomial at z0 (repeated Horner)."""
    c = np.array(coeffs_desc, dtype=complex)
    out = []
    for _ in range(upto):
        if len(c) == 0:
            out.append(0.0)
            continue
        acc = np.zeros(len(c), dtype=complex)
        acc[0] = c[0]
        for i in range(1, len(c)):
            acc[i] = acc[i - 1] * z0 + c[i]
        out.append(acc[-1])
        c = acc[:-1]
    return np.array(out)


def companion_roots(coeffs_desc: np.ndarray) -> np.ndarray:
    """All roots via eigenvalues of the companion matrix, then one Newton step each."""
    c = np.asarray(coeffs_desc, dtype=complex)
    nz = np.nonzero(c)[0]
    if len(nz) == 0:
        raise ValueError("zero polynomial")
    c = c[nz[0]:]
    n = len(c) - 1
    if n == 0:
        return np.zeros(0, dtype=complex)
    comp = np.zeros((n, n), dtype=complex)
    comp[0, :] = -c[1:] / c[0]
    comp[1:, :-1] = np.eye(n - 1)
    roots = np.linalg.eigvals(comp)
    d = np.polyval(np.polyder(c), roots)
    with np.errstate(divide="ignore", invalid="ignore"):
        step = np.polyval(c, roots) / d
    ok = (d != 0) & np.isfinite(step) & (np.abs(step) < 1e-3 * np.maximum(1.0, np.abs(roots)))
    return np.where(ok, roots - np.where(ok, step, 0), roots)


def _cluster_roots(roots: np.ndarray, coeffs_desc: np.ndarray, merge_tol: float) -> list[tuple[complex, int]]:
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def groups():
        out: dict[int, list[int]] = {}
        for i in range(n):
            out.setdefault(find(i), []).append(i)
        return list(out.values())

    close = np.abs(roots[:, None] - roots[None, :]) < merge_tol
    for i, j in zip(*np.nonzero(np.triu(close, 1))):
        parent[find(i)] = find(j)

    # Higher multiplicities split by ~eps^(1/m); merge wider clusters only when
    # the centroid is a genuine multiple root.
    scale = np.abs(coeffs_desc).sum()
    wide = 1e-3
    changed = True
    while changed:
        changed = False
        gs = groups()
        cents = np.array([sum(roots[i] for i in g) / len(g) for g in gs])
        if not np.any(np.triu(np.abs(cents[:, None] - cents[None, :]) < wide, 1)):
            break
        for a in range(len(gs)):
            for b in range(a + 1, len(gs)):
                if abs(cents[a] - cents[b]) < wide:
                    members = gs[a] + gs[b]
                    z0 = roots[members].mean()
                    t = _taylor_at(coeffs_desc, z0, len(members))
                    if np.all(np.abs(t) <= 1e-6 * scale):
                        parent[find(gs[a][0])] = find(gs[b][0])
                        changed = True
                        break
            if changed:
                break
    return [(complex(sum(roots[i] for i in g) / len(g)), len(g)) for g in groups()]


def algebraic_coefficients(T: TrigPoly) -> np.ndarray:
    """Coefficients (highest power first) of z^K T(z) in the variable z = e^{i alpha}."""
    K = max((j for j in range(1, T.degree + 1) if T.b[j] != 0.0), default=0)
    c = T.fourier()
    asc = np.zeros(2 * K + 1, dtype=complex)
    asc[K] = c[0]
    for j in range(1, K + 1):
        asc[K + j] = c[j]
        asc[K - j] = np.conj(c[j])
    return asc[::-1]


def companion_zeros(T: TrigPoly, root_tolerance: float = 1e-7, merge_tol: float = 1e-6) -> ZeroMultiset:
    """Zeros of T on the circle from the roots of the associated algebraic polynomial."""
    if all(b == 0.0 for b in T.b):
        raise ValueError("degenerate trigonometric polynomial: all amplitudes vanish")
    coeffs = algebraic_coefficients(T)
    if len(coeffs) == 1:
        return ZeroMultiset()
    roots = companion_roots(coeffs)
    zeros, border = [], []
    for z, m in _cluster_roots(roots, coeffs, merge_tol):
        dev = abs(abs(z) - 1.0)
        if dev < root_tolerance:
            zeros.append((float(wrap(np.angle(z))), m))
        elif dev < 1e-4:
            border.append(z)
    zeros.sort()
    return ZeroMultiset(tuple(zeros), tuple(border))


def zero_sum_of(zeros: ZeroMultiset) -> float:
    return float(wrap(sum(a * m for a, m in zeros.zeros)))


def zero_sum(T: TrigPoly) -> ZeroSum:
    """Sum of the zeros with multiplicity; flags whether the order is maximal."""
    zs = companion_zeros(T)
    return ZeroSum(zero_sum_of(zs), zs.total_order == 2 * T.degree)


def sign_structure(
    zeros: ZeroMultiset, f: Callable, scale: float = 1.0
) -> SignedZeroData:
    """Attach sign information by evaluating f at the midpoint of every arc."""
    angles = zeros.angles
    m = len(angles)
    if m == 0:
        s = float(np.sign(f(np.array([0.0]))[0]))
        return SignedZeroData(zeros, (), (), (), int(s), scale)
    if m == 1:
        mids = np.array([angles[0] + np.pi])
    else:
        nxt = np.roll(angles, -1)
        nxt[-1] += TWO_PI
        mids = (angles + nxt) / 2
    signs = np.sign(f(wrap(mids)))
    if np.any(signs == 0):
        raise ZeroResolutionError("function vanishes at an arc midpoint; zero set incomplete")
    neg = tuple(float(wrap(x)) for x, s in zip(mids, signs) if s < 0)
    pos = tuple(float(wrap(x)) for x, s in zip(mids, signs) if s > 0)
    counts = []
    for i in range(m):
        if m == 1:
            counts.append(2 if signs[0] < 0 else 0)  # the single arc meets the zero from both sides
        else:
            before = signs[i - 1] < 0
            after = signs[i] < 0
            counts.append(int(before) + int(after))
    for (a, order), n in zip(zeros.zeros, counts):
        if (order - n) % 2 or order < n:
            raise ZeroResolutionError(
                f"inconsistent order {order} and sign count {n} at alpha={a:.6f}", code="ORDER"
            )
    return SignedZeroData(zeros, neg, pos, tuple(counts), 0, scale)


def signed_zeros(T: TrigPoly) -> SignedZeroData:
    return sign_structure(companion_zeros(T), T, scale=max(T.norm(), 1e-300))


def zero_sum_minus(f: SignedZeroData) -> float:
    """Midpoint sum of negative components plus the half-order correction."""
    if f.zeros.total_order == 0:
        return 0.0
    total = sum(f.negative_midpoints)
    for (a, m), n in zip(f.zeros.zeros, f.n_counts):
        total += 0.5 * (m - n) * a
    return float(wrap(total))


def zero_sum_minus_formula(T: TrigPoly) -> float:
    """Closed form for full-order polynomials, branch chosen by the sign of b_k."""
    k = T.degree
    if T.b[-1] == 0:
        raise ValueError("leading amplitude vanishes")
    shift = k * np.pi if T.b[-1] > 0 else (k + 1) * np.pi
    return float(wrap(-T.theta[-1] + shift))


# ---------------------------------------------------------------- sampled route


def _bisect(f: Callable, lo: np.ndarray, hi: np.ndarray, tol: float) -> np.ndarray:
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    if lo.size == 0:
        return lo
    flo = f(lo)
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
        if np.all(hi - lo <= tol):
            break
        if np.max(hi - lo) < 4 * np.finfo(float).eps * max(1.0, np.max(np.abs(hi))):
            break
    return 0.5 * (lo + hi)


def _central_derivative(f: Callable, h: float = 1e-6) -> Callable:
    return lambda a: (f(a + h) - f(a - h)) / (2 * h)


def _local_order(f: Callable, alpha0: float, window: float, odd: bool, max_order: int, tau: float) -> int:
    """Order of the zero at alpha0 from a local polynomial fit on Chebyshev nodes."""
    deg = max_order + 4
    nodes = np.cos(np.pi * (np.arange(2 * deg + 1) + 0.5) / (2 * deg + 1))
    vals = f(alpha0 + window * nodes)
    cheb = np.polynomial.chebyshev.Chebyshev.fit(nodes, vals, deg, domain=[-1, 1])
    taylor = np.abs(cheb.convert(kind=np.polynomial.Polynomial).coef)
    ref = taylor[1:].max()
    if ref == 0:
        raise ZeroResolutionError("flat function near zero", code="ORDER")
    for j in range(1, max_order + 1):
        if (j % 2 == 1) != odd:
            continue
        if taylor[j] > tau * ref:
            return j
    raise ZeroResolutionError(f"zero at alpha={alpha0:.6f} exceeds max_order={max_order}", code="ORDER")


def zeros_of_smooth(
    f: Callable,
    n_samples: int = 4096,
    refine_tolerance: float = 1e-13,
    max_order: int = 3,
    even_threshold: float = 1e-3,
    zero_tolerance: float = 1e-9,
) -> SignedZeroData:
    """Zeros, orders and sign data of a smooth 2 pi-periodic function.

    ``f`` must accept numpy arrays. Zeros with a sign change are bracketed on
    the sample grid and bisected; even-order zeros are searched among local
    minima of |f| below ``even_threshold * max|f|`` by locating a critical point
    and testing ``|f| <= zero_tolerance * max|f|`` there.
    """
    n = int(n_samples)
    h = TWO_PI / n
    alpha = h * np.arange(n)
    v = np.asarray(f(alpha), dtype=float)
    scale = float(np.abs(v).max())
    if not np.isfinite(scale):
        raise ZeroResolutionError("non-finite samples", code="NONFINITE")
    if scale == 0.0:
        raise ZeroResolutionError("function vanishes on the whole grid", code="DEGENERATE")
    pos = v >= 0
    nxt = np.roll(pos, -1)
    change = np.nonzero(pos != nxt)[0]
    lo = alpha[change]
    hi = lo + h
    odd_roots = _bisect(f, lo, hi, refine_tolerance)

    absv = np.abs(v)
    is_min = (absv <= np.roll(absv, 1)) & (absv <= np.roll(absv, -1)) & (absv < even_threshold * scale)
    no_change = (pos == np.roll(pos, 1)) & (pos == np.roll(pos, -1))
    cand = np.nonzero(is_min & no_change)[0]
    even_roots = []
    if len(cand):
        df = _central_derivative(f)
        a_lo = alpha[cand] - h
        a_hi = alpha[cand] + h
        d_lo, d_hi = df(a_lo), df(a_hi)
        ok = np.sign(d_lo) != np.sign(d_hi)
        crit = _bisect(df, a_lo[ok], a_hi[ok], refine_tolerance)
        vals = f(crit) if len(crit) else np.zeros(0)
        for c, fc, j in zip(crit, vals, cand[ok]):
            if abs(fc) <= zero_tolerance * scale:
                even_roots.append(c)
            elif np.sign(fc) != np.sign(v[j]) and v[j] != 0:
                raise ZeroResolutionError(
                    f"two zeros within one grid cell near alpha={wrap(c):.6f}; increase n_samples"
                )

    roots = [(float(wrap(r)), True) for r in odd_roots] + [(float(wrap(r)), False) for r in even_roots]
    roots.sort()
    if len(roots) > 1:
        ang = np.array([r for r, _ in roots])
        gaps = np.diff(np.append(ang, ang[0] + TWO_PI))
        if gaps.min() < 4 * np.pi / n:
            raise ZeroResolutionError(
                f"candidate zeros {gaps.min():.2e} apart, below 4*pi/n_samples; increase n_samples"
            )
    else:
        gaps = np.array([TWO_PI])

    zeros = []
    for i, (r, odd) in enumerate(roots):
        gap = min(gaps[i], gaps[i - 1]) if len(roots) > 1 else TWO_PI
        window = min(0.05, 0.4 * gap)
        zeros.append((r, _local_order(f, r, window, odd, max_order, 1e-4)))
    return sign_structure(ZeroMultiset(tuple(zeros)), f, scale)
