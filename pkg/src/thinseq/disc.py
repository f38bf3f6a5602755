"""Core geometry of the open unit disc.

Points, the pseudohyperbolic metric, Moebius disc automorphisms, Blaschke
factors and finite Blaschke products, and separation constants for finite
point sequences.

Points are stored in polar form as (theta, gap) with gap = 1 - |z|.  Thin
sequences cluster at the boundary fast enough that 1 - |z| underflows the
cartesian representation long before it underflows a double, so the gap is
the authoritative field and cartesian coordinates are derived views.  All
point-to-point kernels (z - w, 1 - conj(w) z) are computed from gaps and
angle differences, which keeps full relative accuracy near the boundary.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from itertools import islice
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "DiscPoint",
    "PointSequence",
    "SeparationReport",
    "ThinnessTrend",
    "BlaschkeSubproducts",
    "NotDistinctError",
    "one_minus_conj_mul",
    "point_diff",
    "pseudo_distance",
    "mobius_apply",
    "solve_delta_t",
    "blaschke_factor",
    "blaschke_log_eval",
    "blaschke_eval",
    "subproducts",
    "separation_constants",
    "thinness_trend",
    "disc_grid",
]

#: pairwise pseudohyperbolic distance below which two points count as equal
DISTINCT_TOL = 1e-14

#: product length above which blaschke_eval switches to log-domain form
LOG_MODE_THRESHOLD = 16


class NotDistinctError(ValueError):
    """Raised when an operation requires pairwise-distinct points."""


@dataclass(frozen=True)
class DiscPoint:
    """A point of the open unit disc, stored as angle and boundary gap.

    gap = 1 - |z| must satisfy 0 < gap <= 1; gap == 1 is the origin.
    """

    theta: float
    gap: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.gap)):
            raise ValueError("disc point fields must be finite")
        if not 0.0 < self.gap <= 1.0:
            raise ValueError(f"point not strictly inside the disc: gap={self.gap}")

    @classmethod
    def from_cartesian(cls, re: float, im: float = 0.0) -> "DiscPoint":
        r = math.hypot(re, im)
        if r >= 1.0:
            raise ValueError(f"point not strictly inside the disc: |z|={r}")
        return cls(math.atan2(im, re), 1.0 - r)

    @classmethod
    def from_complex(cls, z: complex) -> "DiscPoint":
        return cls.from_cartesian(z.real, z.imag)

    @classmethod
    def radial(cls, modulus: float) -> "DiscPoint":
        if not 0.0 <= modulus < 1.0:
            raise ValueError(f"radial modulus out of range: {modulus}")
        return cls(0.0, 1.0 - modulus)

    @classmethod
    def radial_gap(cls, gap: float, theta: float = 0.0) -> "DiscPoint":
        return cls(theta, gap)

    @property
    def modulus(self) -> float:
        return 1.0 - self.gap

    @property
    def re(self) -> float:
        return (1.0 - self.gap) * math.cos(self.theta)

    @property
    def im(self) -> float:
        return (1.0 - self.gap) * math.sin(self.theta)

    @property
    def z(self) -> complex:
        """Best double approximation; collapses to the circle for tiny gaps."""
        return complex(self.re, self.im)

    @property
    def one_minus_sq(self) -> float:
        """1 - |z|^2, exact in the gap representation."""
        return self.gap * (2.0 - self.gap)

    def __complex__(self) -> complex:
        return self.z


def _is_point(z: object) -> bool:
    return isinstance(z, DiscPoint)


def one_minus_conj_mul(w: DiscPoint | complex, z: DiscPoint | complex) -> complex:
    """1 - conj(w) * z, gap-accurate when both arguments are DiscPoints."""
    if _is_point(w) and _is_point(z):
        s = w.gap + z.gap - w.gap * z.gap  # 1 - |w||z|
        r = (1.0 - w.gap) * (1.0 - z.gap)
        d = z.theta - w.theta
        return complex(s + 2.0 * r * math.sin(0.5 * d) ** 2, -r * math.sin(d))
    wc = complex(w) if _is_point(w) else w
    zc = complex(z) if _is_point(z) else z
    return 1.0 - wc.conjugate() * zc


def point_diff(z: DiscPoint | complex, w: DiscPoint | complex) -> complex:
    """z - w, gap-accurate when both arguments are DiscPoints."""
    if _is_point(z) and _is_point(w):
        d = z.theta - w.theta
        rz = 1.0 - z.gap
        core = complex(
            (w.gap - z.gap) - 2.0 * rz * math.sin(0.5 * d) ** 2,
            rz * math.sin(d),
        )
        return cmath.exp(1j * w.theta) * core
    zc = complex(z) if _is_point(z) else z
    wc = complex(w) if _is_point(w) else w
    return zc - wc


def pseudo_distance(z: DiscPoint | complex, w: DiscPoint | complex) -> float:
    """Pseudohyperbolic distance rho(z, w) = |z - w| / |1 - conj(w) z|."""
    num = abs(point_diff(z, w))
    if num == 0.0:
        return 0.0
    return num / abs(one_minus_conj_mul(w, z))


def mobius_apply(c: DiscPoint | complex, z: DiscPoint | complex) -> complex:
    """Disc automorphism phi_c(z) = (z - c) / (1 - conj(c) z).

    Sign conventions: phi_c(c) = 0, phi_c(0) = -c.  The inverse map is
    phi_{-c}; the self-inverse (involutive) variant is z -> -phi_c(z).
    """
    return point_diff(z, c) / one_minus_conj_mul(c, z)


def _rho_symmetric(delta: float) -> float:
    # rho(-1 + delta, 1 - delta) = 2 c / (1 + c^2) with c = 1 - delta
    c = 1.0 - delta
    return 2.0 * c / (1.0 + c * c)


def solve_delta_t(t: float) -> float:
    """Solve rho(-1 + delta, 1 - delta) = t for delta in (0, 1).

    Closed form delta = 1 - (1 - sqrt(1 - t^2)) / t, evaluated in the
    rationalized shape t / (1 + sqrt((1-t)(1+t))) to avoid cancellation.
    Very close to t = 1 the closed form is cross-checked by bisection.
    """
    if not 0.0 < t < 1.0:
        raise ValueError(f"t must lie strictly between 0 and 1: {t}")
    if t <= 1.0 - 1e-8:
        u = t / (1.0 + math.sqrt((1.0 - t) * (1.0 + t)))
        return 1.0 - u
    # bisection fallback: rho is strictly decreasing in delta
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _rho_symmetric(mid) > t:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-17:
            break
    return 0.5 * (lo + hi)


def blaschke_factor(zero: DiscPoint, z):
    """Single Blaschke factor with zero at the given point.

    (-conj(a)/|a|) (z - a) / (1 - conj(a) z) for a != 0; the factor is z
    itself when the zero sits at the origin.  Accepts a DiscPoint, a complex
    scalar, or a complex ndarray for z.
    """
    if zero.gap == 1.0:  # zero at the origin
        if _is_point(z):
            return complex(z)
        return z
    pref = -cmath.exp(-1j * zero.theta)
    if isinstance(z, np.ndarray):
        a = complex(zero)
        return pref * (z - a) / (1.0 - a.conjugate() * z)
    return pref * point_diff(z, zero) / one_minus_conj_mul(zero, z)


def blaschke_log_eval(zeros: Iterable[DiscPoint], z):
    """Log-domain Blaschke product data: (log-modulus, argument).

    Returns the pair (sum of log|factor|, sum of arg factor).  The
    log-modulus is -inf when z coincides with a zero.  Accepts scalar or
    ndarray z; for ndarray input both outputs are float arrays.
    """
    arr = isinstance(z, np.ndarray)
    logmod = np.zeros(z.shape) if arr else 0.0
    arg = np.zeros(z.shape) if arr else 0.0
    with np.errstate(divide="ignore"):
        for a in zeros:
            f = blaschke_factor(a, z)
            if arr:
                logmod = logmod + np.log(np.abs(f))
                arg = arg + np.angle(f)
            else:
                m = abs(f)
                if m > 0.0:
                    logmod = logmod + math.log(m)
                    arg = arg + cmath.phase(f)
                else:
                    logmod = -math.inf
    return logmod, arg


def blaschke_eval(zeros: Iterable[DiscPoint], z, mode: str = "auto"):
    """Finite Blaschke product over the given zeros, evaluated at z.

    mode 'direct' multiplies the factors, 'log' accumulates log-modulus and
    argument and exponentiates, 'auto' switches to 'log' above
    LOG_MODE_THRESHOLD factors.  Empty zero set gives the constant 1.
    """
    zeros = tuple(zeros)
    if mode == "auto":
        mode = "log" if len(zeros) > LOG_MODE_THRESHOLD else "direct"
    if mode == "direct":
        if isinstance(z, np.ndarray):
            out = np.ones(z.shape, dtype=complex)
        else:
            out = 1.0 + 0.0j
        for a in zeros:
            out = out * blaschke_factor(a, z)
        return out
    if mode != "log":
        raise ValueError(f"unknown mode: {mode!r}")
    logmod, arg = blaschke_log_eval(zeros, z)
    if isinstance(z, np.ndarray):
        out = np.exp(logmod) * np.exp(1j * arg)
        return out
    if logmod == -math.inf:
        return 0.0 + 0.0j
    return math.exp(logmod) * cmath.exp(1j * arg)


@dataclass(frozen=True)
class PointSequence:
    """Finite ordered sequence of disc points; indices are 1-based."""

    points: tuple[DiscPoint, ...]
    distinct: bool = False

    def __init__(self, points: Sequence[DiscPoint]) -> None:
        pts = tuple(points)
        if not pts:
            raise ValueError("sequence must contain at least one point")
        for p in pts:
            if not isinstance(p, DiscPoint):
                raise TypeError(f"expected DiscPoint, got {type(p).__name__}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "distinct", _all_distinct(pts))

    @classmethod
    def from_values(cls, values: Iterable[complex]) -> "PointSequence":
        return cls([DiscPoint.from_complex(complex(v)) for v in values])

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i: int) -> DiscPoint:
        return self.points[i]

    def point(self, n: int) -> DiscPoint:
        """1-based access."""
        if not 1 <= n <= len(self.points):
            raise IndexError(f"index {n} outside 1..{len(self.points)}")
        return self.points[n - 1]

    def prefix(self, length: int) -> "PointSequence":
        return PointSequence(self.points[:length])

    def tail(self, offset: int) -> "PointSequence":
        """Points with 1-based index >= offset."""
        if not 1 <= offset <= len(self.points):
            raise IndexError(f"tail offset {offset} outside 1..{len(self.points)}")
        return PointSequence(self.points[offset - 1:])

    @cached_property
    def zs(self) -> np.ndarray:
        return np.array([complex(p) for p in self.points])

    @cached_property
    def gaps(self) -> np.ndarray:
        return np.array([p.gap for p in self.points])

    @cached_property
    def one_minus_sq(self) -> np.ndarray:
        return np.array([p.one_minus_sq for p in self.points])


def _all_distinct(pts: tuple[DiscPoint, ...]) -> bool:
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pseudo_distance(pts[i], pts[j]) <= DISTINCT_TOL:
                return False
    return True


@dataclass(frozen=True)
class SeparationReport:
    """Separation constants of a finite sequence.

    delta_j[j-1] is the product of rho(z_j, z_k) over k != j; delta is the
    minimum; tail_delta[N-1] is the infimum of delta_j over j >= N
    (nondecreasing in N by construction).
    """

    delta_j: tuple[float, ...]
    delta: float
    tail_delta: tuple[float, ...]


def _pair_rho_matrix(Z: PointSequence) -> np.ndarray:
    n = len(Z)
    rho = np.ones((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            rho[i, j] = rho[j, i] = pseudo_distance(Z[i], Z[j])
    return rho


def separation_constants(Z: PointSequence) -> SeparationReport:
    """Per-point separation constants, computed in the log domain."""
    if not Z.distinct:
        raise NotDistinctError("sequence has coincident points")
    rho = _pair_rho_matrix(Z)
    n = len(Z)
    delta_j = []
    for j in range(n):
        off = np.concatenate([rho[j, :j], rho[j, j + 1:]])
        delta_j.append(float(np.exp(np.sum(np.log1p(off - 1.0)))) if off.size else 1.0)
    tail = []
    running = math.inf
    for d in reversed(delta_j):
        running = min(running, d)
        tail.append(running)
    tail.reverse()
    return SeparationReport(tuple(delta_j), min(delta_j), tuple(tail))


@dataclass(frozen=True)
class ThinnessTrend:
    """Boundary-gap trend across truncations of growing length.

    gaps[i] is 1 - delta of the newest point within the truncation of
    length lengths[i] (its separation from all earlier points).  The
    thin_consistent flag records whether that gap strictly decreases across
    the three largest truncations.
    """

    lengths: tuple[int, ...]
    gaps: tuple[float, ...]
    thin_consistent: bool


def thinness_trend(family: Iterable[DiscPoint], max_n: int) -> ThinnessTrend:
    """Truncation study of a point family; consumes at most max_n points."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    pts = list(islice(iter(family), max_n))
    if not pts:
        raise ValueError("family produced no points")
    seq = PointSequence(pts)
    if not seq.distinct:
        raise NotDistinctError("family produced coincident points")
    lengths = tuple(range(1, len(pts) + 1))
    gaps = []
    for length in lengths:
        rep = separation_constants(seq.prefix(length))
        gaps.append(1.0 - rep.tail_delta[-1])
    last = gaps[-3:]
    if len(last) < 3:
        consistent = last[-1] <= 1e-12
    else:
        consistent = all(b < a - 1e-12 for a, b in zip(last, last[1:])) or all(
            g <= 1e-12 for g in last
        )
    return ThinnessTrend(lengths, tuple(gaps), consistent)


@dataclass(frozen=True)
class BlaschkeSubproducts:
    """Evaluators for the standard subproducts of a Blaschke product.

    excluded      product over k != j            (B with the j-th zero dropped)
    head          product over k < N             (constant 1 when N == 1)
    tail_excluded product over k >= N with k != j
    """

    excluded: Callable
    head: Callable
    tail_excluded: Callable


def subproducts(Z: PointSequence, j: int, N: int) -> BlaschkeSubproducts:
    """Subproduct evaluators for 1-based pivot j and tail offset N."""
    n = len(Z)
    if not 1 <= j <= n:
        raise IndexError(f"pivot {j} outside 1..{n}")
    if not 1 <= N <= n:
        raise IndexError(f"tail offset {N} outside 1..{n}")
    pts = Z.points
    excl = tuple(p for k, p in enumerate(pts, start=1) if k != j)
    head = tuple(p for k, p in enumerate(pts, start=1) if k < N)
    tail = tuple(p for k, p in enumerate(pts, start=1) if k >= N and k != j)

    def _make(zeros: tuple[DiscPoint, ...]) -> Callable:
        def ev(z, mode: str = "auto"):
            return blaschke_eval(zeros, z, mode=mode)

        return ev

    return BlaschkeSubproducts(_make(excl), _make(head), _make(tail))


def disc_grid(
    n_radii: int = 100,
    n_angles: int = 100,
    max_radius: float = 1.0 - 1e-4,
) -> np.ndarray:
    """Deterministic polar probe grid, returned as a flat complex array."""
    radii = np.linspace(0.0, max_radius, n_radii)
    angles = np.linspace(0.0, 2.0 * math.pi, n_angles, endpoint=False)
    return (radii[:, None] * np.exp(1j * angles[None, :])).ravel()
