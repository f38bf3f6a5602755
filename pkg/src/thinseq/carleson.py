"""Carleson boxes, discrete tail measures, and embedding constants.

Two conventions are in play and both are reported: the kernel-probe
constant (kernel_embedding_constant) is a norm ratio, computed as the
square root of a max over probe points and therefore a lower bound; the
spectral constant (embedding_constant) is the squared-norm ratio, equal to
the top eigenvalue of the normalized tail Gram matrix, and is exact for a
finite tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .disc import (
    DiscPoint,
    PointSequence,
    disc_grid,
    one_minus_conj_mul,
    pseudo_distance,
    separation_constants,
)
from .gram import gram_matrix
from .eig import hermitian_spectrum

__all__ = [
    "CarlesonBox",
    "DiscreteMeasure",
    "CarlesonReport",
    "box_membership",
    "box_sum",
    "mu_measure",
    "nu_measure",
    "kernel_embedding_constant",
    "embedding_constant",
    "weierstrass_gap",
    "carleson_report",
]


@dataclass(frozen=True)
class CarlesonBox:
    """Box over a boundary arc: directions within the arc, moduli >= 1 - depth.

    center_angle is in radians; arc_length and depth are in normalized
    circle measure (full circle = 1).  For the box S(I) of an arc I both
    equal |I|; amplified arcs clip at the full circle.
    """

    center_angle: float
    arc_length: float
    depth: float

    def __post_init__(self) -> None:
        if not 0.0 < self.arc_length <= 1.0:
            raise ValueError(f"arc length out of range: {self.arc_length}")
        if not 0.0 < self.depth <= 1.0:
            raise ValueError(f"depth out of range: {self.depth}")

    @classmethod
    def over_point(cls, p: DiscPoint, amplification: float = 1.0) -> "CarlesonBox":
        """Box S(A I_z) for the arc I_z centered at z/|z| of length 1 - |z|."""
        if amplification < 1.0:
            raise ValueError(f"amplification must be >= 1: {amplification}")
        if p.gap == 1.0:
            raise ValueError("the origin has no boundary direction")
        side = min(1.0, amplification * p.gap)
        return cls(p.theta, side, side)


def box_membership(box: CarlesonBox, z: DiscPoint) -> bool:
    """Whether z lies in the box; boundary cases are inclusive."""
    if z.gap > box.depth:
        return False
    if z.gap == 1.0:  # origin: radial test only, reached only when depth == 1
        return True
    d = math.remainder(z.theta - box.center_angle, 2.0 * math.pi)
    return abs(d) <= math.pi * box.arc_length


def box_sum(Z: PointSequence, n: int, amplification: float = 2.0) -> float:
    """Normalized mass of the companions of z_n in its amplified box:

        (1 / |I_n|) * sum of (1 - |z_k|) over k != n with z_k in S(A I_n)
    """
    p = Z.point(n)
    box = CarlesonBox.over_point(p, amplification)
    total = 0.0
    for k, q in enumerate(Z.points, start=1):
        if k != n and box_membership(box, q):
            total += q.gap
    return total / p.gap


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely many weighted atoms in the disc."""

    atoms: tuple[tuple[DiscPoint, float], ...]
    tail_offset: int

    def __post_init__(self) -> None:
        for _, w in self.atoms:
            if w < 0.0 or not math.isfinite(w):
                raise ValueError(f"atom weight must be finite and >= 0: {w}")

    @property
    def total_mass(self) -> float:
        return sum(w for _, w in self.atoms)


def mu_measure(Z: PointSequence, N: int = 1) -> DiscreteMeasure:
    """Tail measure with weight 1 - |z_k|^2 at each z_k, k >= N."""
    if not 1 <= N <= len(Z):
        raise IndexError(f"tail offset {N} outside 1..{len(Z)}")
    atoms = tuple((p, p.one_minus_sq) for p in Z.points[N - 1:])
    return DiscreteMeasure(atoms, N)


def nu_measure(
    Z: PointSequence,
    N: int = 1,
    deltas: Iterable[float] | None = None,
) -> DiscreteMeasure:
    """Tail measure with weight (1 - |z_k|^2) / delta_k at each z_k, k >= N.

    The separation constants delta_k are taken over the full finite
    sequence, not the tail, unless supplied explicitly.
    """
    if not 1 <= N <= len(Z):
        raise IndexError(f"tail offset {N} outside 1..{len(Z)}")
    if deltas is None:
        deltas = separation_constants(Z).delta_j
    d = list(deltas)
    if len(d) != len(Z):
        raise ValueError(f"expected {len(Z)} separation constants, got {len(d)}")
    atoms = tuple(
        (p, p.one_minus_sq / dk) for p, dk in zip(Z.points[N - 1:], d[N - 1:])
    )
    return DiscreteMeasure(atoms, N)


def _probe_ratio(measure: DiscreteMeasure, z) -> float:
    """(1 - |z|^2) * sum_k w_k / |1 - conj(z_k) z|^2 at a single probe."""
    if isinstance(z, DiscPoint):
        om = z.one_minus_sq
        s = 0.0
        for p, w in measure.atoms:
            s += w / abs(one_minus_conj_mul(p, z)) ** 2
        return om * s
    om = 1.0 - abs(z) ** 2
    s = 0.0
    for p, w in measure.atoms:
        s += w / abs(1.0 - complex(p).conjugate() * z) ** 2
    return om * s


def kernel_embedding_constant(
    measure: DiscreteMeasure,
    probes: Iterable[DiscPoint | complex] | None = None,
    grid_density: int = 64,
) -> float:
    """Lower bound for the kernel-probe embedding constant (norm ratio).

    Maximizes ||k_z||_{L2(measure)} / ||k_z||_2 over the probe set, which
    defaults to the atoms plus a polar grid; reported as the square root of
    the squared-ratio maximum.  A larger probe set can only increase it.
    """
    if probes is None:
        probe_list: list[DiscPoint | complex] = [p for p, _ in measure.atoms]
    else:
        probe_list = list(probes)
    best = 0.0
    for z in probe_list:
        best = max(best, _probe_ratio(measure, z))
    if probes is None and grid_density > 0:
        grid = disc_grid(grid_density, grid_density)
        oms = 1.0 - np.abs(grid) ** 2
        acc = np.zeros(grid.shape)
        for p, w in measure.atoms:
            a = complex(p)
            acc += w / np.abs(1.0 - a.conjugate() * grid) ** 2
        if acc.size:
            best = max(best, float(np.max(oms * acc)))
    return math.sqrt(best)


def embedding_constant(Z: PointSequence, N: int = 1) -> float:
    """Exact squared-convention embedding constant of the tail measure:
    the top eigenvalue of the normalized tail Gram matrix."""
    g = gram_matrix(Z, N)
    vals, _ = hermitian_spectrum(g.entries)
    return float(vals[-1])


def weierstrass_gap(Z: PointSequence, N: int, n: int) -> tuple[float, float]:
    """Both sides of the tail product bound at node n >= N:

        prod_{k >= N, k != n} rho(z_n, z_k)^2   >=   2 - ||h_n||^2_{L2(mu_N)}

    Returns (lhs, rhs); the inequality holds for every tail with the k = n
    term contributing exactly 1 to the measure norm.
    """
    if not 1 <= N <= len(Z):
        raise IndexError(f"tail offset {N} outside 1..{len(Z)}")
    if not N <= n <= len(Z):
        raise IndexError(f"node {n} outside tail {N}..{len(Z)}")
    zn = Z.point(n)
    log_lhs = 0.0
    norm_sq = 0.0
    for k in range(N, len(Z) + 1):
        zk = Z.point(k)
        if k != n:
            log_lhs += 2.0 * math.log(pseudo_distance(zn, zk))
        norm_sq += (
            zk.one_minus_sq
            * zn.one_minus_sq
            / abs(one_minus_conj_mul(zn, zk)) ** 2
        )
    return math.exp(log_lhs), 2.0 - norm_sq


@dataclass(frozen=True)
class CarlesonReport:
    """Box sums and embedding constants for one sequence tail."""

    tail_offset: int
    amplification: float
    grid_density: int
    box_sums: tuple[float, ...]
    R_constant: float
    C_constant: float


def carleson_report(
    Z: PointSequence,
    N: int = 1,
    amplification: float = 2.0,
    grid_density: int = 64,
) -> CarlesonReport:
    sums = tuple(box_sum(Z, n, amplification) for n in range(N, len(Z) + 1))
    mu = mu_measure(Z, N)
    r = kernel_embedding_constant(mu, grid_density=grid_density)
    c = embedding_constant(Z, N)
    return CarlesonReport(N, amplification, grid_density, sums, r, c)
