"""Feasibility of norm-constrained interpolation through Pick matrices.

The classical criterion: targets a at nodes z admit an interpolant of sup
norm at most 1 iff the matrix (1 - a_i conj(a_j))/(1 - z_i conj(z_j)) is
positive semidefinite.  This module tests feasibility at finite
truncations, finds the extremal target scale by bisection, and probes the
interpolation constant with random unimodular targets.  No interpolant is
synthesized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .disc import DiscPoint, NotDistinctError, PointSequence, one_minus_conj_mul
from .eig import hermitian_spectrum

__all__ = [
    "PickMatrix",
    "ProbeReport",
    "pick_matrix",
    "feasible_unit_ball",
    "max_feasible_scale",
    "interpolation_constant_probe",
]

FEASIBILITY_TOL = 1e-10
BISECT_TOL = 1e-6


@dataclass(frozen=True)
class PickMatrix:
    """Raw Pick matrix with its nodes and targets.

    Entries can span many orders of magnitude for near-boundary nodes;
    eigenvalue work happens on the diagonally scaled congruence (see
    feasible_unit_ball), which has the same inertia.
    """

    entries: np.ndarray
    nodes: PointSequence
    targets: tuple[complex, ...]

    def __post_init__(self) -> None:
        e = self.entries
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError(f"matrix must be square, got {e.shape}")
        scale = max(1.0, float(np.max(np.abs(e))))
        if float(np.max(np.abs(e - e.conj().T))) > 1e-14 * scale:
            raise ValueError("matrix is not Hermitian")
        if float(np.max(np.abs(e.diagonal().imag))) != 0.0:
            raise ValueError("diagonal must be real")

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def pick_matrix(Z: PointSequence, targets) -> PickMatrix:
    """P_ij = (1 - a_i conj(a_j)) / (1 - z_i conj(z_j))."""
    if not Z.distinct:
        raise NotDistinctError("sequence has coincident points")
    a = [complex(t) for t in targets]
    n = len(Z)
    if len(a) != n:
        raise ValueError(f"expected {n} targets, got {len(a)}")
    entries = np.empty((n, n), dtype=complex)
    for i in range(n):
        zi = Z.point(i + 1)
        entries[i, i] = (1.0 - abs(a[i]) ** 2) / zi.one_minus_sq
        for j in range(i + 1, n):
            v = (1.0 - a[i] * a[j].conjugate()) / one_minus_conj_mul(
                Z.point(j + 1), zi
            )
            entries[i, j] = v
            entries[j, i] = v.conjugate()
    return PickMatrix(entries, Z, tuple(a))


def _scaled_min_eigenvalue(p: PickMatrix) -> float:
    """Smallest eigenvalue of D P D with D = diag(sqrt(1 - |z_i|^2)).

    The congruence has the same inertia as P, with entries of order one
    even when the nodes crowd the boundary.
    """
    d = np.array([math.sqrt(q.one_minus_sq) for q in p.nodes.points])
    scaled = d[:, None] * p.entries * d[None, :]
    vals, _ = hermitian_spectrum(scaled)
    return float(vals[0])


def feasible_unit_ball(p: PickMatrix, tol: float = FEASIBILITY_TOL) -> bool:
    """Whether the targets admit an interpolant of sup norm at most 1."""
    if tol < 0.0:
        raise ValueError(f"tolerance must be >= 0: {tol}")
    return _scaled_min_eigenvalue(p) >= -tol


def max_feasible_scale(
    Z: PointSequence,
    targets,
    tol: float = BISECT_TOL,
    trace: list | None = None,
) -> float:
    """Largest s in [0, 1] with s * targets feasible, by bisection.

    Bisection is valid because P(s) is Loewner-nonincreasing in s: the
    difference P(s1) - P(s2) is a Schur product of PSD matrices.  When a
    trace list is supplied, every probed (s, feasible) pair is appended.
    """
    a = np.array([complex(t) for t in targets])
    if not np.any(a):
        raise ValueError("targets are all zero")

    def probe(s: float) -> bool:
        ok = feasible_unit_ball(pick_matrix(Z, s * a))
        if trace is not None:
            trace.append((s, ok))
        return ok

    if probe(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if probe(mid):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class ProbeReport:
    """Monte Carlo lower bound for the interpolation constant."""

    M_hat: float
    trials: int
    seed: int
    s_values: tuple[float, ...]


def interpolation_constant_probe(
    Z: PointSequence,
    trials: int,
    seed: int,
) -> ProbeReport:
    """For random unimodular targets a the minimal feasible norm is 1/s*;
    the reported maximum over trials is a lower bound for the constant of
    interpolation."""
    if not Z.distinct:
        raise NotDistinctError("sequence has coincident points")
    if trials < 1:
        raise ValueError(f"need at least one trial: {trials}")
    rng = np.random.default_rng(seed)
    s_values = []
    for _ in range(trials):
        a = np.exp(2j * math.pi * rng.random(len(Z)))
        s_values.append(max_feasible_scale(Z, a))
    worst = min(s_values)
    m_hat = 1.0 / worst if worst > 0.0 else math.inf
    return ProbeReport(
        M_hat=max(1.0, m_hat),
        trials=trials,
        seed=seed,
        s_values=tuple(s_values),
    )
