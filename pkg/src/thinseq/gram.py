"""Szego kernels, normalized kernel Gram matrices, and minimal-norm
interpolation by kernel synthesis.

Matrix orientation: entries[i, k] pairs evaluation point i with kernel
index k, so that (entries @ b)[i] is the weighted value at point i of the
synthesis sum_k b_k h_k.  With that convention the matrix is Hermitian with
unit diagonal and |entries[i, k]|^2 = 1 - rho(z_i, z_k)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .disc import (
    DiscPoint,
    NotDistinctError,
    PointSequence,
    blaschke_eval,
    one_minus_conj_mul,
)
from .eig import ConvergenceError, hermitian_spectrum

__all__ = [
    "ClusteringError",
    "GramMatrix",
    "TailBounds",
    "KernelCoefficients",
    "szego_kernel",
    "normalized_kernel",
    "model_kernel",
    "unnormalized_gram",
    "gram_matrix",
    "hermitian_spectrum",
    "ConvergenceError",
    "tail_bounds",
    "gram_column_defect",
    "min_norm_interpolant",
    "evaluate_synthesis",
    "matrix_dump",
]

MIN_EIG_GUARD = 1e-12


class ClusteringError(RuntimeError):
    """Raised when a kernel system is numerically singular."""


def szego_kernel(w: DiscPoint | complex, z) -> complex:
    """k_w(z) = 1 / (1 - conj(w) z)."""
    if isinstance(z, np.ndarray):
        wc = complex(w)
        return 1.0 / (1.0 - wc.conjugate() * z)
    return 1.0 / one_minus_conj_mul(w, z)


def normalized_kernel(w: DiscPoint, z) -> complex:
    """Unit-norm kernel sqrt(1 - |w|^2) k_w(z)."""
    return math.sqrt(w.one_minus_sq) * szego_kernel(w, z)


def model_kernel(theta_zeros, w: DiscPoint | complex, z) -> complex:
    """Reproducing kernel of the model space attached to the Blaschke
    product with the given zeros:

        (1 - conj(Theta(w)) Theta(z)) / (1 - conj(w) z)

    An empty zero set gives Theta == 1 and the zero kernel.
    """
    zeros = tuple(theta_zeros)
    tw = blaschke_eval(zeros, w)
    tz = blaschke_eval(zeros, z)
    return (1.0 - np.conjugate(tw) * tz) * szego_kernel(w, z)


@dataclass(frozen=True)
class GramMatrix:
    """Normalized kernel Gram matrix of a sequence tail.

    Row/column i corresponds to 1-based sequence index tail_offset + i.
    """

    entries: np.ndarray
    tail_offset: int
    source: PointSequence

    def __post_init__(self) -> None:
        e = self.entries
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError(f"expected square entries, got {e.shape}")
        scale = float(np.linalg.norm(e))
        if scale > 0.0 and float(np.linalg.norm(e - e.conj().T)) > 1e-14 * scale:
            raise ValueError("Gram entries are not Hermitian within 1e-14")

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def sequence_index(self, row: int) -> int:
        """Map a 0-based row to the 1-based index in the source sequence."""
        return self.tail_offset + row


def _tail_points(Z: PointSequence, N: int) -> tuple[DiscPoint, ...]:
    if not 1 <= N <= len(Z):
        raise IndexError(f"tail offset {N} outside 1..{len(Z)}")
    return Z.points[N - 1:]


def unnormalized_gram(Z: PointSequence, N: int = 1) -> np.ndarray:
    """Matrix of plain kernel values 1 / (1 - conj(z_k) z_i) over the tail.

    Row i is the evaluation point, column k the kernel node; equal to the
    Cauchy matrix of the tail and Hermitian positive semidefinite.
    """
    pts = _tail_points(Z, N)
    n = len(pts)
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        for k in range(n):
            out[i, k] = 1.0 / one_minus_conj_mul(pts[k], pts[i])
    return out


def gram_matrix(Z: PointSequence, N: int = 1) -> GramMatrix:
    """Gram matrix of the normalized kernels over the tail starting at N."""
    if not Z.distinct:
        raise NotDistinctError("sequence has coincident points")
    pts = _tail_points(Z, N)
    n = len(pts)
    root = np.array([math.sqrt(p.one_minus_sq) for p in pts])
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        out[i, i] = 1.0
        for k in range(i + 1, n):
            v = root[i] * root[k] / one_minus_conj_mul(pts[k], pts[i])
            out[i, k] = v
            out[k, i] = v.conjugate()
    return GramMatrix(out, N, Z)


@dataclass(frozen=True)
class TailBounds:
    """Extreme eigenvalues of a tail Gram matrix."""

    tail_offset: int
    count: int
    lower: float
    upper: float


def tail_bounds(Z: PointSequence, N: int = 1) -> TailBounds:
    g = gram_matrix(Z, N)
    vals, _ = hermitian_spectrum(g.entries)
    return TailBounds(N, g.size, float(vals[0]), float(vals[-1]))


def gram_column_defect(g: GramMatrix, n: int) -> float:
    """Euclidean norm of (G - I) e_n for the 1-based sequence index n."""
    col = n - g.tail_offset
    if not 0 <= col < g.size:
        raise IndexError(
            f"index {n} outside tail {g.tail_offset}.."
            f"{g.tail_offset + g.size - 1}"
        )
    e = g.entries[:, col].copy()
    e[col] -= 1.0
    return float(np.linalg.norm(e))


@dataclass(frozen=True)
class KernelCoefficients:
    """Coefficients of a synthesis sum_j c_j k_{z_j} over plain Szego
    kernels; nodes[j] carries the 1-based index of each node in the source
    sequence."""

    nodes: tuple[DiscPoint, ...]
    indices: tuple[int, ...]
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        if not (len(self.nodes) == len(self.indices) == len(self.coeffs)):
            raise ValueError("nodes, indices and coeffs must align")


def min_norm_interpolant(
    Z: PointSequence,
    targets,
    N: int = 1,
) -> tuple[KernelCoefficients, float]:
    """Minimal-norm interpolant through plain values targets[j] at the tail
    nodes, as a kernel synthesis.  Returns the coefficients and the norm.

    The normal equations are solved through the diagonally scaled
    (normalized Gram) system, which stays conditioned near the boundary;
    the scaled system must have smallest eigenvalue above 1e-12.
    """
    if not Z.distinct:
        raise NotDistinctError("sequence has coincident points")
    pts = _tail_points(Z, N)
    w = np.asarray(targets, dtype=complex)
    if w.shape != (len(pts),):
        raise ValueError(f"expected {len(pts)} targets, got shape {w.shape}")
    g = gram_matrix(Z, N)
    vals, vecs = hermitian_spectrum(g.entries)
    if vals[0] <= MIN_EIG_GUARD:
        raise ClusteringError(
            f"sequence too clustered for requested tolerance "
            f"(scaled Gram eigenvalue {vals[0]:.3e})"
        )
    root = np.array([math.sqrt(p.one_minus_sq) for p in pts])
    y = root * w

    def solve(rhs: np.ndarray) -> np.ndarray:
        return vecs @ ((vecs.conj().T @ rhs) / vals)

    u = solve(y)
    for _ in range(2):  # iterative refinement recovers the last digits
        u = u + solve(y - g.entries @ u)
    c = root * u
    norm_sq = max(float(np.real(np.vdot(c, w))), 0.0)
    indices = tuple(range(N, N + len(pts)))
    return KernelCoefficients(pts, indices, c), math.sqrt(norm_sq)


def evaluate_synthesis(kc: KernelCoefficients, z):
    """Value at z of the kernel synthesis sum_j c_j k_{z_j}(z)."""
    if isinstance(z, np.ndarray):
        out = np.zeros(z.shape, dtype=complex)
        for node, c in zip(kc.nodes, kc.coeffs):
            a = complex(node)
            out += c / (1.0 - a.conjugate() * z)
        return out
    total = 0.0 + 0.0j
    for node, c in zip(kc.nodes, kc.coeffs):
        total += c / one_minus_conj_mul(node, z)
    return total


def matrix_dump(m: np.ndarray) -> dict:
    """Report form of a complex matrix: {"n":…, "re":[[…]], "im":[[…]]}."""
    a = np.asarray(m, dtype=complex)
    return {
        "n": int(a.shape[0]),
        "re": [[float(x) for x in row] for row in a.real],
        "im": [[float(x) for x in row] for row in a.imag],
    }
