"""Cyclic Jacobi eigensolver for Hermitian matrices.

Self-contained rotation-based solver used for every spectral question in the
package (Gram spectra, Pick feasibility).  Dimensions stay small (<= 128), so
quadratically convergent Jacobi sweeps are accurate and fast enough, and the
implementation carries no dependency beyond numpy arrays.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

__all__ = ["ConvergenceError", "hermitian_spectrum"]

HERMITIAN_TOL = 1e-12
OFFDIAG_TOL = 1e-12
MAX_SWEEPS = 100


class ConvergenceError(RuntimeError):
    """Raised when the sweep budget is exhausted before the off-diagonal
    mass drops below tolerance; carries the residual reached."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def hermitian_spectrum(
    matrix: np.ndarray,
    *,
    tol: float = OFFDIAG_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian
    matrix, via cyclic complex Jacobi rotations.

    Convergence criterion: off-diagonal Frobenius mass below tol times the
    Frobenius norm of the input.  Raises ConvergenceError when max_sweeps
    cyclic sweeps do not reach it.
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    if scale > 0.0 and float(np.linalg.norm(a - a.conj().T)) > HERMITIAN_TOL * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    v = np.eye(n, dtype=complex)
    if n == 1 or scale == 0.0:
        return np.sort(np.diag(a).real.copy()), v

    for _ in range(max_sweeps):
        if _offdiag_norm(a) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) == 0.0:
                    continue
                phase = cmath.exp(1j * cmath.phase(apq))
                tau = (a[q, q].real - a[p, p].real) / (2.0 * abs(apq))
                if tau == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                # columns: A <- A U with U[p,p]=U[q,q]=c, U[p,q]=s*phase,
                # U[q,p]=-s*conj(phase)
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * phase.conjugate() * col_q
                a[:, q] = s * phase * col_p + c * col_q
                # rows: A <- U^H A
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * phase.conjugate() * row_p + c * row_q
                # the pivot pair is annihilated analytically; pin it
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * phase.conjugate() * vq
                v[:, q] = s * phase * vp + c * vq
    else:
        residual = _offdiag_norm(a)
        raise ConvergenceError(
            f"Jacobi sweeps exhausted ({max_sweeps}); off-diagonal residual "
            f"{residual:.3e} against target {tol * scale:.3e}",
            residual,
        )

    vals = np.diag(a).real.copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]
