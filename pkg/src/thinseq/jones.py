"""Explicit interpolation machinery built on exponentially weighted
cardinal functions.

The basis function for node j is the normalized Blaschke ratio times a
weight

    w_j(z) = ((1 - |z_j|^2) / (1 - conj(z_j) z))^2
             * exp(-sum_m ((1 + conj(z_m) z)/(1 - conj(z_m) z)
                           - (1 + conj(z_m) z_j)/(1 - conj(z_m) z_j))
                          * (1 - |z_m|^2))

with the sum over indices m whose modulus is at least |z_j| (ties
included; the m = j term vanishes at z = z_j, so w_j(z_j) = 1).  On top of
the basis sit a direct sup-norm interpolator, a dyadic-block corrector, an
iterative tail solver in the weighted l2 convention, and head/tail
splitting pairs.

Grid sups recorded here are maxima over a finite probe grid and are lower
bounds of the true sup norms.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .disc import (
    DiscPoint,
    NotDistinctError,
    PointSequence,
    blaschke_eval,
    blaschke_log_eval,
    disc_grid,
    mobius_apply,
    one_minus_conj_mul,
    separation_constants,
    solve_delta_t,
)
from .eig import hermitian_spectrum
from .gram import KernelCoefficients, gram_matrix

__all__ = [
    "ContractionError",
    "InterpolationProblem",
    "InterpolationReport",
    "JonesBasis",
    "ExactifyBlock",
    "ExactifyReport",
    "TailSolveTrace",
    "SplittingPair",
    "load_targets",
    "targets_from_mapping",
    "jones_weight",
    "jones_basis_eval",
    "jones_interpolate",
    "exactify",
    "iterative_eis_solve",
    "splitting_pair",
]


class ContractionError(RuntimeError):
    """Tail Gram deviation from the identity is not a contraction."""


@dataclass(frozen=True)
class InterpolationProblem:
    """Weighted interpolation targets on a sequence tail.

    The condition encoded is f(z_n) * (1 - |z_n|^2)^(1/p) = a_n for n at
    and beyond tail_offset; for p = inf the weight factor is 1 and the
    targets are plain point values.
    """

    p: float
    tail_offset: int
    targets: tuple[complex, ...]

    def __post_init__(self) -> None:
        if self.p not in (2.0, math.inf):
            raise ValueError(f"exponent must be 2 or inf: {self.p}")
        if self.tail_offset < 1:
            raise ValueError(f"tail offset must be >= 1: {self.tail_offset}")
        if not self.targets:
            raise ValueError("no targets")
        for a in self.targets:
            if not (math.isfinite(a.real) and math.isfinite(a.imag)):
                raise ValueError(f"target not finite: {a}")

    @property
    def norm(self) -> float:
        """l2 norm for p = 2, sup norm for p = inf."""
        if self.p == 2.0:
            return math.sqrt(sum(abs(a) ** 2 for a in self.targets))
        return max(abs(a) for a in self.targets)


def targets_from_mapping(doc: dict) -> InterpolationProblem:
    """Build a problem from the parsed form of a targets file."""
    try:
        raw_p = doc["p"]
        offset = doc["offsetN"]
        values = doc["values"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"targets document missing field: {exc}") from exc
    if raw_p == 2:
        p = 2.0
    elif raw_p == "inf":
        p = math.inf
    else:
        raise ValueError(f'exponent must be 2 or "inf": {raw_p!r}')
    targets = []
    for i, v in enumerate(values):
        try:
            targets.append(complex(float(v["re"]), float(v["im"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad target value at position {i}: {exc}") from exc
    return InterpolationProblem(p, int(offset), tuple(targets))


def load_targets(path) -> InterpolationProblem:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return targets_from_mapping(doc)


def _kahan_add(total, comp, term):
    y = term - comp
    t = total + y
    comp = (t - total) - y
    return t, comp


def _weight_exponent_nodes(Z: PointSequence, j: int):
    """Indices m with |z_m| >= |z_j|, i.e. gap_m <= gap_j, ties included."""
    gj = Z.point(j).gap
    return [m for m, p in enumerate(Z.points, start=1) if p.gap <= gj]


def jones_weight(Z: PointSequence, j: int, z) -> complex:
    """The exponential weight w_j at z; accepts DiscPoint, complex, or a
    complex ndarray.  The value at z_j itself is the exact identity 1."""
    zj = Z.point(j)
    if isinstance(z, DiscPoint) and z == zj:
        return 1.0 + 0.0j
    om_j = zj.one_minus_sq
    members = _weight_exponent_nodes(Z, j)
    if isinstance(z, np.ndarray):
        zjc = complex(zj)
        ratio = om_j / (1.0 - zjc.conjugate() * z)
        total = np.zeros(z.shape, dtype=complex)
        comp = np.zeros(z.shape, dtype=complex)
        for m in members:
            zm = Z.point(m)
            zmc = complex(zm)
            # (1+u)/(1-u) = 2/(1-u) - 1; the constants -1 cancel between
            # the z and z_j halves of the bracket
            term = 2.0 * zm.one_minus_sq * (
                1.0 / (1.0 - zmc.conjugate() * z)
                - 1.0 / one_minus_conj_mul(zm, zj)
            )
            total, comp = _kahan_add(total, comp, term)
        return ratio * ratio * np.exp(-total)
    denom = one_minus_conj_mul(zj, z)
    ratio = om_j / denom
    total = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for m in members:
        zm = Z.point(m)
        term = 2.0 * zm.one_minus_sq * (
            1.0 / one_minus_conj_mul(zm, z) - 1.0 / one_minus_conj_mul(zm, zj)
        )
        total, comp = _kahan_add(total, comp, term)
    return ratio * ratio * cmath.exp(-total)


def _excluded_zeros(Z: PointSequence, j: int) -> tuple[DiscPoint, ...]:
    return tuple(p for k, p in enumerate(Z.points, start=1) if k != j)


def _basis_value(Z, j, zeros, node_log, z):
    """(B_j(z)/B_j(z_j)) * w_j(z) through the log-domain ratio."""
    logmod, arg = blaschke_log_eval(zeros, z)
    if isinstance(z, np.ndarray):
        ratio = np.exp(logmod - node_log[0]) * np.exp(1j * (arg - node_log[1]))
        return ratio * jones_weight(Z, j, z)
    if logmod == -math.inf:
        return 0.0 + 0.0j
    ratio = math.exp(logmod - node_log[0]) * cmath.exp(1j * (arg - node_log[1]))
    return ratio * jones_weight(Z, j, z)


def jones_basis_eval(Z: PointSequence, j: int, z) -> complex:
    """Cardinal basis function g_j at z: exactly 1 at z_j, exactly 0 at the
    other sequence points."""
    if not Z.distinct:
        raise NotDistinctError("sequence has coincident points")
    zeros = _excluded_zeros(Z, j)
    node_log = blaschke_log_eval(zeros, Z.point(j))
    return _basis_value(Z, j, zeros, node_log, z)


class JonesBasis:
    """Cardinal basis over a full sequence with cached node data and a
    recorded grid bound for sum_j |g_j| (a lower bound of the true sup)."""

    def __init__(self, Z: PointSequence, grid_density: int = 100) -> None:
        if not Z.distinct:
            raise NotDistinctError("sequence has coincident points")
        self.source = Z
        self.grid_density = grid_density
        self._zeros = [_excluded_zeros(Z, j) for j in range(1, len(Z) + 1)]
        self._node_log = [
            blaschke_log_eval(self._zeros[j - 1], Z.point(j))
            for j in range(1, len(Z) + 1)
        ]
        grid = disc_grid(grid_density, grid_density)
        acc = np.zeros(grid.shape)
        for j in range(1, len(Z) + 1):
            acc += np.abs(self.basis(j, grid))
        self.sum_bound = float(np.max(acc)) if acc.size else 0.0

    def weight(self, j: int, z) -> complex:
        return jones_weight(self.source, j, z)

    def basis(self, j: int, z) -> complex:
        return _basis_value(
            self.source, j, self._zeros[j - 1], self._node_log[j - 1], z
        )

    def blaschke_ratio(self, j: int, z):
        """B_j(z)/B_j(z_j) alone, without the weight."""
        logmod, arg = blaschke_log_eval(self._zeros[j - 1], z)
        node = self._node_log[j - 1]
        if isinstance(z, np.ndarray):
            return np.exp(logmod - node[0]) * np.exp(1j * (arg - node[1]))
        if logmod == -math.inf:
            return 0.0 + 0.0j
        return math.exp(logmod - node[0]) * cmath.exp(1j * (arg - node[1]))

    def combine(self, indices: Sequence[int], coeffs: Sequence[complex], z):
        """sum of coeffs[i] * g_{indices[i]} at z."""
        if isinstance(z, np.ndarray):
            out = np.zeros(z.shape, dtype=complex)
        else:
            out = 0.0 + 0.0j
        for j, c in zip(indices, coeffs):
            if c != 0:
                out = out + c * self.basis(j, z)
        return out


@dataclass(frozen=True)
class InterpolationReport:
    """Residuals and recorded sups for one direct interpolation run."""

    residual: float
    grid_sup: float
    target_sup: float
    basis_sum_bound: float

    @property
    def sup_bound(self) -> float:
        """The recorded-constant bound C * ||a||_inf for the grid sup."""
        return self.basis_sum_bound * self.target_sup


def jones_interpolate(
    Z: PointSequence,
    prob: InterpolationProblem,
    grid_density: int = 100,
) -> tuple[Callable, InterpolationReport]:
    """Direct sup-norm interpolant g = sum a_j g_j over the tail.

    Requires p = inf; the weighted l2 route is iterative_eis_solve.
    Returns the evaluator and a report with the node residual and the
    recorded grid sup.
    """
    if prob.p != math.inf:
        raise ValueError("direct basis interpolation is the sup-norm route")
    N = prob.tail_offset
    if not 1 <= N <= len(Z):
        raise IndexError(f"tail offset {N} outside 1..{len(Z)}")
    if len(prob.targets) != len(Z) - N + 1:
        raise ValueError(
            f"expected {len(Z) - N + 1} targets for the tail, got {len(prob.targets)}"
        )
    basis = JonesBasis(Z, grid_density)
    indices = list(range(N, len(Z) + 1))
    coeffs = list(prob.targets)

    def evaluator(z):
        return basis.combine(indices, coeffs, z)

    residual = max(
        abs(evaluator(Z.point(j)) - a) for j, a in zip(indices, coeffs)
    )
    grid = disc_grid(grid_density, grid_density)
    grid_sup = float(np.max(np.abs(evaluator(grid)))) if len(grid) else 0.0
    report = InterpolationReport(
        residual=float(residual),
        grid_sup=grid_sup,
        target_sup=prob.norm,
        basis_sum_bound=basis.sum_bound,
    )
    return evaluator, report


@dataclass(frozen=True)
class ExactifyBlock:
    """One dyadic residual block of the corrector."""

    level: int
    indices: tuple[int, ...]
    residual_sup: float
    grid_sup: float
    bound: float


@dataclass(frozen=True)
class ExactifyReport:
    blocks: tuple[ExactifyBlock, ...]
    delta: float
    basis_sum_bound: float
    floor: float


def exactify(
    Z: PointSequence,
    approx_values: Sequence[complex],
    targets: Sequence[complex],
    grid_density: int = 100,
    floor: float = 1e-12,
):
    """Corrector h with (f - h)(z_k) = a_k at every sequence point.

    Residuals are sorted into dyadic blocks: block 0 holds |r| >= 1/2,
    block j >= 1 holds 2^(-j-1) <= |r| < 2^(-j).  Each block contributes
    h_j = sum_n r_n * (B_n(z)/B_n(z_n)) * g_n(z); the recorded grid sup of
    each is reported against (2^-j / delta) * C with the recorded basis
    constant C (valid as stated for residuals <= 1).  Residuals below the
    floor are left uncorrected.  Returns (evaluator, report).
    """
    n = len(Z)
    if len(approx_values) != n or len(targets) != n:
        raise ValueError("approx_values and targets must cover every point")
    rep = separation_constants(Z)
    delta = rep.delta
    basis = JonesBasis(Z, grid_density)
    residuals = [complex(f) - complex(a) for f, a in zip(approx_values, targets)]
    by_level: dict[int, list[int]] = {}
    for k, r in enumerate(residuals, start=1):
        m = abs(r)
        if m < floor:
            continue
        level = max(0, math.ceil(-math.log2(m)) - 1)
        by_level.setdefault(level, []).append(k)

    def block_evaluator(ks):
        def ev(z):
            if isinstance(z, np.ndarray):
                out = np.zeros(z.shape, dtype=complex)
            else:
                out = 0.0 + 0.0j
            for k in ks:
                out = out + residuals[k - 1] * basis.blaschke_ratio(k, z) * basis.basis(k, z)
            return out

        return ev

    grid = disc_grid(grid_density, grid_density)
    block_evs = []
    blocks = []
    for level in sorted(by_level):
        ks = tuple(by_level[level])
        ev = block_evaluator(ks)
        block_evs.append(ev)
        grid_sup = float(np.max(np.abs(ev(grid)))) if len(grid) else 0.0
        blocks.append(
            ExactifyBlock(
                level=level,
                indices=ks,
                residual_sup=max(abs(residuals[k - 1]) for k in ks),
                grid_sup=grid_sup,
                bound=2.0 ** -level / delta * basis.sum_bound,
            )
        )

    def corrector(z):
        if isinstance(z, np.ndarray):
            out = np.zeros(z.shape, dtype=complex)
        else:
            out = 0.0 + 0.0j
        for ev in block_evs:
            out = out + ev(z)
        return out

    report = ExactifyReport(
        blocks=tuple(blocks),
        delta=delta,
        basis_sum_bound=basis.sum_bound,
        floor=floor,
    )
    return corrector, report


@dataclass(frozen=True)
class TailSolveTrace:
    """Contraction data for one iterative tail solve."""

    eps: float
    residual_norms: tuple[float, ...]
    rounds: int
    final_residual: float
    final_norm: float


def iterative_eis_solve(
    Z: PointSequence,
    prob: InterpolationProblem,
    tol: float = 1e-10,
    max_rounds: int = 100_000,
) -> tuple[KernelCoefficients, TailSolveTrace]:
    """Weighted l2 tail interpolation by residual iteration.

    Synthesizes f = sum b_k h_{z_k} over normalized kernels on the tail;
    the coefficient update feeds the current weighted residual back in, so
    the residual after k rounds is (I - G)^k a and contracts at the rate
    eps = ||G - I||.  Raises ContractionError when eps >= 1.  Returns the
    plain-kernel coefficients and the trace.
    """
    if prob.p != 2.0:
        raise ValueError("the iterative tail solver is the weighted l2 route")
    N = prob.tail_offset
    if not 1 <= N <= len(Z):
        raise IndexError(f"tail offset {N} outside 1..{len(Z)}")
    count = len(Z) - N + 1
    if len(prob.targets) != count:
        raise ValueError(
            f"expected {count} targets for the tail, got {len(prob.targets)}"
        )
    g = gram_matrix(Z, N)
    vals, _ = hermitian_spectrum(g.entries)
    eps = max(float(vals[-1]) - 1.0, 1.0 - float(vals[0]))
    if eps >= 1.0:
        raise ContractionError("tail not contractive; increase the tail offset")
    a = np.array(prob.targets, dtype=complex)
    b = np.zeros(count, dtype=complex)
    residual = a
    norms = [float(np.linalg.norm(residual))]
    rounds = 0
    while norms[-1] > tol and rounds < max_rounds:
        b = b + residual
        residual = residual - g.entries @ residual
        norms.append(float(np.linalg.norm(residual)))
        rounds += 1
    if norms[-1] > tol:
        raise ContractionError(
            f"residual {norms[-1]:.3e} still above {tol:.1e} after {rounds} rounds"
        )
    final_residual = float(np.linalg.norm(a - g.entries @ b))
    final_norm = math.sqrt(max(float(np.real(b.conj() @ (g.entries @ b))), 0.0))
    pts = Z.points[N - 1:]
    root = np.array([math.sqrt(p.one_minus_sq) for p in pts])
    kc = KernelCoefficients(
        nodes=pts,
        indices=tuple(range(N, len(Z) + 1)),
        coeffs=root * b,
    )
    trace = TailSolveTrace(
        eps=eps,
        residual_norms=tuple(norms),
        rounds=rounds,
        final_residual=final_residual,
        final_norm=final_norm,
    )
    return kc, trace


@dataclass(frozen=True)
class SplittingPair:
    """Head/tail splitting functions F and G with their certificate data.

    F is 1 on the tail nodes and 0 on the head nodes, G the reverse; both
    are squares, and pointwise F - G = h, F + G = (1 + h^2)/2 with the
    normalized transfer function h.
    """

    F: Callable
    G: Callable
    h: Callable
    k: Callable
    gamma: float
    t: float
    delta_t: float
    eps_recorded: float
    delta_prime: float
    probe_sup: float
    cut: int


def splitting_pair(
    Z: PointSequence,
    n: int,
    grid_density: int = 100,
) -> SplittingPair:
    """Construct the splitting pair for cut index n (1-based).

    k = t * b * f where b is the Blaschke product over the head points
    (constant 1 when n = 1), f interpolates 1/b at the tail nodes through
    the cardinal basis, and t = delta_prime / (1 + eps_recorded) with
    eps_recorded chosen from the recorded probe sup of |b * f| so that
    |k| < 1 on every probe.  Then h = phi_c(k)/(1 - delta_t) with
    c = 1 - delta_t, F = ((1+h)/2)^2, G = ((1-h)/2)^2, and
    |F| + |G| <= gamma = 1/2 + 1/(2 (1 - delta_t)^2) on the probes.
    """
    if not Z.distinct:
        raise NotDistinctError("sequence has coincident points")
    if not 1 <= n <= len(Z):
        raise IndexError(f"cut {n} outside 1..{len(Z)}")
    rep = separation_constants(Z)
    delta_prime = rep.tail_delta[n - 1]
    head = Z.points[: n - 1]
    basis = JonesBasis(Z, grid_density)
    tail_indices = list(range(n, len(Z) + 1))
    targets = [1.0 / blaschke_eval(head, Z.point(j)) for j in tail_indices]

    def bf(z):
        """b(z) * f(z); the quantity k is t times this."""
        return blaschke_eval(head, z) * basis.combine(tail_indices, targets, z)

    grid = disc_grid(grid_density, grid_density)
    probe_sup = float(np.max(np.abs(bf(grid))))
    for p in Z.points:
        probe_sup = max(probe_sup, abs(bf(p)))
    eps_recorded = max(1e-9, delta_prime * probe_sup * (1.0 + 1e-6) - 1.0)
    t = delta_prime / (1.0 + eps_recorded)
    delta_t = solve_delta_t(t)
    c = 1.0 - delta_t
    scale = 1.0 / (1.0 - delta_t)

    def k_eval(z):
        return t * bf(z)

    def h_eval(z):
        kv = k_eval(z)
        if isinstance(kv, np.ndarray):
            return scale * (kv - c) / (1.0 - c * kv)
        return scale * mobius_apply(c, kv)

    def F_eval(z):
        v = 0.5 * (1.0 + h_eval(z))
        return v * v

    def G_eval(z):
        v = 0.5 * (1.0 - h_eval(z))
        return v * v

    gamma = 0.5 + 0.5 / ((1.0 - delta_t) ** 2)
    return SplittingPair(
        F=F_eval,
        G=G_eval,
        h=h_eval,
        k=k_eval,
        gamma=gamma,
        t=t,
        delta_t=delta_t,
        eps_recorded=eps_recorded,
        delta_prime=delta_prime,
        probe_sup=probe_sup,
        cut=n,
    )
