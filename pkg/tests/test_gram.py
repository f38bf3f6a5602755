"""Kernel, Gram matrix, eigensolver, and minimal-norm interpolation tests."""

import math

import numpy as np
import pytest

from thinseq.disc import DiscPoint, PointSequence, pseudo_distance
from thinseq.eig import ConvergenceError, hermitian_spectrum
from thinseq.gram import (
    ClusteringError,
    evaluate_synthesis,
    gram_column_defect,
    gram_matrix,
    matrix_dump,
    min_norm_interpolant,
    model_kernel,
    normalized_kernel,
    szego_kernel,
    tail_bounds,
    unnormalized_gram,
)

from test_disc import geometric, supergeometric


# ---------------------------------------------------------------- kernels


def test_szego_kernel_values():
    w = DiscPoint.from_cartesian(0.5)
    assert szego_kernel(w, 0.0 + 0.0j) == pytest.approx(1.0, abs=1e-15)
    assert szego_kernel(w, 0.5 + 0.0j) == pytest.approx(4.0 / 3.0, abs=1e-15)
    arr = szego_kernel(w, np.array([0.0 + 0j, 0.5 + 0j]))
    assert np.allclose(arr, [1.0, 4.0 / 3.0], atol=1e-15)


def test_normalized_kernel_self_value():
    w = DiscPoint.from_cartesian(0.6, 0.3)
    got = normalized_kernel(w, w)
    assert got == pytest.approx(1.0 / math.sqrt(w.one_minus_sq), abs=1e-12)


def test_model_kernel_empty_zero_set_vanishes():
    w = DiscPoint.from_cartesian(0.2, 0.1)
    assert model_kernel((), w, 0.4 + 0.2j) == pytest.approx(0.0, abs=1e-15)


def test_model_kernel_at_zero_of_theta_equals_szego():
    zeros = geometric(4)
    w = zeros[1]
    for z in (0.3 + 0.2j, -0.1 + 0.55j):
        assert model_kernel(zeros, w, z) == pytest.approx(
            szego_kernel(w, z), abs=1e-12
        )


def test_model_kernel_decomposition_identity():
    # k_w = model kernel + Theta(z) conj(Theta(w)) k_w, pointwise
    zeros = geometric(5)
    rng = np.random.default_rng(3)
    from thinseq.disc import blaschke_eval

    for _ in range(25):
        w = complex(*rng.uniform(-0.6, 0.6, 2))
        z = complex(*rng.uniform(-0.6, 0.6, 2))
        lhs = szego_kernel(DiscPoint.from_complex(w), z)
        tw = blaschke_eval(zeros, w)
        tz = blaschke_eval(zeros, z)
        rhs = model_kernel(zeros, DiscPoint.from_complex(w), z) + tz * np.conjugate(
            tw
        ) * szego_kernel(DiscPoint.from_complex(w), z)
        assert lhs == pytest.approx(rhs, abs=1e-12)


# ---------------------------------------------------------------- gram


def test_two_point_gram_closed_form():
    Z = PointSequence([DiscPoint.radial(0.0), DiscPoint.from_cartesian(0.5)])
    g = gram_matrix(Z)
    s = math.sqrt(3.0) / 2.0
    assert np.allclose(g.entries, [[1.0, s], [s, 1.0]], atol=1e-15)
    vals, _ = hermitian_spectrum(g.entries)
    assert vals[0] == pytest.approx(1.0 - s, abs=1e-12)
    assert vals[1] == pytest.approx(1.0 + s, abs=1e-12)


def test_gram_entry_identity_and_diagonal():
    pts = [
        DiscPoint.from_cartesian(0.1, 0.2),
        DiscPoint.from_cartesian(-0.4, 0.5),
        DiscPoint.from_cartesian(0.7, -0.1),
        DiscPoint.from_cartesian(0.0, -0.8),
    ]
    Z = PointSequence(pts)
    g = gram_matrix(Z)
    for i in range(4):
        assert g.entries[i, i] == 1.0
        for k in range(4):
            rho = pseudo_distance(pts[i], pts[k])
            assert abs(g.entries[i, k]) ** 2 == pytest.approx(
                1.0 - rho * rho, abs=1e-12
            )


def test_gram_near_boundary_is_finite_and_psd():
    Z = PointSequence(supergeometric(12))
    g = gram_matrix(Z, 1)
    assert np.all(np.isfinite(g.entries.view(float)))
    vals, _ = hermitian_spectrum(g.entries)
    assert vals[0] >= -1e-10


def test_unnormalized_gram_scaling_relation():
    Z = PointSequence(geometric(5))
    a = unnormalized_gram(Z, 2)
    g = gram_matrix(Z, 2)
    root = np.sqrt(Z.one_minus_sq[1:])
    assert np.allclose(root[:, None] * a * root[None, :], g.entries, atol=1e-13)


def test_tail_bounds_singleton_and_nesting():
    Z = PointSequence(geometric(8))
    tb_last = tail_bounds(Z, 8)
    assert tb_last.lower == pytest.approx(1.0, abs=1e-12)
    assert tb_last.upper == pytest.approx(1.0, abs=1e-12)
    prev = tail_bounds(Z, 1)
    for N in range(2, 9):
        cur = tail_bounds(Z, N)
        # principal submatrix: spectrum nests inside the parent interval
        assert cur.lower >= prev.lower - 1e-12
        assert cur.upper <= prev.upper + 1e-12
        prev = cur


def test_gram_column_defect_two_points():
    Z = PointSequence([DiscPoint.radial(0.0), DiscPoint.from_cartesian(0.5)])
    g = gram_matrix(Z)
    rho = 0.5
    want = math.sqrt(1.0 - rho * rho)
    assert gram_column_defect(g, 1) == pytest.approx(want, abs=1e-13)
    assert gram_column_defect(g, 2) == pytest.approx(want, abs=1e-13)
    with pytest.raises(IndexError):
        gram_column_defect(g, 3)


def test_last_column_defect_shrinks_with_truncation_length():
    pts = supergeometric(12)
    defects = []
    for length in range(6, 13):
        Z = PointSequence(pts[:length])
        g = gram_matrix(Z)
        defects.append(gram_column_defect(g, length))
    assert all(b < a for a, b in zip(defects, defects[1:]))


# ---------------------------------------------------------------- eigensolver


def test_jacobi_matches_lapack_on_random_hermitian():
    rng = np.random.default_rng(11)
    for n in (2, 3, 7, 16, 33):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = 0.5 * (m + m.conj().T)
        vals, vecs = hermitian_spectrum(h)
        ref = np.linalg.eigvalsh(h)
        scale = max(1.0, float(np.abs(ref).max()))
        assert np.max(np.abs(vals - ref)) <= 1e-10 * scale
        assert np.linalg.norm(vecs.conj().T @ vecs - np.eye(n)) <= 1e-10
        recon = vecs @ np.diag(vals) @ vecs.conj().T
        assert np.linalg.norm(recon - h) <= 1e-10 * max(1.0, np.linalg.norm(h))


def test_jacobi_real_symmetric_and_diagonal():
    vals, vecs = hermitian_spectrum(np.diag([3.0, -1.0, 2.0]))
    assert np.allclose(vals, [-1.0, 2.0, 3.0])
    assert np.allclose(np.abs(vecs), np.eye(3)[:, [1, 2, 0]])


def test_jacobi_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_spectrum(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_jacobi_reports_non_convergence():
    h = np.array([[1.0, 0.5], [0.5, -1.0]])
    with pytest.raises(ConvergenceError) as exc:
        hermitian_spectrum(h, max_sweeps=0)
    assert exc.value.residual > 0.0


# ---------------------------------------------------------------- min norm


def test_min_norm_single_node_closed_form():
    z = DiscPoint.from_cartesian(0.5)
    Z = PointSequence([z])
    w = 2.0 - 1.0j
    kc, norm = min_norm_interpolant(Z, [w])
    assert kc.coeffs[0] == pytest.approx(w * 0.75, abs=1e-13)
    assert norm == pytest.approx(abs(w) * math.sqrt(0.75), abs=1e-13)


def test_min_norm_interpolates_exactly():
    Z = PointSequence(
        [
            DiscPoint.from_cartesian(0.3, 0.0),
            DiscPoint.from_cartesian(-0.2, 0.4),
            DiscPoint.from_cartesian(0.0, 0.5),
        ]
    )
    rng = np.random.default_rng(5)
    targets = rng.normal(size=3) + 1j * rng.normal(size=3)
    kc, _ = min_norm_interpolant(Z, targets)
    for p, t in zip(Z.points, targets):
        assert evaluate_synthesis(kc, p) == pytest.approx(t, abs=1e-12)


def test_min_norm_matches_taylor_projection_oracle():
    # independent route: least-squares minimal-norm fit on 64 Taylor modes
    pts = [0.3 + 0.0j, -0.2 + 0.4j, 0.0 + 0.5j]
    Z = PointSequence([DiscPoint.from_complex(z) for z in pts])
    rng = np.random.default_rng(17)
    targets = rng.normal(size=3) + 1j * rng.normal(size=3)
    _, norm = min_norm_interpolant(Z, targets)
    powers = np.arange(64)
    v = np.array([[z**k for k in powers] for z in pts])
    coeffs, *_ = np.linalg.lstsq(v, targets, rcond=None)
    assert norm == pytest.approx(float(np.linalg.norm(coeffs)), abs=1e-6)


def test_min_norm_tail_offset():
    Z = PointSequence(geometric(6))
    targets = np.array([1.0, -2.0, 0.5j])
    kc, _ = min_norm_interpolant(Z, targets, N=4)
    assert kc.indices == (4, 5, 6)
    for p, t in zip(Z.points[3:], targets):
        assert evaluate_synthesis(kc, p) == pytest.approx(t, abs=1e-11)


def test_min_norm_rejects_clustered_pair():
    Z = PointSequence(
        [DiscPoint.from_cartesian(0.5), DiscPoint.from_cartesian(0.5 + 1e-9)]
    )
    assert Z.distinct
    with pytest.raises(ClusteringError):
        min_norm_interpolant(Z, [1.0, 1.0])


def test_min_norm_near_boundary_tail_stays_conditioned():
    # accuracy contract is normwise in the weighted metric; plain values at
    # extreme boundary nodes lose digits by the factor 1/sqrt(1 - |z|^2)
    Z = PointSequence(supergeometric(12))
    targets = np.ones(5, dtype=complex)
    kc, norm = min_norm_interpolant(Z, targets, N=8)
    assert math.isfinite(norm)
    for p, t in zip(Z.points[7:], targets):
        got = evaluate_synthesis(kc, p)
        weighted = math.sqrt(p.one_minus_sq) * abs(got - t)
        assert weighted <= 1e-12


def test_matrix_dump_shape():
    m = np.array([[1.0 + 2.0j, 0.0], [0.5j, -1.0]])
    d = matrix_dump(m)
    assert d["n"] == 2
    assert d["re"][0][0] == 1.0
    assert d["im"][0][0] == 2.0
