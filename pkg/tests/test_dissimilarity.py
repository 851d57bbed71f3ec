import numpy as np
import pytest

import romdict as rd
from romdict.dissimilarity import rel_proj_error_sq_rows
from romdict.pod import LocalBasis


def random_orthonormal_basis(rng, n_h, N, ip):
    A = rng.standard_normal((N, n_h))
    for j in range(N):
        for i in range(j):
            A[j] -= ip.inner(A[i], A[j]) * A[i]
        A[j] /= ip.norm(A[j])
    return LocalBasis(A, np.ones(N))


def test_sine_dissim_collinear():
    ip = rd.InnerProduct()
    u = np.array([1.0, 2.0, 3.0])
    assert rd.sine_dissim(u, u, ip) == 0.0
    assert rd.sine_dissim(u, -3.0 * u, ip) == pytest.approx(0.0, abs=1e-12)


def test_sine_dissim_orthogonal():
    ip = rd.InnerProduct()
    assert rd.sine_dissim([1.0, 0.0], [0.0, 1.0], ip) == pytest.approx(1.0)


def test_sine_dissim_hand_value():
    ip = rd.InnerProduct()
    got = rd.sine_dissim([1.0, 0.0], [1.0, 1.0], ip)
    assert got == pytest.approx(np.sqrt(0.5), abs=1e-12)


def test_sine_dissim_zero_argument():
    ip = rd.InnerProduct()
    with pytest.raises(ValueError, match="zero"):
        rd.sine_dissim([0.0, 0.0], [1.0, 0.0], ip)


def test_scale_invariance():
    rng = np.random.default_rng(0)
    ip = rd.InnerProduct(rng.uniform(0.5, 2.0, 10))
    for _ in range(50):
        u = rng.standard_normal(10)
        v = rng.standard_normal(10)
        base = rd.sine_dissim(u, v, ip)
        for l1, l2 in ((-3.0, 0.01), (1e4, -7.0)):
            assert rd.sine_dissim(l1 * u, l2 * v, ip) == pytest.approx(
                base, abs=1e-12
            )


def test_identity_of_indiscernibles_quotient():
    rng = np.random.default_rng(1)
    ip = rd.InnerProduct()
    for _ in range(50):
        u = rng.standard_normal(6)
        v = 0.5 * u if rng.random() < 0.5 else rng.standard_normal(6)
        d = rd.sine_dissim(u, v, ip)
        G = np.array(
            [[ip.inner(u, u), ip.inner(u, v)], [ip.inner(u, v), ip.inner(v, v)]]
        )
        w = np.linalg.eigvalsh(G)
        rank_deficient = w[0] <= 1e-8 * w[1]
        assert (d <= 1e-8) == rank_deficient


def test_triangle_inequality():
    rng = np.random.default_rng(2)
    ip = rd.InnerProduct()
    for _ in range(200):
        u, v, w = rng.standard_normal((3, 8))
        duw = rd.sine_dissim(u, w, ip)
        duv = rd.sine_dissim(u, v, ip)
        dvw = rd.sine_dissim(v, w, ip)
        assert duw <= duv + dvw + 1e-10


def test_dissim_matrix_single_direction():
    u = np.array([1.0, -2.0, 0.5])
    S = rd.SnapshotSet(np.vstack([u, 2 * u, -u]))
    D = rd.dissim_matrix(S, rd.InnerProduct())
    assert np.allclose(D.values, 0.0, atol=1e-7)


def test_dissim_matrix_orthogonal_axes():
    S = rd.SnapshotSet(np.eye(3))
    D = rd.dissim_matrix(S, rd.InnerProduct())
    assert np.allclose(D.values, 1.0 - np.eye(3))


def test_dissim_matrix_matches_pairwise():
    rng = np.random.default_rng(3)
    data = rng.standard_normal((5, 7))
    ip = rd.InnerProduct(rng.uniform(0.5, 2.0, 7))
    D = rd.dissim_matrix(rd.SnapshotSet(data), ip)
    for i in range(5):
        for j in range(5):
            if i != j:
                assert D.values[i, j] == pytest.approx(
                    rd.sine_dissim(data[i], data[j], ip), abs=1e-12
                )


def test_dissim_matrix_csv(tmp_path):
    rng = np.random.default_rng(4)
    D = rd.dissim_matrix(rd.SnapshotSet(rng.standard_normal((4, 5))), rd.InnerProduct())
    path = tmp_path / "d.csv"
    D.to_csv(path)
    loaded = np.loadtxt(path, delimiter=",")
    assert np.allclose(loaded, D.values)


def test_rel_proj_error_in_span():
    ip = rd.InnerProduct()
    B = LocalBasis(np.eye(4)[:2], np.ones(2))
    u = B.vectors[0] + 2 * B.vectors[1]
    assert rd.rel_proj_error(u, B, ip) == pytest.approx(0.0, abs=1e-12)


def test_rel_proj_error_orthogonal():
    ip = rd.InnerProduct()
    B = LocalBasis(np.eye(4)[:2], np.ones(2))
    assert rd.rel_proj_error(np.eye(4)[3], B, ip) == pytest.approx(1.0)


def test_rel_proj_error_hand_value():
    ip = rd.InnerProduct()
    B = LocalBasis(np.eye(3)[:1], np.ones(1))
    got = rd.rel_proj_error(np.array([1.0, 1.0, 0.0]), B, ip)
    assert got == pytest.approx(np.sqrt(0.5), abs=1e-12)


def test_rel_proj_error_rejects_bad_basis():
    ip = rd.InnerProduct()
    B = LocalBasis(np.array([[1.0, 1.0, 0.0]]), np.ones(1))
    with pytest.raises(ValueError, match="orthonormal"):
        rd.rel_proj_error(np.array([1.0, 0.0, 0.0]), B, ip)
    with pytest.raises(ValueError, match="zero"):
        rd.rel_proj_error(np.zeros(3), LocalBasis(np.eye(3)[:1], np.ones(1)), ip)


def test_monotonicity_in_basis_size():
    rng = np.random.default_rng(5)
    ip = rd.InnerProduct()
    B3 = random_orthonormal_basis(rng, 10, 3, ip)
    u = rng.standard_normal(10)
    errs = [
        rd.rel_proj_error(u, LocalBasis(B3.vectors[:n], np.ones(n)), ip)
        for n in (1, 2, 3)
    ]
    assert errs[0] >= errs[1] - 1e-12
    assert errs[1] >= errs[2] - 1e-12


def test_corollary_dissim_equals_1d_projection():
    rng = np.random.default_rng(6)
    ip = rd.InnerProduct(rng.uniform(0.5, 2.0, 9))
    for _ in range(50):
        u = rng.standard_normal(9)
        v = rng.standard_normal(9)
        B = LocalBasis((v / ip.norm(v))[None, :], np.ones(1))
        assert rd.sine_dissim(u, v, ip) == pytest.approx(
            rd.rel_proj_error(u, B, ip), abs=1e-10
        )


def test_property1_hand_case():
    ip = rd.InnerProduct()
    B = LocalBasis(np.eye(3)[:2], np.ones(2))
    u = np.array([1.0, 1.0, 0.0])
    assert rd.property1_residual(u, B, ip) <= 1e-12


def test_property1_basis_member():
    rng = np.random.default_rng(7)
    ip = rd.InnerProduct()
    B = random_orthonormal_basis(rng, 8, 3, ip)
    assert rd.property1_residual(B.vectors[0], B, ip) <= 1e-10


def test_property1_random_draws():
    rng = np.random.default_rng(8)
    ip = rd.InnerProduct()
    for _ in range(100):
        N = int(rng.integers(1, 4))
        B = random_orthonormal_basis(rng, 12, N, ip)
        u = rng.standard_normal(12)
        assert rd.property1_residual(u, B, ip) <= 1e-10


def test_residual_form_matches_coefficient_form():
    rng = np.random.default_rng(9)
    ip = rd.InnerProduct(rng.uniform(0.5, 2.0, 10))
    B = random_orthonormal_basis(rng, 10, 3, ip)
    U = rng.standard_normal((6, 10))
    sq = rel_proj_error_sq_rows(U, B, ip)
    for i in range(6):
        assert np.sqrt(sq[i]) == pytest.approx(
            rd.rel_proj_error(U[i], B, ip), abs=1e-8
        )
