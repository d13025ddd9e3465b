import numpy as np
import pytest

from span_opt.config import Config
from span_opt.errors import (
    DimensionMismatch,
    DimensionTooLarge,
    NoConvergence,
    RankDeficient,
    SingularSystem,
)
from span_opt.linalg import (
    gaussian_matrix,
    qr_orthonormal,
    solve_small,
    spectral_norm_sym,
    sym_eig_small,
)


def random_symmetric(k, seed):
    A = np.random.default_rng(seed).standard_normal((k, k))
    return 0.5 * (A + A.T)


class TestGaussianMatrix:
    def test_same_seed_is_byte_identical(self):
        first = gaussian_matrix(3, 2, 42)
        second = gaussian_matrix(3, 2, 42)
        assert first.tobytes() == second.tobytes()

    def test_moments(self):
        sample = gaussian_matrix(1000, 1, 7)
        assert abs(sample.mean()) < 0.1
        assert abs(sample.var() - 1.0) < 0.15

    def test_different_seeds_differ(self):
        assert not np.array_equal(gaussian_matrix(2, 2, 1), gaussian_matrix(2, 2, 2))

    def test_rejects_empty_shape(self):
        with pytest.raises(DimensionMismatch):
            gaussian_matrix(0, 3, 1)

    def test_negative_seeds_are_valid(self):
        np.testing.assert_array_equal(gaussian_matrix(3, 2, -3), gaussian_matrix(3, 2, -3))
        assert not np.array_equal(gaussian_matrix(3, 2, -3), gaussian_matrix(3, 2, 3))
        assert gaussian_matrix(3, 2, [-3, 1]).shape == (3, 2)

    def test_non_negative_seed_matches_numpy_stream(self):
        expected = np.random.default_rng(42).standard_normal((3, 2))
        np.testing.assert_array_equal(gaussian_matrix(3, 2, 42), expected)



class TestQrOrthonormal:
    def test_orthonormal_input_is_reproduced(self):
        Y = np.eye(3)[:, :2]
        U = qr_orthonormal(Y)
        np.testing.assert_allclose(U @ U.T, Y @ Y.T, atol=1e-12)

    def test_axis_aligned_columns(self):
        U = qr_orthonormal(np.array([[2.0, 0.0], [0.0, 3.0], [0.0, 0.0]]))
        np.testing.assert_allclose(np.abs(U), [[1, 0], [0, 1], [0, 0]], atol=1e-12)

    def test_random_projector_residual(self):
        Y = gaussian_matrix(10, 4, 3)
        U = qr_orthonormal(Y)
        assert np.max(np.abs(U.T @ U - np.eye(4))) <= 1e-10
        residual = Y - U @ (U.T @ Y)
        assert np.linalg.norm(residual, 2) <= 1e-10 * np.linalg.norm(Y, 2)

    def test_dependent_columns_raise(self):
        col = np.arange(1.0, 6.0)
        with pytest.raises(RankDeficient):
            qr_orthonormal(np.column_stack([col, 2.0 * col]))

    def test_wide_input_rejected(self):
        with pytest.raises(DimensionMismatch):
            qr_orthonormal(np.ones((2, 3)))


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
class TestSymEigSmall:
    def test_diagonal(self, method):
        pairs = sym_eig_small(np.diag([3.0, 1.0, 2.0]), method=method)
        np.testing.assert_allclose(pairs.values, [3.0, 2.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(np.abs(pairs.vectors), np.eye(3)[:, [0, 2, 1]], atol=1e-12)

    def test_two_by_two_closed_form(self, method):
        pairs = sym_eig_small(np.array([[2.0, 1.0], [1.0, 2.0]]), method=method)
        np.testing.assert_allclose(pairs.values, [3.0, 1.0], atol=1e-12)
        inv_sqrt2 = 1.0 / np.sqrt(2.0)
        assert abs(abs(pairs.vectors[:, 0] @ np.array([inv_sqrt2, inv_sqrt2])) - 1.0) < 1e-12
        assert abs(abs(pairs.vectors[:, 1] @ np.array([inv_sqrt2, -inv_sqrt2])) - 1.0) < 1e-12

    def test_rank_one(self, method):
        v = np.array([1.0, 2.0, 2.0])
        pairs = sym_eig_small(np.outer(v, v), method=method)
        np.testing.assert_allclose(pairs.values, [9.0, 0.0, 0.0], atol=1e-10)

    @pytest.mark.parametrize("k", [1, 5, 20, 64])
    def test_reconstruction(self, method, k):
        A = random_symmetric(k, seed=k)
        pairs = sym_eig_small(A, method=method)
        V = pairs.vectors
        assert np.all(np.diff(pairs.values) <= 0)
        assert np.max(np.abs(V.T @ V - np.eye(k))) <= 1e-10
        rebuilt = V @ np.diag(pairs.values) @ V.T
        assert np.linalg.norm(rebuilt - A, 2) <= 1e-8 * np.linalg.norm(A, 2)


def test_sym_eig_small_symmetrizes_drift():
    A = np.array([[2.0, 1.0 + 1e-9], [1.0, 2.0]])
    pairs = sym_eig_small(A)
    np.testing.assert_allclose(pairs.values, [3.0, 1.0], atol=1e-8)


def test_sym_eig_small_cap(monkeypatch):
    monkeypatch.setattr(Config, "SMALL_MATRIX_CAP", 4)
    with pytest.raises(DimensionTooLarge):
        sym_eig_small(np.eye(5))


def test_jacobi_sweep_cap(monkeypatch):
    monkeypatch.setattr(Config, "JACOBI_MAX_SWEEPS", 0)
    with pytest.raises(NoConvergence):
        sym_eig_small(np.array([[2.0, 1.0], [1.0, 2.0]]), method="jacobi")


class TestSolveSmall:
    def test_identity(self):
        B = np.arange(6.0).reshape(3, 2)
        np.testing.assert_allclose(solve_small(np.eye(3), B), B)

    def test_diagonal_vector_rhs(self):
        X = solve_small(np.diag([2.0, 4.0]), np.array([1.0, 1.0]))
        np.testing.assert_allclose(X, [0.5, 0.25])

    def test_residual_on_random_system(self):
        rng = np.random.default_rng(11)
        A = rng.standard_normal((5, 5)) + 5.0 * np.eye(5)
        B = rng.standard_normal((5, 3))
        X = solve_small(A, B)
        assert np.linalg.norm(A @ X - B) <= 1e-8 * np.linalg.norm(A) * np.linalg.norm(X)

    def test_singular(self):
        with pytest.raises(SingularSystem):
            solve_small(np.array([[1.0, 2.0], [2.0, 4.0]]), np.ones(2))

    def test_rhs_shape_checked(self):
        with pytest.raises(DimensionMismatch):
            solve_small(np.eye(3), np.ones(2))


class TestSpectralNormSym:
    def test_diagonal_operator(self):
        D = np.array([1.0, -5.0, 2.0])
        assert spectral_norm_sym(lambda v: D * v, 3) == pytest.approx(5.0, rel=1e-12)

    def test_zero_operator(self):
        assert spectral_norm_sym(lambda v: np.zeros_like(v), 7) == 0.0
        assert spectral_norm_sym(lambda v: np.zeros_like(v), 200) == 0.0

    def test_projected_difference_matches_dense(self):
        d = 20
        H = np.diag(np.linspace(10.0, 0.5, d))
        U = qr_orthonormal(gaussian_matrix(d, 5, 9))
        P = U @ U.T
        approx = P @ H @ P + 0.4 * (np.eye(d) - P)
        diff = H - approx
        expected = np.max(np.abs(sym_eig_small(diff).values))
        assert spectral_norm_sym(lambda v: diff @ v, d) == pytest.approx(expected, rel=1e-5)

    def test_lanczos_path(self):
        d = 150
        spectrum = np.linspace(-3.0, 8.0, d)
        value = spectral_norm_sym(lambda v: spectrum * v, d, tol=1e-10, seed=5)
        assert value == pytest.approx(8.0, rel=1e-6)

    def test_lanczos_path_with_negative_seed(self):
        d = 150
        spectrum = np.linspace(-3.0, 8.0, d)
        assert spectral_norm_sym(lambda v: spectrum * v, d, tol=1e-10, seed=-5) == pytest.approx(8.0, rel=1e-6)

