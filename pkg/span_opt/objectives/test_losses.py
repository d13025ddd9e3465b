import numpy as np
import pytest
import scipy.sparse

from span_opt.errors import BatchTooLarge, DimensionMismatch, DimensionTooLarge
from span_opt.objectives import (
    BatchIndex,
    Dataset,
    ObjectiveConfig,
    batch_gradient,
    batch_loss,
    dense_hessian,
    exact_hvp,
    full_batch,
    sample_batch,
)

GLM_KINDS = ["logistic", "huber_svm"]


def random_dataset(n=30, d=6, seed=0):
    rng = np.random.default_rng(seed)
    features = rng.standard_normal((n, d))
    labels = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    return Dataset(features, labels)


def objective(kind, reg_a=0.1, d=6):
    if kind == "quadratic":
        return ObjectiveConfig("quadratic", reg_a, np.linspace(1.0, 4.0, d)), None
    return ObjectiveConfig(kind, reg_a), random_dataset(d=d)


def central_difference(f, x, h=1e-6):
    grad = np.zeros_like(x)
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h
        grad[i] = (f(x + e) - f(x - e)) / (2 * h)
    return grad


class TestSchemas:
    def test_labels_must_be_signs(self):
        with pytest.raises(ValueError):
            Dataset(np.ones((2, 2)), [1.0, 0.0])

    def test_label_count_checked(self):
        with pytest.raises(DimensionMismatch):
            Dataset(np.ones((2, 2)), [1.0])

    def test_normalized_flag_checked(self):
        with pytest.raises(ValueError):
            Dataset(np.array([[3.0, 4.0]]), [1.0], normalized=True)
        Dataset(np.array([[0.6, 0.8], [0.0, 0.0]]), [1.0, -1.0], normalized=True)

    def test_spectrum_iff_quadratic(self):
        with pytest.raises(ValueError):
            ObjectiveConfig("quadratic", 0.0)
        with pytest.raises(ValueError):
            ObjectiveConfig("logistic", 0.0, [1.0])
        with pytest.raises(ValueError):
            ObjectiveConfig("quadratic", 0.0, [1.0, -2.0])
        with pytest.raises(ValueError):
            ObjectiveConfig("logistic", -0.1)

    def test_batch_index_strictly_increasing(self):
        with pytest.raises(ValueError):
            BatchIndex([0, 2, 2])
        with pytest.raises(ValueError):
            BatchIndex([])
        assert BatchIndex([1, 4, 7]).size == 3


class TestExamples:
    def test_logistic_at_origin_is_log_two(self):
        cfg, data = objective("logistic", reg_a=0.0)
        loss = batch_loss(cfg, data, BatchIndex([0, 3, 5]), np.zeros(6))
        assert loss == pytest.approx(np.log(2.0), abs=1e-15)

    def test_huber_branches(self):
        data = Dataset(np.array([[2.0], [1.0], [0.0]]), np.ones(3))
        cfg = ObjectiveConfig("huber_svm", 0.0)
        x = np.ones(1)
        losses = [batch_loss(cfg, data, BatchIndex([i]), x) for i in range(3)]
        np.testing.assert_allclose(losses, [0.0, 0.125, 1.0], atol=1e-15)

    def test_huber_boundaries_are_continuous(self):
        data = Dataset(np.array([[1.5], [0.5]]), np.ones(2))
        cfg = ObjectiveConfig("huber_svm", 0.0)
        x = np.ones(1)
        assert batch_loss(cfg, data, BatchIndex([0]), x) == 0.0
        assert batch_loss(cfg, data, BatchIndex([1]), x) == pytest.approx(0.5)
        np.testing.assert_allclose(batch_gradient(cfg, data, BatchIndex([1]), x), [-0.5])

    def test_quadratic(self):
        cfg = ObjectiveConfig("quadratic", 0.0, [1.0, 2.0, 3.0])
        x = np.ones(3)
        assert batch_loss(cfg, None, None, x) == pytest.approx(3.0)
        np.testing.assert_allclose(batch_gradient(cfg, None, None, x), [1.0, 2.0, 3.0])
        np.testing.assert_allclose(exact_hvp(cfg, None, None, x, x), [1.0, 2.0, 3.0])
        np.testing.assert_array_equal(dense_hessian(cfg, None, None, x), np.diag([1.0, 2.0, 3.0]))

    def test_logistic_gradient_at_origin(self):
        cfg, data = objective("logistic", reg_a=0.0)
        batch = BatchIndex([1, 2, 8])
        expected = np.mean(-data.labels[batch.indices, None] * 0.5 * data.features[batch.indices], axis=0)
        np.testing.assert_allclose(batch_gradient(cfg, data, batch, np.zeros(6)), expected, atol=1e-15)

    def test_single_sample_logistic_hvp_and_hessian(self):
        data = Dataset(np.array([[1.0, 0.0]]), np.array([1.0]))
        batch = BatchIndex([0])
        hv = exact_hvp(ObjectiveConfig("logistic", 0.0), data, batch, np.zeros(2), np.ones(2))
        np.testing.assert_allclose(hv, [0.25, 0.0])
        H = dense_hessian(ObjectiveConfig("logistic", 0.5), data, batch, np.zeros(2))
        np.testing.assert_allclose(H, [[0.75, 0.0], [0.0, 0.5]])

    def test_zero_direction(self):
        cfg, data = objective("logistic")
        hv = exact_hvp(cfg, data, full_batch(cfg, data), np.ones(6), np.zeros(6))
        np.testing.assert_array_equal(hv, np.zeros(6))

    def test_dimension_mismatch(self):
        cfg, data = objective("logistic")
        with pytest.raises(DimensionMismatch):
            batch_loss(cfg, data, BatchIndex([0]), np.zeros(5))

    def test_dense_hessian_cap(self, monkeypatch):
        from span_opt.config import Config
        monkeypatch.setattr(Config, "DENSE_HESSIAN_CAP", 4)
        cfg, data = objective("logistic")
        with pytest.raises(DimensionTooLarge):
            dense_hessian(cfg, data, BatchIndex([0]), np.zeros(6))


@pytest.mark.parametrize("kind", GLM_KINDS + ["quadratic"])
class TestProperties:
    def test_gradient_matches_finite_differences(self, kind):
        cfg, data = objective(kind)
        rng = np.random.default_rng(1)
        n = 1 if data is None else data.n_samples
        for _ in range(50):
            x = rng.standard_normal(6)
            batch = sample_batch(n, min(n, 8), rng)
            g = batch_gradient(cfg, data, batch, x)
            fd = central_difference(lambda z: batch_loss(cfg, data, batch, z), x)
            assert np.linalg.norm(fd - g) <= 1e-5 * np.linalg.norm(g) + 1e-8

    def test_hvp_matches_dense_hessian(self, kind):
        cfg, data = objective(kind)
        rng = np.random.default_rng(2)
        batch = full_batch(cfg, data)
        for _ in range(10):
            x = rng.standard_normal(6)
            v = rng.standard_normal(6)
            expected = dense_hessian(cfg, data, batch, x) @ v
            np.testing.assert_allclose(exact_hvp(cfg, data, batch, x, v), expected, rtol=1e-10, atol=1e-14)

    def test_matrix_direction(self, kind):
        cfg, data = objective(kind)
        batch = full_batch(cfg, data)
        x = np.full(6, 0.3)
        V = np.random.default_rng(3).standard_normal((6, 3))
        expected = dense_hessian(cfg, data, batch, x) @ V
        np.testing.assert_allclose(exact_hvp(cfg, data, batch, x, V), expected, rtol=1e-10, atol=1e-14)

    def test_convexity_witness(self, kind):
        cfg, data = objective(kind, reg_a=0.2)
        x = np.random.default_rng(4).standard_normal(6)
        H = dense_hessian(cfg, data, full_batch(cfg, data), x)
        np.testing.assert_array_equal(H, H.T)
        assert np.linalg.eigvalsh(H).min() >= cfg.reg_a - 1e-10


@pytest.mark.parametrize("kind", GLM_KINDS)
def test_batch_additivity(kind):
    cfg, data = objective(kind, reg_a=0.3)
    x = np.random.default_rng(5).standard_normal(6)
    first, second = BatchIndex(np.arange(0, 10)), BatchIndex(np.arange(10, 20))
    union = BatchIndex(np.arange(0, 20))
    mean_of_halves = 0.5 * (batch_loss(cfg, data, first, x) + batch_loss(cfg, data, second, x))
    assert batch_loss(cfg, data, union, x) == pytest.approx(mean_of_halves, abs=1e-12)


@pytest.mark.parametrize("kind", GLM_KINDS)
def test_sparse_features_match_dense(kind):
    cfg, data = objective(kind)
    sparse = Dataset(scipy.sparse.csr_matrix(data.features), data.labels)
    batch = BatchIndex([0, 4, 9, 17])
    x = np.linspace(-1.0, 1.0, 6)
    v = np.ones(6)
    assert batch_loss(cfg, sparse, batch, x) == pytest.approx(batch_loss(cfg, data, batch, x), rel=1e-14)
    np.testing.assert_allclose(batch_gradient(cfg, sparse, batch, x), batch_gradient(cfg, data, batch, x), rtol=1e-13, atol=1e-12)
    np.testing.assert_allclose(exact_hvp(cfg, sparse, batch, x, v), exact_hvp(cfg, data, batch, x, v), rtol=1e-13, atol=1e-12)
    np.testing.assert_allclose(dense_hessian(cfg, sparse, batch, x), dense_hessian(cfg, data, batch, x), rtol=1e-13, atol=1e-12)


class TestSampleBatch:
    def test_exhaustive(self):
        batch = sample_batch(5, 5, np.random.default_rng(0))
        np.testing.assert_array_equal(batch.indices, np.arange(5))

    def test_single(self):
        np.testing.assert_array_equal(sample_batch(1, 1, np.random.default_rng(0)).indices, [0])

    def test_too_large(self):
        with pytest.raises(BatchTooLarge):
            sample_batch(3, 4, np.random.default_rng(0))
        with pytest.raises(BatchTooLarge):
            sample_batch(3, 0, np.random.default_rng(0))

    def test_uniform_frequencies(self):
        rng = np.random.default_rng(123)
        counts = np.zeros(10)
        draws = 10000
        for _ in range(draws):
            counts[sample_batch(10, 3, rng).indices] += 1
        sd = np.sqrt(0.3 * 0.7 / draws)
        assert np.all(np.abs(counts / draws - 0.3) <= 4 * sd)

    def test_stream_determinism(self):
        first = sample_batch(100, 10, np.random.default_rng(9))
        second = sample_batch(100, 10, np.random.default_rng(9))
        np.testing.assert_array_equal(first.indices, second.indices)
