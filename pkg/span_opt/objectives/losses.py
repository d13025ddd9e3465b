"""
Finite-sum objectives: batch loss, gradient and Hessian oracles.

Every batch quantity is the mean over the sampled terms plus the full
regularizer (a/2)||x||^2. The quadratic objective has no samples and ignores
its batch argument.
"""

from typing import Optional, Tuple

import numpy as np
import scipy.sparse
from scipy.special import expit

from ..config import Config
from ..errors import BatchTooLarge, DimensionMismatch, DimensionTooLarge
from ..utils.logger import setup_logger
from .schemas import BatchIndex, Dataset, ObjectiveConfig

logger = setup_logger(__name__)

# Smoothed Huber breakpoints on the margin m = y * theta^T x
HUBER_UPPER = 1.5
HUBER_LOWER = 0.5


def problem_size(cfg: ObjectiveConfig, data: Optional[Dataset]) -> int:
    """Number of finite-sum terms N (a quadratic counts as one term)"""
    if cfg.is_quadratic:
        return 1
    return _require_data(cfg, data).n_samples


def problem_dim(cfg: ObjectiveConfig, data: Optional[Dataset]) -> int:
    if cfg.is_quadratic:
        return len(cfg.quadratic_spectrum)
    return _require_data(cfg, data).dim


def full_batch(cfg: ObjectiveConfig, data: Optional[Dataset]) -> BatchIndex:
    return BatchIndex(np.arange(problem_size(cfg, data)))


def sample_batch(n: int, b: int, rng: np.random.Generator) -> BatchIndex:
    """b distinct indices drawn uniformly without replacement from range(n)"""
    if n < 1 or b < 1 or b > n:
        raise BatchTooLarge(f"batch size {b} outside [1, {n}]")
    picked = rng.choice(n, size=b, replace=False)
    return BatchIndex(np.sort(picked))


def _require_data(cfg: ObjectiveConfig, data: Optional[Dataset]) -> Dataset:
    if data is None:
        raise ValueError(f"{cfg.loss_kind} objective needs a dataset")
    return data


def _check_x(cfg: ObjectiveConfig, data: Optional[Dataset], x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    d = problem_dim(cfg, data)
    if x.ndim != 1 or x.shape[0] != d:
        raise DimensionMismatch(f"x has shape {x.shape}, expected ({d},)")
    if not np.all(np.isfinite(x)):
        raise ValueError("x contains NaN or Inf")
    return x


def _check_direction(d: int, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.ndim not in (1, 2) or v.shape[0] != d:
        raise DimensionMismatch(f"direction has shape {v.shape}, expected ({d},) or ({d}, k)")
    return v


def _batch_rows(
    data: Dataset, batch: BatchIndex
) -> Tuple[object, np.ndarray]:
    batch.check_bound(data.n_samples)
    return data.features[batch.indices], data.labels[batch.indices]


def _huber_terms(margins: np.ndarray):
    """Per-sample (loss, first derivative, second derivative) of the smoothed hinge"""
    loss = np.zeros_like(margins)
    slope = np.zeros_like(margins)
    curvature = np.zeros_like(margins)

    smooth = (margins >= HUBER_LOWER) & (margins < HUBER_UPPER)
    linear = margins < HUBER_LOWER

    gap = HUBER_UPPER - margins[smooth]
    loss[smooth] = 0.5 * gap ** 2
    slope[smooth] = -gap
    curvature[smooth] = 1.0

    loss[linear] = 1.0 - margins[linear]
    slope[linear] = -1.0
    return loss, slope, curvature


def batch_loss(cfg: ObjectiveConfig, data: Optional[Dataset], batch: BatchIndex, x) -> float:
    """(1/b) sum_{i in B} loss_i(x) + (a/2)||x||^2"""
    x = _check_x(cfg, data, x)
    regularizer = 0.5 * cfg.reg_a * float(x @ x)

    if cfg.is_quadratic:
        return 0.5 * float(x @ (cfg.spectrum * x)) + regularizer

    rows, labels = _batch_rows(data, batch)
    margins = labels * (rows @ x)
    if cfg.loss_kind == "logistic":
        terms = np.logaddexp(0.0, -margins)
    else:
        terms, _, _ = _huber_terms(margins)
    return float(np.mean(terms)) + regularizer


def batch_gradient(cfg: ObjectiveConfig, data: Optional[Dataset], batch: BatchIndex, x) -> np.ndarray:
    x = _check_x(cfg, data, x)

    if cfg.is_quadratic:
        return cfg.spectrum * x + cfg.reg_a * x

    rows, labels = _batch_rows(data, batch)
    margins = labels * (rows @ x)
    if cfg.loss_kind == "logistic":
        slope = -expit(-margins)
    else:
        _, slope, _ = _huber_terms(margins)
    coefficients = slope * labels / batch.size
    return np.asarray(rows.T @ coefficients).ravel() + cfg.reg_a * x


def _curvature(cfg: ObjectiveConfig, rows, labels: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Per-sample second derivative of the loss along theta_i"""
    margins = labels * (rows @ x)
    if cfg.loss_kind == "logistic":
        return expit(margins) * expit(-margins)
    _, _, curvature = _huber_terms(margins)
    return curvature


def exact_hvp(cfg: ObjectiveConfig, data: Optional[Dataset], batch: BatchIndex, x, v) -> np.ndarray:
    """
    Analytic H_B(x) v for the generalized linear losses.

    ``v`` may be a vector or a d x k matrix; the result has the same shape.
    """
    x = _check_x(cfg, data, x)
    v = _check_direction(x.shape[0], v)

    if cfg.is_quadratic:
        scale = cfg.spectrum + cfg.reg_a
        return scale[:, None] * v if v.ndim == 2 else scale * v

    rows, labels = _batch_rows(data, batch)
    weights = _curvature(cfg, rows, labels, x) / batch.size
    projected = rows @ v
    if v.ndim == 2:
        weighted = weights[:, None] * projected
    else:
        weighted = weights * projected
    return np.asarray(rows.T @ weighted) + cfg.reg_a * v


def dense_hessian(cfg: ObjectiveConfig, data: Optional[Dataset], batch: BatchIndex, x) -> np.ndarray:
    """Explicit batch Hessian; a test oracle and the NewSamp workhorse, capped in d"""
    x = _check_x(cfg, data, x)
    d = x.shape[0]
    if d > Config.DENSE_HESSIAN_CAP:
        raise DimensionTooLarge(f"dense Hessian requested for d={d} above cap {Config.DENSE_HESSIAN_CAP}")

    if cfg.is_quadratic:
        return np.diag(cfg.spectrum + cfg.reg_a)

    rows, labels = _batch_rows(data, batch)
    weights = _curvature(cfg, rows, labels, x) / batch.size
    if scipy.sparse.issparse(rows):
        rows = rows.toarray()
    H = rows.T @ (weights[:, None] * rows)
    H = 0.5 * (H + H.T)
    H[np.diag_indices(d)] += cfg.reg_a
    return H


def full_loss(cfg: ObjectiveConfig, data: Optional[Dataset], x) -> float:
    return batch_loss(cfg, data, full_batch(cfg, data), x)


def full_gradient(cfg: ObjectiveConfig, data: Optional[Dataset], x) -> np.ndarray:
    return batch_gradient(cfg, data, full_batch(cfg, data), x)
