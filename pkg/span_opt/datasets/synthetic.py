"""
Synthetic problems with known structure: diagonal quadratics with a chosen
spectrum, and planted-model logistic data whose feature covariance decays
geometrically.
"""

from typing import Sequence

import numpy as np
from scipy.special import expit

from ..linalg import qr_orthonormal
from ..objectives import Dataset, ObjectiveConfig
from ..utils.helpers import seeded_rng
from ..utils.logger import setup_logger
from .schemas import QuadraticProblem

logger = setup_logger(__name__)


def geometric_spectrum(d: int, ratio: float, top: float = 1.0) -> np.ndarray:
    """(top, top*r, top*r^2, ...), length d"""
    if d < 1 or not ratio > 0 or not top > 0:
        raise ValueError(f"need d >= 1 and positive ratio/top, got d={d}, ratio={ratio}, top={top}")
    return top * ratio ** np.arange(d, dtype=np.float64)


def synth_quadratic(spectrum: Sequence[float], seed: int = 0, reg_a: float = 0.0) -> QuadraticProblem:
    """
    F(x) = 0.5 x^T diag(spectrum) x (+ 0.5 a ||x||^2), minimized at x* = 0.

    The start point is a standard normal draw from ``seed``.
    """
    objective = ObjectiveConfig("quadratic", reg_a, spectrum)
    d = len(objective.quadratic_spectrum)
    x0 = seeded_rng(seed).standard_normal(d)
    return QuadraticProblem(objective=objective, x_star=np.zeros(d), x0=x0)


def synth_logistic(n: int, d: int, decay: float = 0.9, seed: int = 0) -> Dataset:
    """
    Labels drawn from a planted logistic model.

    Rows are Gaussian with covariance Q diag(decay^(2k)) Q^T for a random
    rotation Q; labels are +1 with probability sigmoid(theta_i . w*).
    """
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    if not 0 < decay <= 1:
        raise ValueError(f"decay must lie in (0, 1], got {decay}")

    rng = seeded_rng(seed)
    rotation = qr_orthonormal(rng.standard_normal((d, d)))
    features = (rng.standard_normal((n, d)) * decay ** np.arange(d)) @ rotation.T
    w_star = rng.standard_normal(d)
    labels = np.where(rng.random(n) < expit(features @ w_star), 1.0, -1.0)

    logger.debug(f"Synthetic logistic data: n={n}, d={d}, decay={decay}, positives={int(np.sum(labels > 0))}")
    return Dataset(features, labels)
