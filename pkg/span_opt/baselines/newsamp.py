"""
NewSamp: Newton steps with a truncated, regularized inverse of a dense
subsampled Hessian. Keeps the top-m eigenpairs and replaces the rest of the
spectrum by sigma_{m+1}.
"""

from typing import List, Optional, Tuple

import numpy as np

from ..core import TraceRecord
from ..errors import IndefiniteBlock
from ..linalg import EigenPairs, sym_eig_small
from ..objectives import Dataset, ObjectiveConfig, dense_hessian, problem_size, sample_batch
from ..utils.helpers import derive_seed
from .driver import drive, start_point
from .schemas import BaselineConfig


def newsamp_inverse(H, m: int, pairs: Optional[EigenPairs] = None) -> np.ndarray:
    """sigma_{m+1}^{-1} I + sum_{i<=m} (sigma_i^{-1} - sigma_{m+1}^{-1}) u_i u_i^T"""
    pairs = pairs or sym_eig_small(H)
    sigma = pairs.values
    floor = float(sigma[m])
    if floor <= 0.0:
        raise IndefiniteBlock(f"sigma_(m+1) = {floor:.3e} is not positive")

    top = pairs.vectors[:, :m]
    correction = 1.0 / sigma[:m] - 1.0 / floor
    return np.eye(sigma.shape[0]) / floor + (top * correction) @ top.T


def newsamp_hessian_error(H, m: int, pairs: Optional[EigenPairs] = None) -> float:
    """||H_hat - H|| where H_hat keeps the top-m spectrum and flattens the rest to sigma_{m+1}"""
    pairs = pairs or sym_eig_small(H)
    tail = pairs.values[m:]
    return float(np.max(np.abs(tail[0] - tail)))


def newsamp_step(
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    x: np.ndarray,
    gradient: np.ndarray,
    cfg: BaselineConfig,
    rng: np.random.Generator,
):
    batch = sample_batch(problem_size(objective, data), cfg.b, rng)
    H = dense_hessian(objective, data, batch, x)
    pairs = sym_eig_small(H)
    x_next = x - cfg.eta * (newsamp_inverse(H, cfg.m, pairs) @ gradient)
    return x_next, lambda: newsamp_hessian_error(H, cfg.m, pairs)


def run_newsamp(
    cfg: BaselineConfig,
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    x0,
) -> Tuple[np.ndarray, List[TraceRecord]]:
    x0 = start_point(cfg, objective, data, x0)

    def step(t, x, gradient):
        rng = np.random.default_rng(derive_seed(cfg.seed, t))
        return newsamp_step(objective, data, x, gradient, cfg, rng)

    return drive("newsamp", cfg, objective, data, x0, step)
