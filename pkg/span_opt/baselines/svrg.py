"""
Stochastic variance-reduced gradient.

One outer iteration is one snapshot: the full gradient is taken at the
snapshot and ``inner_epochs * ceil(N / b)`` minibatch steps follow with the
corrected estimator g_B(w) - g_B(snapshot) + grad F(snapshot). The outer
iterate is the last inner point.
"""

import math
from typing import List, Optional, Tuple

import numpy as np

from ..core import TraceRecord
from ..objectives import BatchIndex, Dataset, ObjectiveConfig, batch_gradient, problem_size, sample_batch
from ..utils.helpers import derive_seed
from .driver import drive, start_point
from .schemas import BaselineConfig


def svrg_estimator(
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    batch: BatchIndex,
    w: np.ndarray,
    snapshot: np.ndarray,
    snapshot_gradient: np.ndarray,
) -> np.ndarray:
    return batch_gradient(objective, data, batch, w) - batch_gradient(objective, data, batch, snapshot) + snapshot_gradient


def svrg_epoch(
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    snapshot: np.ndarray,
    snapshot_gradient: np.ndarray,
    eta: float,
    b: int,
    inner_epochs: int,
    rng: np.random.Generator,
) -> np.ndarray:
    n = problem_size(objective, data)
    w = snapshot.copy()
    for _ in range(inner_epochs * math.ceil(n / b)):
        batch = sample_batch(n, b, rng)
        w = w - eta * svrg_estimator(objective, data, batch, w, snapshot, snapshot_gradient)
    return w


def run_svrg(
    cfg: BaselineConfig,
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    x0,
) -> Tuple[np.ndarray, List[TraceRecord]]:
    x0 = start_point(cfg, objective, data, x0)

    def step(t, x, gradient):
        rng = np.random.default_rng(derive_seed(cfg.seed, t))
        return svrg_epoch(objective, data, x, gradient, cfg.eta, cfg.b, cfg.inner_epochs, rng), None

    return drive("svrg", cfg, objective, data, x0, step)
