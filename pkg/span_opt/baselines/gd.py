from typing import List, Optional, Tuple

import numpy as np

from ..core import TraceRecord
from ..objectives import Dataset, ObjectiveConfig
from .driver import drive, start_point
from .schemas import BaselineConfig


def gd_step(x: np.ndarray, gradient: np.ndarray, eta: float) -> np.ndarray:
    return x - eta * gradient


def run_gd(
    cfg: BaselineConfig,
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    x0,
) -> Tuple[np.ndarray, List[TraceRecord]]:
    """Full-gradient descent x <- x - eta * grad F(x)"""
    x0 = start_point(cfg, objective, data, x0)

    def step(t, x, gradient):
        return gd_step(x, gradient, cfg.eta), None

    return drive("gd", cfg, objective, data, x0, step)
