"""
Matrix-free Hessian-vector products.

The finite-difference rule differentiates the batch gradient along the unit
direction v / ||v|| with step h = fd_scale * sqrt(eps) * (1 + ||x||) and
rescales by ||v||. Analytic mode delegates to the GLM formulas in
``objectives.exact_hvp``.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..errors import DimensionMismatch, NonFiniteResult
from ..objectives import BatchIndex, Dataset, ObjectiveConfig, batch_gradient, exact_hvp
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

HVP_KINDS = ("finite_difference", "analytic")
MACHINE_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class HvpMode:
    """How H_B(x) v is evaluated"""

    kind: str = "finite_difference"
    fd_scale: float = 1.0
    central: bool = True  # False gives the one-sided difference with C = 1/h

    def __post_init__(self):
        self.validate()

    def validate(self) -> bool:
        if self.kind not in HVP_KINDS:
            raise ValueError(f"HVP kind must be one of {HVP_KINDS}, got {self.kind!r}")
        if not self.fd_scale > 0:
            raise ValueError(f"fd_scale must be positive, got {self.fd_scale}")
        return True

    @property
    def is_analytic(self) -> bool:
        return self.kind == "analytic"

    def step(self, x: np.ndarray) -> float:
        return self.fd_scale * np.sqrt(MACHINE_EPS) * (1.0 + np.linalg.norm(x))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "fd_scale": self.fd_scale, "central": self.central}


FINITE_DIFFERENCE = HvpMode()
ANALYTIC = HvpMode(kind="analytic")


def _check_finite(result: np.ndarray, where: str) -> np.ndarray:
    if not np.all(np.isfinite(result)):
        raise NonFiniteResult(f"non-finite Hessian-vector product ({where})")
    return result


def hvp(
    cfg: ObjectiveConfig,
    data: Optional[Dataset],
    batch: BatchIndex,
    x,
    v,
    mode: HvpMode = FINITE_DIFFERENCE,
) -> np.ndarray:
    """
    H_B(x) v from batch gradients alone (or analytically).

    A zero direction returns zeros without touching the objective.
    """
    x = np.asarray(x, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape != x.shape:
        raise DimensionMismatch(f"direction has shape {v.shape}, expected {x.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteResult("direction contains NaN or Inf")

    v_norm = np.linalg.norm(v)
    if v_norm == 0.0:
        return np.zeros_like(x)

    if mode.is_analytic:
        return _check_finite(exact_hvp(cfg, data, batch, x, v), "analytic")

    h = mode.step(x)
    direction = v / v_norm
    forward = batch_gradient(cfg, data, batch, x + h * direction)
    if mode.central:
        backward = batch_gradient(cfg, data, batch, x - h * direction)
        result = (forward - backward) * (v_norm / (2.0 * h))
    else:
        result = (forward - batch_gradient(cfg, data, batch, x)) * (v_norm / h)
    return _check_finite(result, "finite difference")


def extended_hvp(
    cfg: ObjectiveConfig,
    data: Optional[Dataset],
    batch: BatchIndex,
    x,
    V,
    mode: HvpMode = FINITE_DIFFERENCE,
) -> np.ndarray:
    """Column-wise product H_B(x) V against a d x l matrix, one batch for all columns"""
    x = np.asarray(x, dtype=np.float64)
    V = np.asarray(V, dtype=np.float64)
    if V.ndim != 2 or V.shape[0] != x.shape[0]:
        raise DimensionMismatch(f"V has shape {V.shape}, expected ({x.shape[0]}, l)")
    if not np.all(np.isfinite(V)):
        raise NonFiniteResult("V contains NaN or Inf")

    if mode.is_analytic:
        return _check_finite(exact_hvp(cfg, data, batch, x, V), "analytic")

    out = np.empty_like(V)
    for j in range(V.shape[1]):
        out[:, j] = hvp(cfg, data, batch, x, V[:, j], mode)
    return out
