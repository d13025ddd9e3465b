"""
Objective Schemas
Datasets, objective settings and sample batches
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np
import scipy.sparse

from ..errors import DimensionMismatch
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

LOSS_KINDS = ("logistic", "huber_svm", "quadratic")

FeatureMatrix = Union[np.ndarray, scipy.sparse.csr_matrix]


@dataclass
class Dataset:
    """N labeled instances (theta_i, y_i) with labels in {-1, +1}"""

    features: FeatureMatrix
    labels: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        if scipy.sparse.issparse(self.features):
            self.features = scipy.sparse.csr_matrix(self.features, dtype=np.float64)
        else:
            self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.float64).ravel()
        self.validate()

    def validate(self) -> bool:
        """Check shapes, labels, finiteness and the unit-norm flag; raises on violation"""
        if self.features.ndim != 2 or self.features.shape[0] < 1 or self.features.shape[1] < 1:
            raise DimensionMismatch(f"features must be a non-empty N x d matrix, got {self.features.shape}")
        if self.labels.shape[0] != self.features.shape[0]:
            raise DimensionMismatch(
                f"{self.labels.shape[0]} labels for {self.features.shape[0]} feature rows"
            )
        if not np.all(np.isin(self.labels, (-1.0, 1.0))):
            raise ValueError("every label must be exactly -1 or +1")

        values = self.features.data if self.is_sparse else self.features
        if not np.all(np.isfinite(values)):
            raise ValueError("features contain NaN or Inf")

        if self.normalized:
            norms = self.row_norms()
            nonzero = norms > 0
            if not np.allclose(norms[nonzero], 1.0, rtol=0.0, atol=1e-10):
                raise ValueError("dataset flagged normalized but a nonzero row is not unit norm")
        return True

    @property
    def is_sparse(self) -> bool:
        return scipy.sparse.issparse(self.features)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def row_norms(self) -> np.ndarray:
        if self.is_sparse:
            return np.sqrt(np.asarray(self.features.multiply(self.features).sum(axis=1)).ravel())
        return np.linalg.norm(self.features, axis=1)

    def to_dense(self) -> "Dataset":
        if not self.is_sparse:
            return self
        return Dataset(self.features.toarray(), self.labels.copy(), self.normalized)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_samples": self.n_samples,
            "dim": self.dim,
            "sparse": self.is_sparse,
            "normalized": self.normalized,
            "positives": int(np.sum(self.labels > 0)),
        }


@dataclass(frozen=True)
class ObjectiveConfig:
    """Loss family and L2 coefficient; quadratic problems carry their diagonal spectrum"""

    loss_kind: str
    reg_a: float = 0.0
    quadratic_spectrum: Optional[Sequence[float]] = None

    def __post_init__(self):
        if self.quadratic_spectrum is not None:
            spectrum = tuple(float(s) for s in np.ravel(self.quadratic_spectrum))
            object.__setattr__(self, "quadratic_spectrum", spectrum)
        self.validate()

    def validate(self) -> bool:
        if self.loss_kind not in LOSS_KINDS:
            raise ValueError(f"loss_kind must be one of {LOSS_KINDS}, got {self.loss_kind!r}")
        if not np.isfinite(self.reg_a) or self.reg_a < 0:
            raise ValueError(f"reg_a must be a non-negative real, got {self.reg_a}")

        is_quadratic = self.loss_kind == "quadratic"
        if is_quadratic != (self.quadratic_spectrum is not None):
            raise ValueError("quadratic_spectrum is required for, and only for, loss_kind='quadratic'")
        if is_quadratic:
            if len(self.quadratic_spectrum) == 0:
                raise ValueError("quadratic_spectrum must be non-empty")
            if min(self.quadratic_spectrum) <= 0:
                raise ValueError("quadratic_spectrum entries must be positive")
        return True

    @property
    def is_quadratic(self) -> bool:
        return self.loss_kind == "quadratic"

    @property
    def spectrum(self) -> np.ndarray:
        return np.asarray(self.quadratic_spectrum, dtype=np.float64)

    def to_dict(self) -> Dict[str, Any]:
        data = {"loss_kind": self.loss_kind, "reg_a": self.reg_a}
        if self.is_quadratic:
            data["dim"] = len(self.quadratic_spectrum)
        return data


@dataclass(frozen=True, eq=False)
class BatchIndex:
    """Strictly increasing sample indices of one batch B"""

    indices: np.ndarray = field(repr=False)

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=np.int64).ravel()
        if indices.size == 0:
            raise ValueError("a batch must contain at least one index")
        if indices[0] < 0 or np.any(np.diff(indices) <= 0):
            raise ValueError("batch indices must be non-negative and strictly increasing")
        object.__setattr__(self, "indices", indices)

    @property
    def size(self) -> int:
        return int(self.indices.size)

    def check_bound(self, n: int) -> None:
        if self.indices[-1] >= n:
            raise DimensionMismatch(f"batch index {self.indices[-1]} out of range for {n} samples")

    def __repr__(self) -> str:
        return f"BatchIndex(size={self.size})"
