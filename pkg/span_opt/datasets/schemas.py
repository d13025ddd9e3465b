"""
Dataset Schemas
Parsed LIBSVM examples and synthetic problem bundles
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Sequence

import numpy as np

from ..objectives import ObjectiveConfig


@dataclass(frozen=True, eq=False)
class RawExample:
    """
    One LIBSVM line: a label and its sparse features.

    ``indices`` are 0-based internally and written back 1-based on the wire.
    """

    label: float
    indices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    values: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.float64))

    def __post_init__(self):
        object.__setattr__(self, "label", float(self.label))
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=np.int64).ravel())
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64).ravel())
        self.validate()

    def validate(self) -> bool:
        if self.indices.shape != self.values.shape:
            raise ValueError(f"{self.indices.size} indices for {self.values.size} values")
        if self.indices.size and self.indices[0] < 0:
            raise ValueError("feature indices must be non-negative")
        if np.any(np.diff(self.indices) <= 0):
            raise ValueError("feature indices must be strictly increasing")
        return True

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    @property
    def max_index(self) -> int:
        """Largest 1-based index on this line, 0 when there are no features"""
        return int(self.indices[-1]) + 1 if self.nnz else 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, RawExample):
            return NotImplemented
        return (
            self.label == other.label
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "features": {int(i) + 1: float(v) for i, v in zip(self.indices, self.values)},
        }


@dataclass(frozen=True, eq=False)
class QuadraticProblem:
    """A diagonal quadratic with its optimum x* = 0 and a seeded start point"""

    objective: ObjectiveConfig
    x_star: np.ndarray
    x0: np.ndarray

    @property
    def dim(self) -> int:
        return self.x_star.shape[0]

    @property
    def condition_number(self) -> float:
        spectrum: Sequence[float] = self.objective.quadratic_spectrum
        return max(spectrum) / min(spectrum)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "condition_number": self.condition_number,
            "objective": self.objective.to_dict(),
        }
