"""
Baseline Schemas
Settings shared by the reference optimizers
"""

import dataclasses
from dataclasses import dataclass
from typing import Any, Dict, Optional

from ..errors import BatchTooLarge
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

BASELINE_METHODS = ("gd", "svrg", "newsamp", "lissa")


@dataclass
class BaselineConfig:
    """
    Hyperparameters of one baseline run.

    Fields only matter to the methods that read them: ``m`` for NewSamp,
    ``inner_epochs`` for SVRG, ``inner_steps``, ``s1`` and ``scale`` for
    LiSSA. ``b`` is the SVRG minibatch and the NewSamp Hessian sample size.
    """

    method: str
    T: int
    eta: float = 1.0
    b: int = 1
    m: int = 1
    inner_epochs: int = 1
    inner_steps: int = 10
    s1: int = 1
    scale: Optional[float] = None  # LiSSA Hessian scale; probed at x0 when unset
    seed: int = 0
    grad_tol: float = 0.0
    probe: bool = False

    def validate(self, d: int, n: int) -> bool:
        if self.method not in BASELINE_METHODS:
            raise ValueError(f"method must be one of {BASELINE_METHODS}, got {self.method!r}")
        if self.T < 0:
            raise ValueError(f"T must be non-negative, got {self.T}")
        if self.eta < 0 or (self.method != "gd" and self.eta == 0):
            raise ValueError(f"step size must be positive for {self.method}, got {self.eta}")
        if self.grad_tol < 0:
            raise ValueError(f"grad_tol must be non-negative, got {self.grad_tol}")
        if self.method in ("svrg", "newsamp", "lissa") and not 1 <= self.b <= n:
            raise BatchTooLarge(f"batch size {self.b} outside [1, {n}]")

        if self.method == "svrg" and self.inner_epochs < 1:
            raise ValueError(f"inner_epochs must be at least 1, got {self.inner_epochs}")
        if self.method == "newsamp" and not 0 <= self.m < d:
            raise ValueError(f"NewSamp rank m={self.m} must lie in [0, d={d})")
        if self.method == "lissa":
            if self.inner_steps < 0 or self.s1 < 1:
                raise ValueError("LiSSA needs inner_steps >= 0 and s1 >= 1")
            if self.scale is not None and not self.scale > 0:
                raise ValueError(f"LiSSA scale must be positive, got {self.scale}")
        return True

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)
