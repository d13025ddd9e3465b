"""
Core Schemas
Subspace state, optimizer settings and trace rows
"""

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from ..config import Config
from ..errors import BatchTooLarge
from ..hvp import FINITE_DIFFERENCE, HvpMode
from ..linalg import EigenPairs
from ..rangefinder import RangeConfig
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

LAMBDA_RULES = ("safeguard", "half_sigma")
AUTO_STEPS = ("auto", "auto_reg")

StepSchedule = Union[float, Sequence[float], str]


@dataclass(frozen=True)
class TraceRecord:
    """One benchmark row shared by SPAN and every baseline"""

    iteration: int
    wall_clock_s: float
    loss: float
    grad_norm: float
    hessian_err: Optional[float] = None
    lambda_used: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {column: getattr(self, column) for column in Config.TRACE_COLUMNS}

    def without_clock(self) -> Dict[str, Any]:
        row = self.to_dict()
        row.pop("wall_clock_s")
        return row


@dataclass(frozen=True, eq=False)
class Subspace:
    """
    Per-iteration approximation state.

    U spans the sketch, Z = H_B U, small_block = sym(Z^T U) with eigenpairs
    ``pairs``. ``lam`` is the complement eigenvalue of the perturbed
    approximation, ``lambda_min`` half the smallest block eigenvalue and
    ``sigma_proxy_m1`` the (m+1)-th block eigenvalue.
    """

    U: np.ndarray = field(repr=False)
    Z: np.ndarray = field(repr=False)
    small_block: np.ndarray = field(repr=False)
    pairs: EigenPairs = field(repr=False)
    lam: float
    lambda_min: float
    sigma_proxy_m1: float

    @property
    def dim(self) -> int:
        return self.U.shape[0]

    @property
    def width(self) -> int:
        return self.U.shape[1]

    @property
    def sigma_min(self) -> float:
        return float(self.pairs.values[-1])

    def with_lambda(self, lam: float) -> "Subspace":
        """Copy with a different complement eigenvalue, bypassing the safeguard"""
        if not lam > 0:
            raise ValueError(f"lambda must be positive, got {lam}")
        return dataclasses.replace(self, lam=float(lam))


@dataclass
class SpanConfig:
    """Hyperparameters of one SPAN run"""

    T: int
    l: int
    m: int
    q: int = 1
    b: int = 1
    eta: StepSchedule = 1.0
    seed: int = 0
    grad_tol: float = 0.0
    hvp_mode: HvpMode = FINITE_DIFFERENCE
    lambda_rule: str = "safeguard"
    reorthonormalize: Optional[bool] = None
    probe: bool = False

    def range_config(self) -> RangeConfig:
        return RangeConfig(l=self.l, q=self.q, m=self.m, reorthonormalize=self.reorthonormalize)

    def validate(self, d: int, n: int) -> bool:
        """Raises on invalid settings for a problem of dimension d with n terms"""
        if self.T < 0:
            raise ValueError(f"T must be non-negative, got {self.T}")
        self.range_config().validate(d)
        if self.m + 4 > self.l:
            logger.warning(f"l={self.l} < m+4={self.m + 4}: the oversampling margin of the error bound is not met")
        if not 1 <= self.b <= n:
            raise BatchTooLarge(f"batch size {self.b} outside [1, {n}]")
        if self.grad_tol < 0:
            raise ValueError(f"grad_tol must be non-negative, got {self.grad_tol}")
        if self.lambda_rule not in LAMBDA_RULES:
            raise ValueError(f"lambda_rule must be one of {LAMBDA_RULES}, got {self.lambda_rule!r}")

        if isinstance(self.eta, str):
            if self.eta not in AUTO_STEPS:
                raise ValueError(f"eta must be a number, a list or one of {AUTO_STEPS}, got {self.eta!r}")
        else:
            steps = np.atleast_1d(np.asarray(self.eta, dtype=np.float64))
            if steps.size == 0 or not np.all(steps > 0):
                raise ValueError("every step size must be positive")
            if steps.size > 1 and steps.size < self.T:
                raise ValueError(f"step schedule has {steps.size} entries for T={self.T}")
        return True

    def eta_at(self, t: int) -> Optional[float]:
        """Step size of iteration t, None when chosen adaptively"""
        if isinstance(self.eta, str):
            return None
        steps = np.atleast_1d(np.asarray(self.eta, dtype=np.float64))
        return float(steps[0] if steps.size == 1 else steps[t])

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["hvp_mode"] = self.hvp_mode.kind
        if not isinstance(self.eta, (str, float, int)):
            data["eta"] = list(self.eta)
        return data


@dataclass(eq=False)
class SpanState:
    """Driver state between steps; ``gradient`` caches the full gradient at x"""

    x: np.ndarray
    iteration: int = 0
    elapsed: float = 0.0
    gradient: Optional[np.ndarray] = None
    subspace: Optional[Subspace] = None
