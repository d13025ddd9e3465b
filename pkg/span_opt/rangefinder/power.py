"""
Randomized range finder with power iteration.

Y_0 = Omega (Gaussian d x l), Y_j = H_B(x) Y_{j-1} for j = 1 .. 2q+1, and U is
the orthonormal factor of Y_{2q+1}. H_B is only touched through extended
Hessian-vector products.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..config import Config
from ..errors import InvalidRankParams, RankDeficient
from ..hvp import FINITE_DIFFERENCE, HvpMode, extended_hvp
from ..linalg import gaussian_matrix, qr_orthonormal
from ..objectives import BatchIndex, Dataset, ObjectiveConfig
from ..utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class RangeConfig:
    """Sketch width l, power exponent q and target rank m"""

    l: int
    q: int = 1
    m: int = 1
    reorthonormalize: Optional[bool] = None  # None: on when q >= Config.REORTHONORMALIZE_FROM_Q

    @property
    def products(self) -> int:
        return 2 * self.q + 1

    @property
    def reorthonormalizes(self) -> bool:
        if self.reorthonormalize is None:
            return self.q >= Config.REORTHONORMALIZE_FROM_Q
        return self.reorthonormalize

    def validate(self, d: int) -> bool:
        """Hard limits 1 <= l <= d, 0 <= m < l, q >= 0; the m + 4 <= l margin is advisory"""
        if not 1 <= self.l <= d:
            raise InvalidRankParams(f"sketch width l={self.l} must lie in [1, d={d}]")
        if not 0 <= self.m < self.l:
            raise InvalidRankParams(f"rank m={self.m} must lie in [0, l={self.l})")
        if self.q < 0:
            raise InvalidRankParams(f"power exponent q={self.q} must be non-negative")
        if self.m + 4 > self.l:
            logger.debug(f"l={self.l} < m+4={self.m + 4}: the oversampling margin of the error bound is not met")
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {"l": self.l, "q": self.q, "m": self.m, "reorthonormalize": self.reorthonormalizes}


def power_range(
    cfg: ObjectiveConfig,
    data: Optional[Dataset],
    batch: BatchIndex,
    x,
    rc: RangeConfig,
    seed: int,
    mode: HvpMode = FINITE_DIFFERENCE,
) -> np.ndarray:
    """
    Orthonormal d x l basis U approximating the dominant range of H_B(x).

    A rank-deficient sketch is redrawn from the stream keyed by
    (seed, attempt) up to Config.RANGE_MAX_RETRIES times before giving up.

    Args:
        cfg, data, batch, x: objective, data and batch defining H_B(x)
        rc: sketch parameters
        seed: sketch seed; attempt 0 draws Omega from ``seed`` itself
        mode: HVP evaluation mode

    Returns:
        U with orthonormal columns
    """
    x = np.asarray(x, dtype=np.float64)
    d = x.shape[0]
    rc.validate(d)

    last_error: Optional[RankDeficient] = None
    for attempt in range(Config.RANGE_MAX_RETRIES + 1):
        omega_seed = seed if attempt == 0 else [seed, attempt]
        Y = gaussian_matrix(d, rc.l, omega_seed)
        try:
            for j in range(rc.products):
                Y = extended_hvp(cfg, data, batch, x, Y, mode)
                if rc.reorthonormalizes and j < rc.products - 1:
                    Y = qr_orthonormal(Y)
            return qr_orthonormal(Y)
        except RankDeficient as exc:
            last_error = exc
            logger.warning(f"Sketch attempt {attempt + 1} rank deficient ({exc}), redrawing")

    raise RankDeficient(
        f"sketch stayed rank deficient after {Config.RANGE_MAX_RETRIES} retries; "
        f"the batch Hessian has numerical rank below l={rc.l}"
    ) from last_error


def min_power_iterations(d: int, l: int, m: int) -> int:
    """Smallest power exponent q for which the factor-3 approximation bound holds"""
    if not (1 <= m <= l - 4 <= d - 4):
        raise InvalidRankParams(f"need 1 <= m <= l - 4 <= d - 4, got d={d}, l={l}, m={m}")
    argument = 34.0 * math.sqrt(l / (l - m)) + 16.0 * math.sqrt(l) / (l - m + 1) * math.sqrt(d - m)
    return math.ceil(0.5 * math.log(argument, 1.5))
