"""
LiSSA: Newton direction from a stochastic Neumann series.

With ||H_i|| < scale, H^{-1} g is estimated by

    u_0 = g,  u_j = g + u_{j-1} - H_{i_j} u_{j-1} / scale,  direction = u_J / scale

where each H_{i_j} is a single-sample Hessian at a fresh index. s1
independent recursions are averaged.
"""

from typing import Callable, List, Optional, Tuple

import numpy as np

from ..config import Config
from ..core import TraceRecord
from ..errors import DivergingSeries
from ..hvp import ANALYTIC, hvp
from ..linalg import spectral_norm_sym, sym_eig_small
from ..objectives import (
    BatchIndex,
    Dataset,
    ObjectiveConfig,
    dense_hessian,
    full_batch,
    problem_dim,
    problem_size,
    sample_batch,
)
from ..utils.helpers import derive_seed, seeded_rng
from ..utils.logger import setup_logger
from .driver import drive, start_point
from .schemas import BaselineConfig

logger = setup_logger(__name__)


def lissa_direction(
    hvp_fn: Callable[[int, np.ndarray], np.ndarray],
    g: np.ndarray,
    inner_steps: int,
    scale: float,
) -> np.ndarray:
    """
    One truncated Neumann recursion.

    Args:
        hvp_fn: (j, u) -> H_j u, the Hessian sample used at inner step j
        g: right-hand side
        inner_steps: recursion depth J
        scale: bound on the sampled Hessian norms

    Returns:
        u_J / scale
    """
    limit = Config.LISSA_DIVERGENCE_LIMIT * max(1.0, float(np.linalg.norm(g)))
    u = g.copy()
    for j in range(1, inner_steps + 1):
        u = g + u - hvp_fn(j, u) / scale
        if not np.linalg.norm(u) <= limit:
            raise DivergingSeries(
                f"Neumann recursion exceeded {limit:.1e} at inner step {j}; scale {scale:.3e} is too small"
            )
    return u / scale


def lissa_estimate(
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    x: np.ndarray,
    gradient: np.ndarray,
    inner_steps: int,
    s1: int,
    scale: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Average of s1 single-sample recursions for H^{-1} gradient"""
    n = problem_size(objective, data)

    def single_sample(j: int, u: np.ndarray) -> np.ndarray:
        batch = BatchIndex([int(rng.integers(n))])
        return hvp(objective, data, batch, x, u, ANALYTIC)

    estimates = [lissa_direction(single_sample, gradient, inner_steps, scale) for _ in range(s1)]
    return np.mean(estimates, axis=0)


def lissa_scale(
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    x: np.ndarray,
    seed: int,
) -> float:
    """Margin times the largest probed norm among the full Hessian and a few single-sample Hessians"""
    d = problem_dim(objective, data)
    n = problem_size(objective, data)
    rng = seeded_rng(seed)

    batches = [full_batch(objective, data)]
    batches += [BatchIndex([int(i)]) for i in rng.choice(n, size=min(n, Config.LISSA_SCALE_PROBES), replace=False)]

    def operator_for(batch: BatchIndex) -> Callable[[np.ndarray], np.ndarray]:
        return lambda v: hvp(objective, data, batch, x, v, ANALYTIC)

    largest = max(spectral_norm_sym(operator_for(batch), d, seed=seed) for batch in batches)
    scale = Config.LISSA_SCALE_MARGIN * largest
    logger.debug(f"LiSSA scale {scale:.4e} from {len(batches)} probes")
    return scale


def lissa_hessian_error(H, inner_steps: int, scale: float) -> float:
    """
    ||H_hat - H|| for the operator implied by the expected truncated series.

    Each eigenvalue s of H maps to s / (1 - (1 - s/scale)^(J+1)).
    """
    sigma = sym_eig_small(H).values
    captured = 1.0 - (1.0 - sigma / scale) ** (inner_steps + 1)
    # a null direction of H maps to scale / (J+1)
    implied = np.full_like(sigma, scale / (inner_steps + 1))
    nonzero = captured != 0.0
    implied[nonzero] = sigma[nonzero] / captured[nonzero]
    return float(np.max(np.abs(implied - sigma)))


def run_lissa(
    cfg: BaselineConfig,
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    x0,
) -> Tuple[np.ndarray, List[TraceRecord]]:
    x0 = start_point(cfg, objective, data, x0)
    scale = cfg.scale or lissa_scale(objective, data, x0, cfg.seed)
    n = problem_size(objective, data)

    def step(t, x, gradient):
        rng = np.random.default_rng(derive_seed(cfg.seed, t))
        direction = lissa_estimate(objective, data, x, gradient, cfg.inner_steps, cfg.s1, scale, rng)

        def probe() -> float:
            batch = sample_batch(n, cfg.b, rng)
            return lissa_hessian_error(dense_hessian(objective, data, batch, x), cfg.inner_steps, scale)

        return x - cfg.eta * direction, probe

    return drive("lissa", cfg, objective, data, x0, step)
