"""
SPAN: stochastic projected approximate Newton.

Each step sketches the batch Hessian with a power-iterated Gaussian test
matrix, forms the perturbed approximation

    H_hat = U (Z^T U) U^T + lam (I - U U^T),    Z = H_B U,

and moves along -eta * H_hat^{-1} grad F(x) using the full gradient. The
d x d matrix is never formed.
"""

import math
import time
from typing import Iterable, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ..config import Config
from ..errors import DimensionMismatch, IndefiniteBlock
from ..hvp import ANALYTIC, FINITE_DIFFERENCE, HvpMode, extended_hvp, hvp
from ..linalg import solve_small, spectral_norm_sym, sym_eig_small
from ..objectives import (
    BatchIndex,
    Dataset,
    ObjectiveConfig,
    full_gradient,
    full_loss,
    problem_dim,
    problem_size,
    sample_batch,
)
from ..rangefinder import RangeConfig, power_range
from ..utils.helpers import derive_seed
from ..utils.logger import setup_logger
from .schemas import SpanConfig, SpanState, Subspace, TraceRecord

logger = setup_logger(__name__)

# Stream keys under the run seed
BATCH_STREAM = 0
SKETCH_STREAM = 1


def build_subspace(
    cfg: ObjectiveConfig,
    data: Optional[Dataset],
    batch: BatchIndex,
    x,
    rc: RangeConfig,
    seed: int,
    mode: HvpMode = FINITE_DIFFERENCE,
    lambda_rule: str = "safeguard",
) -> Subspace:
    """
    Sketch H_B(x) and choose the complement eigenvalue.

    ``safeguard`` takes lam = min(lambda_min, sigma_{m+1}(Z^T U));
    ``half_sigma`` takes lam = sigma_{m+1}(Z^T U) / 2 without the cap.
    """
    U = power_range(cfg, data, batch, x, rc, seed, mode)
    Z = extended_hvp(cfg, data, batch, x, U, mode)
    block = Z.T @ U
    block = 0.5 * (block + block.T)

    pairs = sym_eig_small(block)
    smallest = float(pairs.values[-1])
    if smallest <= 0.0:
        raise IndefiniteBlock(
            f"captured block has eigenvalue {smallest:.3e}; the batch Hessian is not positive definite on the sketch"
        )

    lambda_min = 0.5 * smallest
    sigma_proxy = float(pairs.values[rc.m])
    if lambda_rule == "half_sigma":
        lam = 0.5 * sigma_proxy
    else:
        lam = min(lambda_min, sigma_proxy)

    return Subspace(
        U=U,
        Z=Z,
        small_block=block,
        pairs=pairs,
        lam=lam,
        lambda_min=lambda_min,
        sigma_proxy_m1=sigma_proxy,
    )


def apply_inverse(s: Subspace, g) -> np.ndarray:
    """U (Z^T U)^{-1} U^T g + (g - U U^T g) / lam for a vector or a d x k block"""
    g = np.asarray(g, dtype=np.float64)
    if g.shape[0] != s.dim:
        raise DimensionMismatch(f"vector of length {g.shape[0]} for a {s.dim}-dimensional subspace")
    coefficients = s.U.T @ g
    inside = s.U @ solve_small(s.small_block, coefficients)
    outside = (g - s.U @ coefficients) / s.lam
    return inside + outside


def explicit_hessian(s: Subspace) -> np.ndarray:
    """Dense perturbed approximation; only for small-d checks"""
    projector = s.U @ s.U.T
    return s.U @ s.small_block @ s.U.T + s.lam * (np.eye(s.dim) - projector)


def hessian_error_probe(
    s: Subspace,
    cfg: ObjectiveConfig,
    data: Optional[Dataset],
    batch: BatchIndex,
    x,
    mode: HvpMode = ANALYTIC,
    seed: int = 0,
) -> float:
    """Operator norm of H_hat - H_B(x), matrix-free"""
    x = np.asarray(x, dtype=np.float64)
    U = s.U

    def difference(v: np.ndarray) -> np.ndarray:
        inside = U @ (U.T @ v)
        approx = U @ (U.T @ hvp(cfg, data, batch, x, inside, mode)) + s.lam * (v - inside)
        return approx - hvp(cfg, data, batch, x, v, mode)

    return spectral_norm_sym(difference, s.dim, tol=Config.PROBE_TOL, seed=seed)


def auto_step_size(sigma_d: float, lambda_min: float) -> float:
    """Largest step admitted by the contraction bound eta <= sigma_d / (96 lambda_min - 16 sigma_d)"""
    denominator = 96.0 * lambda_min - 16.0 * sigma_d
    if denominator <= 0:
        raise ValueError(f"step bound undefined for sigma_d={sigma_d}, lambda_min={lambda_min}")
    return sigma_d / denominator


def _step_size(eta_t: Optional[float], cfg: SpanConfig, objective: ObjectiveConfig, s: Subspace) -> float:
    if eta_t is not None:
        return eta_t
    if cfg.eta == "auto_reg" and objective.reg_a > 0:
        return auto_step_size(objective.reg_a, s.lambda_min)
    return auto_step_size(s.sigma_min, s.lambda_min)


def init_state(objective: ObjectiveConfig, data: Optional[Dataset], x0) -> SpanState:
    x0 = np.array(x0, dtype=np.float64)
    d = problem_dim(objective, data)
    if x0.shape != (d,):
        raise DimensionMismatch(f"x0 has shape {x0.shape}, expected ({d},)")
    return SpanState(x=x0, gradient=full_gradient(objective, data, x0))


def span_step(
    state: SpanState,
    cfg: SpanConfig,
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    rc: Optional[RangeConfig] = None,
    eta_t: Optional[float] = None,
) -> Tuple[SpanState, TraceRecord]:
    """
    One SPAN iteration from ``state``.

    The batch and the sketch are drawn from streams keyed by (seed,
    iteration), so a step is reproducible on its own. The recorded time
    covers the whole step except the optional error probe.
    """
    t = state.iteration
    rc = rc or cfg.range_config()
    if eta_t is None:
        eta_t = cfg.eta_at(t)

    start = time.perf_counter()
    n = problem_size(objective, data)
    batch = sample_batch(n, cfg.b, np.random.default_rng(derive_seed(cfg.seed, t, BATCH_STREAM)))
    gradient = state.gradient if state.gradient is not None else full_gradient(objective, data, state.x)

    subspace = build_subspace(
        objective,
        data,
        batch,
        state.x,
        rc,
        derive_seed(cfg.seed, t, SKETCH_STREAM),
        cfg.hvp_mode,
        cfg.lambda_rule,
    )
    eta = _step_size(eta_t, cfg, objective, subspace)
    x_next = state.x - eta * apply_inverse(subspace, gradient)

    loss = full_loss(objective, data, x_next)
    gradient_next = full_gradient(objective, data, x_next)
    elapsed = state.elapsed + (time.perf_counter() - start)

    hessian_err = None
    if cfg.probe:
        hessian_err = hessian_error_probe(subspace, objective, data, batch, state.x, seed=cfg.seed)

    record = TraceRecord(
        iteration=t + 1,
        wall_clock_s=elapsed,
        loss=loss,
        grad_norm=float(np.linalg.norm(gradient_next)),
        hessian_err=hessian_err,
        lambda_used=subspace.lam,
    )
    next_state = SpanState(
        x=x_next,
        iteration=t + 1,
        elapsed=elapsed,
        gradient=gradient_next,
        subspace=subspace,
    )
    return next_state, record


def iterate_span(
    cfg: SpanConfig,
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    x0,
) -> Iterable[Tuple[SpanState, TraceRecord]]:
    """Yield (state, record) after each step until T steps or the gradient tolerance"""
    cfg.validate(problem_dim(objective, data), problem_size(objective, data))
    state = init_state(objective, data, x0)
    rc = cfg.range_config()

    for _ in range(cfg.T):
        if np.linalg.norm(state.gradient) <= cfg.grad_tol:
            logger.debug(f"Gradient tolerance {cfg.grad_tol:g} reached at iteration {state.iteration}")
            return
        state, record = span_step(state, cfg, objective, data, rc)
        logger.debug(
            f"span t={record.iteration} loss={record.loss:.6e} "
            f"grad={record.grad_norm:.3e} lambda={record.lambda_used:.3e}"
        )
        yield state, record


def run_span(
    cfg: SpanConfig,
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    x0,
) -> Tuple[np.ndarray, List[TraceRecord]]:
    """Run SPAN from x0; returns the final iterate and its trace"""
    x = np.array(x0, dtype=np.float64)
    trace: List[TraceRecord] = []

    steps = tqdm(
        iterate_span(cfg, objective, data, x0),
        total=cfg.T,
        desc="span",
        leave=False,
        disable=not Config.SHOW_PROGRESS,
    )
    for state, record in steps:
        x = state.x
        trace.append(record)

    if trace:
        last = trace[-1]
        logger.info(
            f"SPAN finished {len(trace)} iterations in {last.wall_clock_s:.3f}s "
            f"(loss={last.loss:.6e}, grad_norm={last.grad_norm:.3e})"
        )
    return x, trace


def recommended_batch_size(K_bound: float, eps: float, l: int, m: int, d: float, N: int) -> int:
    """ceil(min(16 K^2 / eps^2 * (l - m + log 2d), N)), at least 1"""
    if K_bound <= 0 or eps <= 0 or d <= 0 or N < 1 or not m < l:
        raise ValueError("recommended_batch_size needs positive K, eps, d, N and m < l")
    bound = 16.0 * K_bound ** 2 / eps ** 2 * (l - m + math.log(2.0 * d))
    return max(1, math.ceil(min(bound, N)))
