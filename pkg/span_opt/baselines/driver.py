"""
Shared iteration loop for the baselines: timing, tracing and stopping.
"""

import time
from typing import Callable, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ..config import Config
from ..core import TraceRecord
from ..errors import DimensionMismatch
from ..objectives import Dataset, ObjectiveConfig, full_gradient, full_loss, problem_dim, problem_size
from ..utils.logger import setup_logger
from .schemas import BaselineConfig

logger = setup_logger(__name__)

# step(t, x, gradient) -> (x_next, deferred error probe or None)
StepFn = Callable[[int, np.ndarray, np.ndarray], Tuple[np.ndarray, Optional[Callable[[], float]]]]


def start_point(cfg: BaselineConfig, objective: ObjectiveConfig, data: Optional[Dataset], x0) -> np.ndarray:
    x0 = np.array(x0, dtype=np.float64)
    d = problem_dim(objective, data)
    if x0.shape != (d,):
        raise DimensionMismatch(f"x0 has shape {x0.shape}, expected ({d},)")
    cfg.validate(d, problem_size(objective, data))
    return x0


def drive(
    name: str,
    cfg: BaselineConfig,
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    x0: np.ndarray,
    step: StepFn,
) -> Tuple[np.ndarray, List[TraceRecord]]:
    """
    Run ``step`` up to cfg.T times from x0.

    Wall clock covers the step plus the loss and gradient at the new iterate;
    deferred probes run off the clock.
    """
    x = x0
    gradient = full_gradient(objective, data, x)
    elapsed = 0.0
    trace: List[TraceRecord] = []

    for t in tqdm(range(cfg.T), desc=name, leave=False, disable=not Config.SHOW_PROGRESS):
        if np.linalg.norm(gradient) <= cfg.grad_tol:
            logger.debug(f"{name}: gradient tolerance {cfg.grad_tol:g} reached at iteration {t}")
            break

        start = time.perf_counter()
        x_next, probe = step(t, x, gradient)
        loss = full_loss(objective, data, x_next)
        gradient = full_gradient(objective, data, x_next)
        elapsed += time.perf_counter() - start

        record = TraceRecord(
            iteration=t + 1,
            wall_clock_s=elapsed,
            loss=loss,
            grad_norm=float(np.linalg.norm(gradient)),
            hessian_err=probe() if (cfg.probe and probe is not None) else None,
        )
        trace.append(record)
        x = x_next
        logger.debug(f"{name} t={record.iteration} loss={record.loss:.6e} grad={record.grad_norm:.3e}")

    if trace:
        logger.info(
            f"{name.upper()} finished {len(trace)} iterations in {elapsed:.3f}s "
            f"(loss={trace[-1].loss:.6e}, grad_norm={trace[-1].grad_norm:.3e})"
        )
    return x, trace
