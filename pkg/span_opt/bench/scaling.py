"""
Per-iteration cost of SPAN against NewSamp as the dimension grows.

Each dimension gets a diagonal quadratic whose top ``l`` eigenvalues are
spread over [2, 10] above a flat tail at 1, so both methods take stable steps
for the whole sweep. Step times are read off the trace clocks; the first
``warmup`` steps are dropped.
"""

from typing import List, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..baselines import BaselineConfig, run_newsamp
from ..config import Config
from ..core import SpanConfig, TraceRecord, run_span
from ..datasets import synth_quadratic
from ..utils.helpers import measure_performance
from ..utils.logger import setup_logger
from .schemas import ScalingConfig

logger = setup_logger(__name__)


def scaling_spectrum(d: int, l: int) -> np.ndarray:
    head = np.linspace(10.0, 2.0, min(l, d))
    return np.concatenate([head, np.ones(d - head.size)])


def mean_step_seconds(trace: List[TraceRecord], warmup: int) -> float:
    clocks = np.array([0.0] + [record.wall_clock_s for record in trace])
    steps = np.diff(clocks)[warmup:]
    return float(np.mean(steps)) if steps.size else float("nan")


def _newsamp_limit(cfg: ScalingConfig) -> int:
    return min(cfg.newsamp_max_dim, Config.DENSE_HESSIAN_CAP)


@measure_performance
def per_iteration_scaling(cfg: ScalingConfig, output: Optional[str] = None) -> pd.DataFrame:
    """
    Mean seconds per step for SPAN and NewSamp at every d in cfg.dims.

    NewSamp is skipped (NaN) above ``newsamp_max_dim`` or the dense Hessian cap.
    """
    cfg.validate()
    total = cfg.warmup + cfg.steps
    rows = []
    for d in tqdm(cfg.dims, desc="scaling", disable=not Config.SHOW_PROGRESS):
        problem = synth_quadratic(scaling_spectrum(d, cfg.l), seed=cfg.seed)

        span_cfg = SpanConfig(T=total, l=cfg.l, m=cfg.m, q=cfg.q, b=1, eta="auto", seed=cfg.seed)
        _, span_trace = run_span(span_cfg, problem.objective, None, problem.x0)
        row = {"d": d, "span_step_s": mean_step_seconds(span_trace, cfg.warmup), "newsamp_step_s": float("nan")}

        if d <= _newsamp_limit(cfg):
            newsamp_cfg = BaselineConfig("newsamp", T=total, eta=1.0, b=1, m=cfg.m, seed=cfg.seed)
            _, newsamp_trace = run_newsamp(newsamp_cfg, problem.objective, None, problem.x0)
            row["newsamp_step_s"] = mean_step_seconds(newsamp_trace, cfg.warmup)
        else:
            logger.info(f"NewSamp skipped at d={d} (dense limit {_newsamp_limit(cfg)})")

        logger.info(f"d={d}: SPAN {row['span_step_s'] * 1e3:.3f} ms/step, NewSamp {row['newsamp_step_s'] * 1e3:.3f} ms/step")
        rows.append(row)

    table = pd.DataFrame(rows, columns=["d", "span_step_s", "newsamp_step_s"])
    if output:
        table.to_csv(output, index=False, na_rep="")
    return table


def growth_factors(table: pd.DataFrame) -> pd.DataFrame:
    """Ratio of each row's step time to the previous row's, per method"""
    ratios = table[["span_step_s", "newsamp_step_s"]].div(table[["span_step_s", "newsamp_step_s"]].shift(1))
    ratios.insert(0, "d", table["d"])
    return ratios.iloc[1:].reset_index(drop=True)
