from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..core import TraceRecord
from ..objectives import Dataset, ObjectiveConfig
from .gd import run_gd
from .lissa import run_lissa
from .newsamp import run_newsamp
from .schemas import BaselineConfig
from .svrg import run_svrg

RUNNERS: Dict[str, Callable[..., Tuple[np.ndarray, List[TraceRecord]]]] = {
    "gd": run_gd,
    "svrg": run_svrg,
    "newsamp": run_newsamp,
    "lissa": run_lissa,
}


def run_baseline(
    cfg: BaselineConfig,
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    x0,
) -> Tuple[np.ndarray, List[TraceRecord]]:
    if cfg.method not in RUNNERS:
        raise ValueError(f"Unknown baseline method: {cfg.method}")
    return RUNNERS[cfg.method](cfg, objective, data, x0)
