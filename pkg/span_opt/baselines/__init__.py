"""
Reference optimizers sharing the SPAN trace format
"""

from .schemas import BASELINE_METHODS, BaselineConfig
from .gd import gd_step, run_gd
from .svrg import run_svrg, svrg_epoch, svrg_estimator
from .newsamp import newsamp_hessian_error, newsamp_inverse, newsamp_step, run_newsamp
from .lissa import lissa_direction, lissa_estimate, lissa_hessian_error, lissa_scale, run_lissa
from .runner import RUNNERS, run_baseline

__all__ = [
    'BASELINE_METHODS',
    'BaselineConfig',
    'RUNNERS',
    'gd_step',
    'lissa_direction',
    'lissa_estimate',
    'lissa_hessian_error',
    'lissa_scale',
    'newsamp_hessian_error',
    'newsamp_inverse',
    'newsamp_step',
    'run_baseline',
    'run_gd',
    'run_lissa',
    'run_newsamp',
    'run_svrg',
    'svrg_epoch',
    'svrg_estimator',
]
