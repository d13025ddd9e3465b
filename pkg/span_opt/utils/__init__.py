"""
Utilities package for span_opt
"""

from .logger import logger, setup_logger
from .helpers import measure_performance, derive_seed, seeded_rng

__all__ = ['logger', 'setup_logger', 'measure_performance', 'derive_seed', 'seeded_rng']
