"""
span_opt - stochastic approximate-Newton optimization with a benchmark harness
"""

from .config import Config

# Thread caps must be in the environment before numpy loads its BLAS
Config.apply_thread_limits()

from .errors import SpanOptError  # noqa: E402

__version__ = "1.0.0"

__all__ = ['Config', 'SpanOptError', '__version__']
