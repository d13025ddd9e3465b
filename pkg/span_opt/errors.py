"""
Error types raised across span_opt.

Each error also derives from the closest builtin so callers that only know
about ValueError / RuntimeError keep working.
"""

from typing import Optional


class SpanOptError(Exception):
    """Base class for every error raised by span_opt"""


class RankDeficient(SpanOptError, ValueError):
    """Columns of a sketch are numerically dependent"""


class NoConvergence(SpanOptError, RuntimeError):
    """An iterative kernel hit its iteration cap"""


class SingularSystem(SpanOptError, ArithmeticError):
    """A small linear system has a vanishing or badly scaled pivot"""


class DimensionMismatch(SpanOptError, ValueError):
    """A vector or matrix does not match the problem dimension"""


class DimensionTooLarge(SpanOptError, ValueError):
    """A dense construction was requested above its configured cap"""


class BatchTooLarge(SpanOptError, ValueError):
    """Batch size outside [1, n]"""


class NonFiniteResult(SpanOptError, FloatingPointError):
    """NaN or Inf produced where a finite value is required"""


class IndefiniteBlock(SpanOptError, ArithmeticError):
    """The captured Hessian block is not positive definite"""


class DivergingSeries(SpanOptError, RuntimeError):
    """The Neumann recursion grew past its divergence limit"""


class InvalidRankParams(SpanOptError, ValueError):
    """Sketch width, rank and dimension violate their ordering"""


class ParseError(SpanOptError, ValueError):
    """Malformed LIBSVM input"""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class NoMatchingExamples(SpanOptError, ValueError):
    """No example carries either requested label"""


class ConfigError(SpanOptError, ValueError):
    """Experiment configuration is missing or invalid"""


class IncompatibleTraces(SpanOptError, ValueError):
    """Trace files cannot be aligned into one table"""
