"""
SPAN optimizer core
"""

from .schemas import AUTO_STEPS, LAMBDA_RULES, SpanConfig, SpanState, Subspace, TraceRecord
from .span import (
    apply_inverse,
    auto_step_size,
    build_subspace,
    explicit_hessian,
    hessian_error_probe,
    init_state,
    iterate_span,
    recommended_batch_size,
    run_span,
    span_step,
)

__all__ = [
    'AUTO_STEPS',
    'LAMBDA_RULES',
    'SpanConfig',
    'SpanState',
    'Subspace',
    'TraceRecord',
    'apply_inverse',
    'auto_step_size',
    'build_subspace',
    'explicit_hessian',
    'hessian_error_probe',
    'init_state',
    'iterate_span',
    'recommended_batch_size',
    'run_span',
    'span_step',
]
