"""
Finite-sum objectives and their oracles
"""

from .schemas import LOSS_KINDS, BatchIndex, Dataset, ObjectiveConfig
from .losses import (
    batch_gradient,
    batch_loss,
    dense_hessian,
    exact_hvp,
    full_batch,
    full_gradient,
    full_loss,
    problem_dim,
    problem_size,
    sample_batch,
)

__all__ = [
    'LOSS_KINDS',
    'BatchIndex',
    'Dataset',
    'ObjectiveConfig',
    'batch_gradient',
    'batch_loss',
    'dense_hessian',
    'exact_hvp',
    'full_batch',
    'full_gradient',
    'full_loss',
    'problem_dim',
    'problem_size',
    'sample_batch',
]
