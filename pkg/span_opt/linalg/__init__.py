"""
Dense linear-algebra kernels
"""

from .kernels import (
    EigenPairs,
    as_dense,
    gaussian_matrix,
    qr_orthonormal,
    sym_eig_small,
    solve_small,
    spectral_norm_sym,
)

__all__ = [
    'EigenPairs',
    'as_dense',
    'gaussian_matrix',
    'qr_orthonormal',
    'sym_eig_small',
    'solve_small',
    'spectral_norm_sym',
]
