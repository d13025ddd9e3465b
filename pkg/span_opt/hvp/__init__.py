"""
Hessian-vector products
"""

from .products import ANALYTIC, FINITE_DIFFERENCE, HVP_KINDS, HvpMode, extended_hvp, hvp

__all__ = ['ANALYTIC', 'FINITE_DIFFERENCE', 'HVP_KINDS', 'HvpMode', 'extended_hvp', 'hvp']
