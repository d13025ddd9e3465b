"""
Randomized range finding by power iteration
"""

from .power import RangeConfig, min_power_iterations, power_range

__all__ = ['RangeConfig', 'min_power_iterations', 'power_range']
