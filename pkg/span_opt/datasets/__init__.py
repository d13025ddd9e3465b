"""
Dataset loading, preprocessing and synthetic problems
"""

from .schemas import QuadraticProblem, RawExample
from .libsvm import dump_libsvm, load_libsvm, parse_line, to_binary_dataset
from .preprocessing import normalize_rows, subsample_features, subsample_rows
from .synthetic import geometric_spectrum, synth_logistic, synth_quadratic

__all__ = [
    'QuadraticProblem',
    'RawExample',
    'dump_libsvm',
    'geometric_spectrum',
    'load_libsvm',
    'normalize_rows',
    'parse_line',
    'subsample_features',
    'subsample_rows',
    'synth_logistic',
    'synth_quadratic',
    'to_binary_dataset',
]
