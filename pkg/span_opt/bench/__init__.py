"""
Benchmark runner: experiment files, traces, plot tables and scaling sweeps
"""

from .schemas import (
    DATASET_KINDS,
    METHODS,
    PLOT_MODES,
    DatasetSpec,
    ExperimentConfig,
    ExperimentResult,
    MethodResult,
    MethodSpec,
    ScalingConfig,
)
from .config import load_experiment, load_scaling
from .pipeline import ExperimentRunner, build_problem, preiterate, run_experiment, write_trace
from .plots import align_traces, emit_plot_data, read_traces
from .scaling import growth_factors, per_iteration_scaling

__all__ = [
    'DATASET_KINDS',
    'METHODS',
    'PLOT_MODES',
    'DatasetSpec',
    'ExperimentConfig',
    'ExperimentResult',
    'ExperimentRunner',
    'MethodResult',
    'MethodSpec',
    'ScalingConfig',
    'align_traces',
    'build_problem',
    'emit_plot_data',
    'growth_factors',
    'load_experiment',
    'load_scaling',
    'per_iteration_scaling',
    'preiterate',
    'read_traces',
    'run_experiment',
    'write_trace',
]
