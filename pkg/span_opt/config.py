import os
from typing import Dict, Any
from dotenv import load_dotenv

load_dotenv()


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class Config:
    """Runtime configuration shared by the kernels, optimizers and benchmark runner"""

    # Linear algebra kernels
    SMALL_MATRIX_CAP = int(os.getenv("SPAN_SMALL_MATRIX_CAP", 2048))
    DENSE_HESSIAN_CAP = int(os.getenv("SPAN_DENSE_HESSIAN_CAP", 512))
    EIG_METHOD = os.getenv("SPAN_EIG_METHOD", "lapack")  # lapack | jacobi
    JACOBI_MAX_SWEEPS = 100
    QR_RANK_TOL = 1e-12
    SOLVE_COND_LIMIT = 1e12
    SYMMETRY_TOL = 1e-8

    # Spectral norm probes
    DENSE_PROBE_DIM = int(os.getenv("SPAN_DENSE_PROBE_DIM", 64))
    PROBE_MAX_ITER = int(os.getenv("SPAN_PROBE_MAX_ITER", 5000))
    PROBE_TOL = 1e-6

    # Optimizers
    RANGE_MAX_RETRIES = 3
    REORTHONORMALIZE_FROM_Q = 3
    LISSA_DIVERGENCE_LIMIT = 1e8
    LISSA_SCALE_MARGIN = 1.25
    LISSA_SCALE_PROBES = 5

    # Logging
    LOG_LEVEL = os.getenv("SPAN_LOG_LEVEL", "INFO").upper()
    LOG_FILE = os.getenv("SPAN_LOG_FILE", "")

    # Benchmark runner
    BENCH_THREADS = int(os.getenv("BENCH_THREADS", 0))  # 0 = library default
    SHOW_PROGRESS = _env_flag("BENCH_PROGRESS", "1")
    OUTPUT_DIR = os.getenv("BENCH_OUTPUT_DIR", "results")
    TRACE_COLUMNS = ["iteration", "wall_clock_s", "loss", "grad_norm", "hessian_err", "lambda_used"]

    @staticmethod
    def thread_env() -> Dict[str, str]:
        """Environment variables that cap BLAS/OpenMP threads, empty when uncapped"""
        if Config.BENCH_THREADS <= 0:
            return {}
        threads = str(Config.BENCH_THREADS)
        return {
            "OMP_NUM_THREADS": threads,
            "MKL_NUM_THREADS": threads,
            "OPENBLAS_NUM_THREADS": threads,
        }

    @staticmethod
    def apply_thread_limits() -> None:
        # Only effective before numpy loads its BLAS
        for key, value in Config.thread_env().items():
            os.environ.setdefault(key, value)

    @staticmethod
    def as_dict() -> Dict[str, Any]:
        return {
            key: getattr(Config, key)
            for key in dir(Config)
            if key.isupper()
        }
