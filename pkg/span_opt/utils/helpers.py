import time
from functools import wraps
from typing import Callable, Any, Sequence, Union

import numpy as np

from .logger import logger

SEED_MASK = 0xFFFFFFFFFFFFFFFF


def measure_performance(func: Callable) -> Callable:
    """Decorator to measure execution time"""
    @wraps(func)
    def wrapper(*args, **kwargs) -> Any:
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        elapsed = time.perf_counter() - start_time
        logger.info(f"Function {func.__name__} executed in {elapsed:.2f} seconds")
        return result
    return wrapper


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministic child seed for (seed, keys...), stable across runs and platforms"""
    sequence = np.random.SeedSequence([int(seed) & SEED_MASK, *[int(k) & SEED_MASK for k in keys]])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def seeded_rng(seed: Union[int, Sequence[int]]) -> np.random.Generator:
    """
    Generator for an integer seed or a sequence of them.

    Every integer is accepted: values are taken modulo 2**64, so non-negative
    seeds give the same stream as ``np.random.default_rng``.
    """
    keys = [seed] if isinstance(seed, (int, np.integer)) else list(seed)
    return np.random.default_rng([int(k) & SEED_MASK for k in keys])
