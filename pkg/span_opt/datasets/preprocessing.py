"""
Preprocessing applied before a run: unit-norm rows and seeded feature
subsampling for very wide datasets.
"""

from typing import Tuple

import numpy as np
import scipy.sparse

from ..objectives import Dataset
from ..utils.helpers import seeded_rng
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

SUBSAMPLE_MAX_ATTEMPTS = 20


def normalize_rows(ds: Dataset) -> Tuple[Dataset, int]:
    """
    Scale every nonzero row to unit Euclidean norm.

    Returns:
        (normalized dataset, number of all-zero rows left untouched)
    """
    norms = ds.row_norms()
    zero_rows = int(np.sum(norms == 0))
    inverse = np.where(norms > 0, 1.0 / np.where(norms > 0, norms, 1.0), 0.0)

    if ds.is_sparse:
        features = scipy.sparse.diags(inverse) @ ds.features
    else:
        features = ds.features * inverse[:, None]

    if zero_rows:
        logger.warning(f"{zero_rows} of {ds.n_samples} rows are zero and stay zero")
    return Dataset(features, ds.labels.copy(), normalized=True), zero_rows


def _zero_row_count(features) -> int:
    if scipy.sparse.issparse(features):
        return int(np.sum(features.getnnz(axis=1) == 0))
    return int(np.sum(~np.any(features != 0, axis=1)))


def subsample_features(
    ds: Dataset,
    n_features: int,
    seed: int,
    max_attempts: int = SUBSAMPLE_MAX_ATTEMPTS,
) -> Tuple[Dataset, np.ndarray]:
    """
    Keep ``n_features`` columns drawn uniformly without replacement.

    A draw that leaves more than half of the rows all-zero is re-sampled; after
    ``max_attempts`` draws the one with the fewest zero rows is kept.

    Returns:
        (column-subsampled dataset, sorted 0-based column indices)
    """
    if not 1 <= n_features <= ds.dim:
        raise ValueError(f"n_features={n_features} outside [1, {ds.dim}]")
    if max_attempts < 1:
        raise ValueError(f"max_attempts must be at least 1, got {max_attempts}")

    rng = seeded_rng(seed)
    best_columns, best_zero = None, None
    for attempt in range(1, max_attempts + 1):
        columns = np.sort(rng.choice(ds.dim, size=n_features, replace=False))
        zero_rows = _zero_row_count(ds.features[:, columns])
        if best_zero is None or zero_rows < best_zero:
            best_columns, best_zero = columns, zero_rows
        if 2 * zero_rows <= ds.n_samples:
            break
        logger.debug(f"Feature draw {attempt}: {zero_rows}/{ds.n_samples} zero rows, re-sampling")
    else:
        logger.warning(
            f"No feature draw in {max_attempts} attempts kept half the rows nonzero; "
            f"using the best one ({best_zero}/{ds.n_samples} zero rows)"
        )

    features = ds.features[:, best_columns]
    return Dataset(features, ds.labels.copy()), best_columns


def subsample_rows(ds: Dataset, n_samples: int, seed: int) -> Dataset:
    """Seeded subset of ``n_samples`` rows, kept in file order"""
    if not 1 <= n_samples <= ds.n_samples:
        raise ValueError(f"n_samples={n_samples} outside [1, {ds.n_samples}]")
    if n_samples == ds.n_samples:
        return ds
    rows = np.sort(seeded_rng(seed).choice(ds.n_samples, size=n_samples, replace=False))
    return Dataset(ds.features[rows], ds.labels[rows], normalized=ds.normalized)
