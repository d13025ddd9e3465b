"""
Dense linear-algebra kernels shared by every optimizer.

Matrices are plain float64 numpy arrays; the heavy lifting is LAPACK via
scipy.linalg, with ARPACK for matrix-free spectral norms.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from ..config import Config
from ..errors import (
    DimensionMismatch,
    DimensionTooLarge,
    NoConvergence,
    NonFiniteResult,
    RankDeficient,
    SingularSystem,
)
from ..utils.helpers import seeded_rng
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

SeedLike = Union[int, Sequence[int]]


@dataclass(frozen=True)
class EigenPairs:
    """Eigenvalues sorted descending with matching orthonormal eigenvector columns"""

    values: np.ndarray
    vectors: np.ndarray

    def __len__(self) -> int:
        return self.values.shape[0]


def as_dense(A, name: str = "matrix") -> np.ndarray:
    """Validate a DenseMatrix: 2-D, non-empty, finite float64"""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteResult(f"{name} contains NaN or Inf")
    return A


def gaussian_matrix(rows: int, cols: int, seed: SeedLike) -> np.ndarray:
    """
    Standard Gaussian test matrix.

    The stream is keyed solely by ``seed``; the same (seed, rows, cols)
    always yields the same matrix.
    """
    if rows < 1 or cols < 1:
        raise DimensionMismatch(f"gaussian_matrix needs rows, cols >= 1, got ({rows}, {cols})")
    rng = seeded_rng(seed)
    return rng.standard_normal((rows, cols))


def qr_orthonormal(Y) -> np.ndarray:
    """
    Orthonormal basis of span(Y) by Householder QR.

    Raises RankDeficient when the smallest |R_ii| is below
    ``Config.QR_RANK_TOL`` times the largest.
    """
    Y = as_dense(Y, "Y")
    d, l = Y.shape
    if d < l:
        raise DimensionMismatch(f"qr_orthonormal needs rows >= cols, got {Y.shape}")

    Q, R = scipy.linalg.qr(Y, mode="economic", check_finite=False)
    pivots = np.abs(np.diag(R))
    largest = pivots.max()
    if largest == 0.0 or pivots.min() <= Config.QR_RANK_TOL * largest:
        raise RankDeficient(
            f"sketch columns are numerically dependent "
            f"(min/max |R_ii| = {pivots.min():.3e}/{largest:.3e})"
        )
    return Q


def _jacobi_eigh(A: np.ndarray, max_sweeps: int):
    """Cyclic Jacobi rotations on a symmetric matrix; returns unsorted (values, vectors)"""
    a = A.copy()
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v

    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= 1e-14 * scale:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q

                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q

    raise NoConvergence(f"Jacobi eigensolver exceeded {max_sweeps} sweeps")


def sym_eig_small(A, method: Optional[str] = None) -> EigenPairs:
    """
    Eigendecomposition of a small symmetric matrix, values sorted descending.

    Args:
        A: k x k matrix, symmetrized internally as (A + A^T) / 2
        method: "lapack" (scipy eigh) or "jacobi" (cyclic Jacobi, sweep cap
            Config.JACOBI_MAX_SWEEPS); defaults to Config.EIG_METHOD

    Returns:
        EigenPairs with values non-increasing
    """
    A = as_dense(A, "A")
    k = A.shape[0]
    if A.shape[1] != k:
        raise DimensionMismatch(f"sym_eig_small needs a square matrix, got {A.shape}")
    if k > Config.SMALL_MATRIX_CAP:
        raise DimensionTooLarge(f"k={k} exceeds the small-matrix cap {Config.SMALL_MATRIX_CAP}")

    asymmetry = np.linalg.norm(A - A.T, 2) if k > 1 else 0.0
    norm = np.linalg.norm(A, 2)
    if asymmetry > Config.SYMMETRY_TOL * max(norm, 1e-300):
        logger.debug(f"Symmetrizing input with relative asymmetry {asymmetry / norm:.2e}")
    S = 0.5 * (A + A.T)

    method = method or Config.EIG_METHOD
    if method == "jacobi":
        values, vectors = _jacobi_eigh(S, Config.JACOBI_MAX_SWEEPS)
    elif method == "lapack":
        try:
            values, vectors = scipy.linalg.eigh(S, check_finite=False)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"LAPACK eigh failed: {exc}") from exc
    else:
        raise ValueError(f"Unknown eigensolver method: {method}")

    order = np.argsort(values)[::-1]
    return EigenPairs(values=values[order], vectors=vectors[:, order])


def solve_small(A, B) -> np.ndarray:
    """
    Solve A X = B for a small square A by pivoted LU.

    The pivot ratio max|u_ii| / min|u_ii| serves as the condition estimate;
    above Config.SOLVE_COND_LIMIT the system is reported singular.
    B may be a vector or an l x k matrix.
    """
    A = as_dense(A, "A")
    l = A.shape[0]
    if A.shape[1] != l:
        raise DimensionMismatch(f"solve_small needs a square matrix, got {A.shape}")
    B = np.asarray(B, dtype=np.float64)
    if B.shape[0] != l:
        raise DimensionMismatch(f"right-hand side has {B.shape[0]} rows, expected {l}")

    lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    smallest = pivots.min()
    if smallest == 0.0 or pivots.max() / smallest > Config.SOLVE_COND_LIMIT:
        raise SingularSystem(
            f"pivot magnitude {smallest:.3e} too small against {pivots.max():.3e}"
        )
    return scipy.linalg.lu_solve((lu, piv), B, check_finite=False)


def spectral_norm_sym(
    apply: Callable[[np.ndarray], np.ndarray],
    d: int,
    tol: float = Config.PROBE_TOL,
    seed: int = 0,
) -> float:
    """
    Largest |eigenvalue| of a symmetric operator given only its action.

    Small operators (d <= Config.DENSE_PROBE_DIM) are materialized column by
    column and solved exactly; larger ones go through Lanczos (ARPACK)
    started from a seeded random vector.
    """
    if d < 1:
        raise DimensionMismatch(f"operator dimension must be positive, got {d}")

    if d <= Config.DENSE_PROBE_DIM:
        M = np.column_stack([apply(e) for e in np.eye(d)])
        M = 0.5 * (M + M.T)
        values = scipy.linalg.eigvalsh(M, check_finite=False)
        return float(np.max(np.abs(values)))

    start = seeded_rng(seed).standard_normal(d)
    if np.linalg.norm(apply(start)) == 0.0:
        return 0.0

    operator = LinearOperator((d, d), matvec=apply, dtype=np.float64)
    try:
        values = eigsh(
            operator,
            k=1,
            which="LM",
            v0=start,
            tol=tol,
            maxiter=Config.PROBE_MAX_ITER,
            return_eigenvectors=False,
        )
    except ArpackNoConvergence as exc:
        raise NoConvergence(f"spectral norm probe did not converge: {exc}") from exc
    return float(np.abs(values[0]))
