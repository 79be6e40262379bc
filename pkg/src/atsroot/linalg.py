"""Dense linear algebra kernel.

Matrices are plain two-dimensional ``float64`` numpy arrays. Every routine
here validates its input through :func:`as_matrix` so that NaN or Inf never
reaches LAPACK, and every rank decision goes through :func:`numerical_rank`
so the whole package shares one tolerance rule.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

EPS = np.finfo(np.float64).eps

# product shapes above this many entries are refused by kronecker()
MAX_ENTRIES = 2**31


class DecompositionError(np.linalg.LinAlgError):
    """Raised when a LAPACK decomposition fails to converge."""


class ShapeError(ValueError):
    """Raised on non-conforming or otherwise invalid array shapes."""


class SvdResult(NamedTuple):
    u: NDArray[np.float64]
    singular_values: NDArray[np.float64]
    vt: NDArray[np.float64]


def as_matrix(a: ArrayLike, name: str = "matrix") -> NDArray[np.float64]:
    """Return `a` as a finite 2-D float64 array, raising on anything else."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_vector(v: ArrayLike, name: str = "vector") -> NDArray[np.float64]:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ShapeError(f"{name} must be 1-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def svd(a: ArrayLike) -> SvdResult:
    """Full singular value decomposition ``a = u @ diag(s) @ vt``.

    ``u`` is m x m and ``vt`` is d x d; the singular values are returned in
    nonincreasing order and have length ``min(m, d)``.
    """
    a = as_matrix(a)
    if a.size == 0:
        raise ShapeError(f"cannot decompose an empty matrix of shape {a.shape}")
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(
            f"SVD did not converge for a {a.shape[0]}x{a.shape[1]} matrix"
        ) from exc
    return SvdResult(u, s, vt)


def rank_tolerance(singular_values: ArrayLike, m: int, d: int) -> float:
    s = np.asarray(singular_values, dtype=np.float64)
    if s.size == 0:
        return 0.0
    return max(m, d) * EPS * float(s[0])


def numerical_rank(singular_values: ArrayLike, m: int, d: int) -> int:
    """Count singular values above ``max(m, d) * eps * sigma_1``.

    The zero matrix has rank 0 since nothing is strictly above a zero
    threshold.
    """
    s = np.asarray(singular_values, dtype=np.float64)
    if s.size == 0:
        return 0
    return int(np.count_nonzero(s > rank_tolerance(s, m, d)))


def matrix_rank(a: ArrayLike) -> int:
    a = as_matrix(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return numerical_rank(s, *a.shape)


def kronecker(a: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    a = as_matrix(a, "A")
    b = as_matrix(b, "B")
    if a.size == 0 or b.size == 0:
        raise ShapeError(f"kronecker factors must be nonempty, got {a.shape} and {b.shape}")
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows * cols > MAX_ENTRIES:
        raise ShapeError(f"kronecker product of shape {rows}x{cols} is too large")
    return np.kron(a, b)


def pinv_solve(a: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    """Minimum-norm solution ``a^+ b`` with the shared rank cut-off."""
    a = as_matrix(a, "A")
    b = as_vector(b, "b")
    if a.shape[0] != b.shape[0]:
        raise ShapeError(f"A has {a.shape[0]} rows but b has length {b.shape[0]}")
    m, d = a.shape
    if a.size == 0:
        return np.zeros(d)
    u, s, vt = svd(a)
    r = numerical_rank(s, m, d)
    coef = (u[:, :r].T @ b) / s[:r]
    return vt[:r].T @ coef


def least_squares(a: ArrayLike, b: ArrayLike) -> tuple[NDArray[np.float64], float]:
    """Minimum-norm least-squares solution of ``a @ x = b``.

    Returns
    -------
    solution : ndarray
        ``pinv(a) @ b`` where singular values at or below the rank
        tolerance are treated as zero.
    residual_norm : float
        ``||a @ solution - b||_2``. Inconsistent systems are reported through
        this value rather than by raising.
    """
    a = as_matrix(a, "A")
    b = as_vector(b, "b")
    x = pinv_solve(a, b)
    return x, float(np.linalg.norm(a @ x - b))


def fix_row_signs(rows: NDArray[np.float64], cutoff: float = 1e-12) -> NDArray[np.float64]:
    """Flip rows so the first entry with magnitude above `cutoff` is positive."""
    out = rows.copy()
    for i, row in enumerate(out):
        big = np.flatnonzero(np.abs(row) > cutoff)
        if big.size and row[big[0]] < 0:
            out[i] = -row
    return out


def relative_frobenius(a: ArrayLike, b: ArrayLike) -> float:
    """``||a - b||_F / max(||b||_F, 1)``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1.0))
