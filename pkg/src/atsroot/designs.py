"""Design matrices and data generators for the three timing settings.

Setting A
    two groups of ``q``-dimensional observations, no group effect:
    ``(P_2 kron J_q) mu = 0``, ``d = 2q``.
Setting B
    three groups, equal mean vectors: ``(P_3 kron I_q) mu = 0``, ``d = 3q``.
Setting C
    trace of a ``p x p`` covariance matrix: ``tr(V) = gamma`` written on
    ``vech(V)``, ``d = p(p+1)/2``.

``vech`` stacks the upper triangle row by row,
``(v11, ..., v1p, v22, ..., v2p, ..., vpp)``; for a symmetric matrix this is
the same vector as the lower triangle read column by column.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .linalg import as_matrix, as_vector, kronecker
from .reduction import Hypothesis

SETTINGS = ("A", "B", "C")

# name recorded in benchmark output
GENERATOR = "numpy PCG64"


@dataclass(frozen=True)
class SettingSpec:
    label: str
    size: int
    gamma: float = 1.0

    def __post_init__(self):
        if self.label not in SETTINGS:
            raise ValueError(f"unknown setting {self.label!r}; expected one of {SETTINGS}")
        if self.size < 2:
            raise ValueError(f"setting {self.label} needs size >= 2, got {self.size}")

    @property
    def d(self) -> int:
        q = self.size
        return {"A": 2 * q, "B": 3 * q, "C": q * (q + 1) // 2}[self.label]

    @property
    def size_name(self) -> str:
        return "p" if self.label == "C" else "q"


def centering(d: int) -> NDArray[np.float64]:
    """``P_d = I_d - J_d / d``."""
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    return np.eye(d) - np.full((d, d), 1.0 / d)


def vech(v: ArrayLike) -> NDArray[np.float64]:
    v = as_matrix(v, "V")
    p = v.shape[0]
    if v.shape != (p, p):
        raise ValueError(f"vech needs a square matrix, got {v.shape}")
    if np.abs(v - v.T).max(initial=0.0) > 1e-10 * max(1.0, np.abs(v).max(initial=0.0)):
        raise ValueError("vech needs a symmetric matrix")
    return v[np.triu_indices(p)]


def unvech(w: ArrayLike, p: int) -> NDArray[np.float64]:
    w = as_vector(w, "w")
    if w.shape[0] != p * (p + 1) // 2:
        raise ValueError(f"vector of length {w.shape[0]} is not vech of a {p}x{p} matrix")
    v = np.zeros((p, p))
    v[np.triu_indices(p)] = w
    return v + np.triu(v, 1).T


def trace_selector(p: int) -> NDArray[np.float64]:
    """``h_p``: ones at the vech positions of the diagonal, so ``h_p @ vech(V) = tr(V)``."""
    h = np.zeros(p * (p + 1) // 2)
    # diagonal (i, i) sits after the rows 0..i-1 of lengths p, p-1, ...
    pos = [i * p - i * (i - 1) // 2 for i in range(p)]
    h[pos] = 1.0
    return h


def setting_hypothesis(spec: SettingSpec, literal_offset: bool = False) -> Hypothesis:
    """Full-size hypothesis for a setting.

    For C the matrix is ``h_p h_p^T`` and the offset ``gamma * h_p``, which
    makes ``H theta = y`` equivalent to ``h_p^T theta = gamma``. With
    ``literal_offset=True`` the offset is ``gamma * 1_d`` instead; that
    system has no solution for ``p >= 2`` because ``1_d`` is not a multiple
    of ``h_p``, so it cannot be reduced.
    """
    q = spec.size
    if spec.label == "A":
        h = kronecker(centering(2), np.ones((q, q)))
        return Hypothesis(h, np.zeros(2 * q))
    if spec.label == "B":
        h = kronecker(centering(3), np.eye(q))
        return Hypothesis(h, np.zeros(3 * q))
    sel = trace_selector(q)
    h = np.outer(sel, sel)
    y = spec.gamma * (np.ones(spec.d) if literal_offset else sel)
    return Hypothesis(h, y)


def sample_compound_symmetry(
    d: int, n: int, mean: ArrayLike | None = None, rng_seed=None
) -> NDArray[np.float64]:
    """Draw ``n`` rows from ``N_d(mean, I_d + 1_d 1_d^T)``.

    Each row is ``mean + z0 * 1_d + z`` with scalar ``z0`` and vector ``z``
    independent standard normal, which has exactly that covariance.
    `rng_seed` is anything :func:`numpy.random.default_rng` accepts.
    """
    if d < 1 or n < 1:
        raise ValueError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
    rng = np.random.default_rng(rng_seed)
    mu = np.zeros(d) if mean is None else as_vector(mean, "mean")
    if mu.shape[0] != d:
        raise ValueError(f"mean has length {mu.shape[0]}, expected {d}")
    z0 = rng.standard_normal((n, 1))
    z = rng.standard_normal((n, d))
    return mu + z0 + z


def sample_covariance(x: ArrayLike) -> NDArray[np.float64]:
    """Unbiased sample covariance of the rows of `x`."""
    x = as_matrix(x, "X")
    if x.shape[0] < 2:
        raise ValueError(f"need at least 2 rows, got {x.shape[0]}")
    c = x - x.mean(axis=0)
    s = c.T @ c / (x.shape[0] - 1)
    return 0.5 * (s + s.T)


def setting_statistics(spec: SettingSpec, reps: int, n: int = 20, rng_seed=None) -> NDArray[np.float64]:
    """``reps`` statistic vectors of length ``spec.d`` for timing runs.

    A and B: ``sqrt(n) * mean`` of ``n`` compound-symmetry draws with mean
    zero, which is again ``N_d(0, V_d)`` so a single draw is used directly.
    C: ``vech`` of the sample covariance of ``n`` draws from
    ``N_p(1_p, V_p)``.
    """
    rng = np.random.default_rng(rng_seed)
    if spec.label in ("A", "B"):
        return sample_compound_symmetry(spec.d, reps, rng_seed=rng)
    p = spec.size
    iu = np.triu_indices(p)
    out = np.empty((reps, spec.d))
    for k in range(reps):
        draws = sample_compound_symmetry(p, n, np.ones(p), rng_seed=rng)
        out[k] = sample_covariance(draws)[iu]
    return out
