"""Compact roots and reduced hypotheses.

A *compact root* of a PSD matrix ``A`` of rank ``r`` is an ``r x d`` matrix
``L`` with ``L^T L = A``. Replacing a hypothesis matrix ``H`` by a compact root
of ``H^T H`` keeps the hypothesis and every Anova-type statistic while
shrinking the number of rows to ``rank(H)``.

Roots are not unique (any orthogonal ``Q`` gives ``Q L``). Rows produced here
carry a sign convention, the first entry of magnitude above ``1e-12`` is
positive, so output is reproducible for a fixed LAPACK backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .linalg import (
    ShapeError,
    as_matrix,
    as_vector,
    fix_row_signs,
    kronecker,
    least_squares,
    numerical_rank,
    pinv_solve,
    svd,
)

# binary grid used to snap projectors before taking their eigenbasis
PROJECTOR_GRID = 2.0**-26

EQUIV_TOL = 1e-9
SOLUTION_TOL = 1e-8


class DomainError(ValueError):
    """Input matrix is not symmetric positive semidefinite."""


class EmptySolutionSetError(ValueError):
    """The hypothesis ``H theta = y`` has no solution."""

    def __init__(self, detail: str = ""):
        msg = "empty solution set"
        super().__init__(f"{msg}: {detail}" if detail else msg)


@dataclass(frozen=True)
class Hypothesis:
    """The null hypothesis ``H theta = y``."""

    H: NDArray[np.float64]
    y: NDArray[np.float64]

    def __post_init__(self):
        h = as_matrix(self.H, "H")
        y = as_vector(self.y, "y")
        if h.shape[0] < 1 or h.shape[1] < 1:
            raise ShapeError(f"H must have at least one row and column, got {h.shape}")
        if h.shape[0] != y.shape[0]:
            raise ShapeError(f"H has {h.shape[0]} rows but y has length {y.shape[0]}")
        object.__setattr__(self, "H", h)
        object.__setattr__(self, "y", y)

    @classmethod
    def homogeneous(cls, h: ArrayLike) -> Hypothesis:
        h = as_matrix(h, "H")
        return cls(h, np.zeros(h.shape[0]))

    @property
    def m(self) -> int:
        return self.H.shape[0]

    @property
    def d(self) -> int:
        return self.H.shape[1]

    @property
    def rank(self) -> int:
        return _rank(self.H)

    def is_consistent(self) -> bool:
        """True when ``y`` lies in the column space of ``H``.

        Decided on the residual of projecting ``y`` onto that column space,
        relative to ``||y||``; a bare rank test on ``[H | y]`` misfires when
        ``||y||`` is large compared to the top singular value of ``H``.
        """
        ny = float(np.linalg.norm(self.y))
        if ny == 0.0:
            return True
        return self.consistency_residual() <= SOLUTION_TOL * ny

    def consistency_residual(self) -> float:
        u, s, _ = svd(self.H)
        r = numerical_rank(s, *self.H.shape)
        ur = u[:, :r]
        return float(np.linalg.norm(self.y - ur @ (ur.T @ self.y)))


@dataclass(frozen=True)
class ReducedHypothesis:
    """A hypothesis ``L theta = y_tilde`` derived from a source hypothesis.

    ``scale_a`` is the factor with ``scale_a * L^T L = H^T H`` against the
    source, ``shift_delta`` is ``||y_tilde_0||^2 - ||y||^2`` for the unscaled
    root pair.
    """

    L: NDArray[np.float64]
    y_tilde: NDArray[np.float64]
    scale_a: float = 1.0
    shift_delta: float = 0.0
    residuals: dict = field(default_factory=dict)

    @property
    def ell(self) -> int:
        return self.L.shape[0]

    def as_hypothesis(self) -> Hypothesis:
        return Hypothesis(self.L, self.y_tilde)


@dataclass
class EquivalenceReport:
    same_gram: bool
    witness_a: float | None
    same_cross: bool
    same_norm: bool
    ats_equal: bool
    ats_s_equal: bool
    ats_f_equal: bool
    ats_shifted_equal: bool
    shift_delta: float
    same_hypothesis: bool
    certificate_same_hypothesis: bool
    residuals: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "same_gram": self.same_gram,
            "witness_a": self.witness_a,
            "same_cross": self.same_cross,
            "same_norm": self.same_norm,
            "ats_equal": self.ats_equal,
            "ats_s_equal": self.ats_s_equal,
            "ats_f_equal": self.ats_f_equal,
            "ats_shifted_equal": self.ats_shifted_equal,
            "shift_delta": self.shift_delta,
            "same_hypothesis": self.same_hypothesis,
            "certificate_same_hypothesis": self.certificate_same_hypothesis,
            "residuals": dict(self.residuals),
        }


def _rank(a: NDArray) -> int:
    s = np.linalg.svd(a, compute_uv=False)
    return numerical_rank(s, *a.shape)


def compact_root(a: ArrayLike) -> NDArray[np.float64]:
    """Compact root of a symmetric positive semidefinite matrix.

    Rows are ``sqrt(lambda_i) * v_i^T`` for the eigenpairs above the rank
    tolerance, in decreasing eigenvalue order. A rank-0 input gives a
    ``0 x d`` matrix.

    Raises
    ------
    DomainError
        If `a` is asymmetric beyond ``1e-10`` relative Frobenius, or has an
        eigenvalue below ``-1e-10 * lambda_max``.
    """
    a = as_matrix(a, "A")
    d = a.shape[0]
    if a.shape != (d, d):
        raise ShapeError(f"compact_root needs a square matrix, got {a.shape}")
    norm = np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > 1e-10 * norm:
        raise DomainError("matrix is not symmetric")
    lam, vec = np.linalg.eigh(0.5 * (a + a.T))
    lam, vec = lam[::-1], vec[:, ::-1]
    top = max(lam[0], 0.0) if d else 0.0
    if d and lam[-1] < -1e-10 * top:
        raise DomainError(f"matrix is not positive semidefinite (eigenvalue {lam[-1]:.6g})")
    r = numerical_rank(np.clip(lam, 0.0, None), d, d)
    rows = np.sqrt(lam[:r])[:, None] * vec[:, :r].T
    return fix_row_signs(rows)


def compact_root_of_hypothesis_matrix(h: ArrayLike) -> NDArray[np.float64]:
    """Compact root of ``H^T H`` computed from the SVD of ``H`` itself.

    ``L = diag(s_1..s_r) @ vt[:r]``; avoids squaring the condition number.
    """
    h = as_matrix(h, "H")
    _, s, vt = svd(h)
    r = numerical_rank(s, *h.shape)
    return fix_row_signs(s[:r, None] * vt[:r])


def reduce_homogeneous(h: ArrayLike) -> NDArray[np.float64]:
    """Minimal-row matrix ``L`` for ``H theta = 0`` with ``L^T L = H^T H``."""
    return compact_root_of_hypothesis_matrix(h)


def reduce_unscaled(h: Hypothesis) -> ReducedHypothesis:
    """Compact root ``L0`` together with ``y0`` solving ``L0^T y0 = H^T y``.

    This pair exists for any ``y`` (consistent or not) and shifts the plain
    statistic by a constant: ``ats(x, H, y) = ats(x, L0, y0) - delta``.
    """
    l0 = compact_root_of_hypothesis_matrix(h.H)
    rhs = h.H.T @ h.y
    if l0.shape[0] == 0:
        y0, resid = np.zeros(0), float(np.linalg.norm(rhs))
    else:
        y0, resid = least_squares(l0.T, rhs)
    delta = float(y0 @ y0 - h.y @ h.y)
    return ReducedHypothesis(l0, y0, 1.0, delta, {"cross_residual": resid})


def reduce(h: Hypothesis) -> ReducedHypothesis:
    """Reduce a consistent hypothesis to ``rank(H)`` rows.

    Starts from :func:`reduce_unscaled` and rescales both ``L0`` and ``y0`` by
    ``||y|| / ||y0||`` so the norm condition for the standardized statistics
    holds. For consistent input that factor is one up to rounding.

    Raises
    ------
    EmptySolutionSetError
        If ``y`` is not in the column space of ``H``.
    """
    if not h.is_consistent():
        raise EmptySolutionSetError("rank([H | y]) exceeds rank(H)")
    base = reduce_unscaled(h)
    ny = float(np.linalg.norm(h.y))
    ny0 = float(np.linalg.norm(base.y_tilde))
    if ny == 0.0:
        return ReducedHypothesis(
            base.L, np.zeros(base.ell), 1.0, base.shift_delta, base.residuals
        )
    if ny0 == 0.0:
        raise EmptySolutionSetError("y is orthogonal to the column space of H")
    root_a = ny / ny0
    L = root_a * base.L
    y_tilde = root_a * base.y_tilde
    # witness for the returned pair: scale_a * L^T L = H^T H
    return ReducedHypothesis(L, y_tilde, 1.0 / root_a**2, base.shift_delta, base.residuals)


def canonical_projection(h: ArrayLike) -> NDArray[np.float64]:
    """Orthogonal projector onto the row space of ``H``.

    Equal to ``H^T (H H^T)^+ H``, computed as ``V_r V_r^T`` from the SVD.
    """
    h = as_matrix(h, "H")
    _, s, vt = svd(h)
    r = numerical_rank(s, *h.shape)
    v = vt[:r]
    p = v.T @ v
    return 0.5 * (p + p.T)


def canonical_reduce(h: ArrayLike) -> NDArray[np.float64]:
    """Hypothesis-matrix independent root for ``H theta = 0``.

    Any two matrices with the same row space give the same output bytes
    (for a fixed LAPACK backend). The projector is snapped to a ``2**-26``
    grid first so rounding noise from different starting matrices cannot
    leak into the eigenbasis; the rows returned are the orthonormal
    eigenvectors of the snapped projector, so ``L L^T = I`` and ``L^T L``
    matches the projector to about ``1e-8``.
    """
    p = canonical_projection(h)
    d = p.shape[0]
    snapped = np.round(p / PROJECTOR_GRID) * PROJECTOR_GRID
    snapped = np.triu(snapped) + np.triu(snapped, 1).T
    lam, vec = np.linalg.eigh(snapped)
    keep = lam > 0.5
    rows = vec[:, keep][:, ::-1].T
    if rows.shape[0] == 0:
        return np.zeros((0, d))
    return fix_row_signs(np.ascontiguousarray(rows))


def kronecker_reduce(h_w: ArrayLike, h_s: ArrayLike) -> NDArray[np.float64]:
    """Compact root of ``(H_W kron H_S)^T (H_W kron H_S)`` built from the factors."""
    return kronecker(reduce_homogeneous(h_w), reduce_homogeneous(h_s))


def _close(a: ArrayLike, b: ArrayLike, scale: float, tol: float = EQUIV_TOL) -> tuple[bool, float]:
    err = float(np.linalg.norm(np.asarray(a) - np.asarray(b)))
    return err <= tol * (1.0 + scale), err


def same_solution_set(h1: Hypothesis, h2: Hypothesis) -> bool:
    """Whether ``H1 theta = y1`` and ``H2 theta = y2`` have the same solutions."""
    if h1.d != h2.d:
        raise ShapeError(f"hypotheses live in different dimensions ({h1.d} vs {h2.d})")
    for h in (h1, h2):
        if not h.is_consistent():
            raise EmptySolutionSetError("cannot compare an inconsistent hypothesis")
    r1, r2 = h1.rank, h2.rank
    if not r1 == r2 == _rank(np.vstack([h1.H, h2.H])):
        return False
    t1 = pinv_solve(h1.H, h1.y)
    t2 = pinv_solve(h2.H, h2.y)
    ok12, _ = _close(h2.H @ t1, h2.y, float(np.linalg.norm(h2.y)), SOLUTION_TOL)
    ok21, _ = _close(h1.H @ t2, h1.y, float(np.linalg.norm(h1.y)), SOLUTION_TOL)
    return ok12 and ok21


def check_equivalence(h1: Hypothesis, h2: Hypothesis) -> EquivalenceReport:
    """Decide which Anova-type statistics coincide for two formulations.

    `h1` plays ``(H, y)`` and `h2` plays ``(L, y_tilde)``. The scale ``a`` is
    estimated as ``tr(H^T H) / tr(L^T L)`` and then checked against the full
    Gram matrices, cross products and offset norms.
    """
    if h1.d != h2.d:
        raise ShapeError(f"hypotheses live in different dimensions ({h1.d} vs {h2.d})")
    H, y, L, yt = h1.H, h1.y, h2.H, h2.y
    gram_h, gram_l = H.T @ H, L.T @ L
    cross_h, cross_l = H.T @ y, L.T @ yt
    tr_h, tr_l = float(np.trace(gram_h)), float(np.trace(gram_l))
    if tr_l == 0.0:
        a = 1.0 if tr_h == 0.0 else None
    else:
        a = tr_h / tr_l

    ny, nyt = float(np.linalg.norm(y)), float(np.linalg.norm(yt))
    gram_scale = float(np.linalg.norm(gram_h))
    cross_scale = float(np.linalg.norm(cross_h))
    residuals: dict[str, float] = {}
    if a is not None and a > 0:
        same_gram, residuals["gram"] = _close(a * gram_l, gram_h, gram_scale)
        same_cross, residuals["cross"] = _close(a * cross_l, cross_h, cross_scale)
        residuals["norm"] = abs(ny - math.sqrt(a) * nyt)
        same_norm = residuals["norm"] <= EQUIV_TOL * (1.0 + ny)
    else:
        same_gram = same_cross = same_norm = False

    # unscaled (a = 1) conditions for the plain statistic
    gram1, residuals["gram_unscaled"] = _close(gram_l, gram_h, gram_scale)
    cross1, residuals["cross_unscaled"] = _close(cross_l, cross_h, cross_scale)
    shifted = gram1 and cross1
    residuals["norm_unscaled"] = abs(ny - nyt)
    exact = shifted and residuals["norm_unscaled"] <= EQUIV_TOL * (1.0 + ny)

    ats_s_equal = same_gram and same_cross and same_norm
    try:
        same_hyp = same_solution_set(h1, h2)
    except EmptySolutionSetError:
        same_hyp = False

    return EquivalenceReport(
        same_gram=same_gram,
        witness_a=a,
        same_cross=same_cross,
        same_norm=same_norm,
        ats_equal=exact,
        ats_s_equal=ats_s_equal,
        ats_f_equal=ats_s_equal,
        ats_shifted_equal=shifted,
        shift_delta=float(nyt**2 - ny**2),
        same_hypothesis=same_hyp,
        certificate_same_hypothesis=same_gram and same_cross,
        residuals=residuals,
    )
