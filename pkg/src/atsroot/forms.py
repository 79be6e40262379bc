"""Anova-type quadratic forms.

For a statistic vector ``x``, hypothesis matrix ``H`` and offset ``y``::

    ats(x)   = ||H x - y||^2
    ats_s(x) = ats(x) / tr(M)                 with M = H Sigma H^T
    ats_f(x) = ats_s(x) * tr(M)^2 / tr(M @ M)

The free functions recompute the trace terms on every call. :class:`AtsContext`
validates ``Sigma`` once, caches the traces and is the thing to use when the
same hypothesis is evaluated many times.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .linalg import ShapeError, as_matrix, as_vector

VARIANTS = ("ats", "ats_s", "ats_f")


class DegenerateStandardizationError(ValueError):
    """tr(H Sigma H^T) or tr((H Sigma H^T)^2) is numerically zero."""


def _check_conform(h: NDArray, y: NDArray, x: NDArray | None = None) -> None:
    if h.shape[0] != y.shape[0]:
        raise ShapeError(f"H has shape {h.shape} but y has shape {y.shape}")
    if x is not None and h.shape[1] != x.shape[0]:
        raise ShapeError(f"H has shape {h.shape} but x has shape {x.shape}")


def ats(x: ArrayLike, h: ArrayLike, y: ArrayLike) -> float:
    x = as_vector(x, "x")
    h = as_matrix(h, "H")
    y = as_vector(y, "y")
    _check_conform(h, y, x)
    r = h @ x - y
    return float(r @ r)


def trace_threshold(h: NDArray, sigma: NDArray) -> float:
    """Degenerate-standardization cut-off for ``tr(H Sigma H^T)``."""
    d = h.shape[1]
    max_sigma = float(np.max(np.abs(sigma))) if sigma.size else 0.0
    max_row = float(np.max(np.linalg.norm(h, axis=1))) if h.size else 0.0
    return 1e-12 * d * max_sigma * max_row**2


def trace_terms(h: NDArray, sigma: NDArray) -> tuple[float, float]:
    """Return ``(tr(M), tr(M @ M))`` for ``M = H Sigma H^T``."""
    m = h @ sigma @ h.T
    return float(np.trace(m)), float(np.sum(m * m.T))


def _check_sigma(sigma: NDArray, d: int) -> None:
    if sigma.shape != (d, d):
        raise ShapeError(f"Sigma must be {d}x{d}, got {sigma.shape}")
    scale = max(float(np.linalg.norm(sigma)), np.finfo(float).tiny)
    if np.linalg.norm(sigma - sigma.T) > 1e-10 * scale:
        raise ValueError("Sigma is not symmetric")
    eig = np.linalg.eigvalsh(0.5 * (sigma + sigma.T))
    if eig.size and eig[0] < -1e-10 * max(eig[-1], 0.0):
        raise ValueError(f"Sigma is not positive semidefinite (eigenvalue {eig[0]:.3g})")


class AtsContext:
    """A hypothesis ``H theta = y`` with an optional covariance ``Sigma``.

    ``Sigma`` is required for the standardized variants. The trace terms of
    ``M = H Sigma H^T`` are computed once at construction.
    """

    def __init__(self, h: ArrayLike, y: ArrayLike | None = None, sigma: ArrayLike | None = None):
        self.h = as_matrix(h, "H")
        self.y = np.zeros(self.h.shape[0]) if y is None else as_vector(y, "y")
        _check_conform(self.h, self.y)
        self.sigma = None
        self.trace = self.trace_sq = None
        if sigma is not None:
            self.sigma = as_matrix(sigma, "Sigma")
            _check_sigma(self.sigma, self.d)
            self.trace, self.trace_sq = trace_terms(self.h, self.sigma)
            self._threshold = trace_threshold(self.h, self.sigma)

    @property
    def m(self) -> int:
        return self.h.shape[0]

    @property
    def d(self) -> int:
        return self.h.shape[1]

    def _require_trace(self, squared: bool = False) -> None:
        if self.sigma is None:
            raise ValueError("Sigma is required for the standardized variants")
        if not self.trace > self._threshold:
            raise DegenerateStandardizationError(
                f"tr(H Sigma H^T) = {self.trace:.3g} is not above {self._threshold:.3g}"
            )
        if squared and not self.trace_sq > self._threshold**2:
            raise DegenerateStandardizationError(
                f"tr((H Sigma H^T)^2) = {self.trace_sq:.3g} is numerically zero"
            )

    def _quad(self, x: NDArray) -> float:
        r = self.h @ x - self.y
        return float(r @ r)

    def _vector(self, x: ArrayLike) -> NDArray:
        x = as_vector(x, "x")
        if x.shape[0] != self.d:
            raise ShapeError(f"H has shape {self.h.shape} but x has shape {x.shape}")
        return x

    def ats(self, x: ArrayLike) -> float:
        return self._quad(self._vector(x))

    def ats_s(self, x: ArrayLike) -> float:
        self._require_trace()
        return self._quad(self._vector(x)) / self.trace

    def ats_f(self, x: ArrayLike) -> float:
        self._require_trace(squared=True)
        return self._quad(self._vector(x)) / self.trace * (self.trace**2 / self.trace_sq)

    def evaluate(self, x: ArrayLike, variant: str = "ats") -> float:
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
        return getattr(self, variant)(x)


def ats_s(x: ArrayLike, h: ArrayLike, y: ArrayLike, sigma: ArrayLike) -> float:
    return AtsContext(h, y, sigma).ats_s(x)


def ats_f(x: ArrayLike, h: ArrayLike, y: ArrayLike, sigma: ArrayLike) -> float:
    return AtsContext(h, y, sigma).ats_f(x)


def batch_eval(xs: Iterable[ArrayLike], ctx: AtsContext, variant: str = "ats") -> list[float]:
    """Evaluate `variant` at every vector in `xs`.

    Each element goes through the same code path as a single
    :meth:`AtsContext.evaluate` call, so results are bitwise identical to a
    loop of single evaluations.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    fn = getattr(ctx, variant)
    return [fn(x) for x in xs]
