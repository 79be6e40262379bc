"""Compact hypothesis matrices for Anova-type statistics.

Any hypothesis ``H theta = y`` with ``H`` of rank ``r`` can be rewritten with
an ``r``-row matrix ``L`` (a compact root of ``H^T H``) that gives the same
ATS, ATS_s and ATS_F values for every input. This package builds such roots,
checks whether two formulations give identical statistics, evaluates the
statistics, and times the saving.
"""

from .forms import AtsContext, ats, ats_f, ats_s, batch_eval
from .linalg import kronecker, least_squares, numerical_rank, svd
from .reduction import (
    EmptySolutionSetError,
    EquivalenceReport,
    Hypothesis,
    ReducedHypothesis,
    canonical_projection,
    canonical_reduce,
    check_equivalence,
    compact_root,
    compact_root_of_hypothesis_matrix,
    kronecker_reduce,
    reduce,
    reduce_homogeneous,
    reduce_unscaled,
    same_solution_set,
)

__version__ = "0.1.0"

__all__ = [
    "AtsContext",
    "EmptySolutionSetError",
    "EquivalenceReport",
    "Hypothesis",
    "ReducedHypothesis",
    "ats",
    "ats_f",
    "ats_s",
    "batch_eval",
    "canonical_projection",
    "canonical_reduce",
    "check_equivalence",
    "compact_root",
    "compact_root_of_hypothesis_matrix",
    "kronecker",
    "kronecker_reduce",
    "least_squares",
    "numerical_rank",
    "reduce",
    "reduce_homogeneous",
    "reduce_unscaled",
    "same_solution_set",
    "svd",
]
