"""
Canonical roots and Kronecker designs
=====================================

Two matrices with the same row space share the projector onto that space,
so reducing the projector gives a root that does not depend on which
matrix we started from. Factorial designs built as Kronecker products can
be reduced factor by factor.
"""

import numpy as np

from atsroot import kronecker
from atsroot.designs import centering
from atsroot.reduction import canonical_reduce, kronecker_reduce, reduce_homogeneous

rng = np.random.default_rng(3)
h = rng.standard_normal((4, 6))
q = rng.standard_normal((4, 4))

a, b = canonical_reduce(h), canonical_reduce(q @ h)
print("byte-identical:", a.tobytes() == b.tobytes())

# whole-plot contrast P_3, identity within
w, s = centering(3), np.eye(4)
factored = kronecker_reduce(w, s)
direct = reduce_homogeneous(kronecker(w, s))
print("rows:", factored.shape[0], direct.shape[0])
print("Gram difference:", np.abs(factored.T @ factored - direct.T @ direct).max())
