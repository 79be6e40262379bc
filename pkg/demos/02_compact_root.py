"""
Compact roots and their rotations
=================================

Any L with L^T L = H^T H gives the same ATS as H. The root with rank(H)
rows is the smallest such matrix, but it is only unique up to an
orthogonal rotation of its rows.
"""

import numpy as np

from atsroot import ats
from atsroot.reduction import compact_root, reduce_homogeneous

target = np.diag([1.0, 1.0, 0.0])

# a one-parameter family of 2x3 roots of the same Gram matrix
for g in np.linspace(0, 2 * np.pi, 5):
    lg = np.array([[np.sin(g), -np.cos(g), 0.0], [np.cos(g), np.sin(g), 0.0]])
    print(f"gamma = {g:4.2f}  max |L^T L - target| = {np.abs(lg.T @ lg - target).max():.1e}")

# The library picks one member deterministically.
print(compact_root(target))

# A tall rank-deficient matrix shrinks to its rank.
rng = np.random.default_rng(1)
h = rng.standard_normal((12, 3)) @ rng.standard_normal((3, 8))
L = reduce_homogeneous(h)
print(f"{h.shape} -> {L.shape}")

x = rng.standard_normal(8)
print("ATS via H:", ats(x, h, np.zeros(12)))
print("ATS via L:", ats(x, L, np.zeros(L.shape[0])))
