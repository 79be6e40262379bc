"""
Same hypothesis, different statistic
====================================

Two contrast matrices can describe the very same null hypothesis while
producing different Anova-type statistics. Here both matrices say
"all three means are equal".
"""

import numpy as np

from atsroot import AtsContext
from atsroot.reduction import Hypothesis, check_equivalence

# all pairwise differences, and a chain of neighbouring differences
h1 = np.array([[1.0, -1.0, 0.0], [1.0, 0.0, -1.0], [0.0, 1.0, -1.0]])
h2 = np.array([[1.0, -1.0, 0.0], [0.0, 1.0, -1.0]])

x = np.array([1.0, 2.0, 3.0])
sigma = np.eye(3)

for name, h in (("H1", h1), ("H2", h2)):
    ctx = AtsContext(h, None, sigma)
    print(f"{name}: ATS = {ctx.ats(x):g}, standardized = {ctx.ats_s(x):g}, F-type = {ctx.ats_f(x):.4g}")

# The checker separates "same null hypothesis" from "same statistic".
report = check_equivalence(Hypothesis.homogeneous(h1), Hypothesis.homogeneous(h2))
print("same hypothesis:", report.same_hypothesis)
print("Gram matrices proportional:", report.same_gram)

# What matters is H^T H, and the two differ beyond a scalar factor.
print(h1.T @ h1)
print(h2.T @ h2)
