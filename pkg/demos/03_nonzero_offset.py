"""
Reducing a hypothesis with a nonzero offset
===========================================

For H x = y with y != 0 the plain ATS can only be matched up to a constant
shift. After rescaling, the standardized and F-type statistics are matched
exactly.
"""

import numpy as np

from atsroot import AtsContext
from atsroot.reduction import Hypothesis, check_equivalence, reduce, reduce_unscaled

rng = np.random.default_rng(7)
h = rng.standard_normal((9, 2)) @ rng.standard_normal((2, 5))
y = h @ rng.standard_normal(5)  # consistent by construction
hyp = Hypothesis(h, y)

# The unscaled pair works for any offset. With an offset that H cannot
# reach, the plain statistic differs by the same amount at every x.
y_off = y + rng.standard_normal(9)
base = reduce_unscaled(Hypothesis(h, y_off))
print("unscaled rows:", base.ell, " shift:", base.shift_delta)
for x in rng.standard_normal((3, 5)):
    full = AtsContext(h, y_off).ats(x)
    small = AtsContext(base.L, base.y_tilde).ats(x)
    print(f"  ATS(H) - ATS(L) = {full - small:+.6f}")

red = reduce(hyp)
print("scale a:", red.scale_a)

sigma = np.cov(rng.standard_normal((40, 5)), rowvar=False)
x = rng.standard_normal(5)
for variant in ("ats_s", "ats_f"):
    a = AtsContext(h, y, sigma).evaluate(x, variant)
    b = AtsContext(red.L, red.y_tilde, sigma).evaluate(x, variant)
    print(f"{variant}: {a:.12g} vs {b:.12g}")

print(check_equivalence(hyp, red.as_hypothesis()).as_dict())

# An offset outside the column space of H describes no parameter at all.
try:
    reduce(Hypothesis(np.ones((2, 1)), np.array([1.0, -1.0])))
except ValueError as err:
    print("error:", err)
