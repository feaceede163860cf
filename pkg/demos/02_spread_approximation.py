"""
Peeling a family into spread pieces
===================================

Run the approximation procedure on a star and on a random family, then verify it.
"""

import numpy as np

from spreadlab import k_subsets, spread_approximate, star, verify_approximation
from spreadlab.family import elements_of


def show(mask):
    return "{" + ",".join(str(e + 1) for e in elements_of(mask)) + "}"


A = k_subsets(12, 3)
F = star(A, 0b1)

# at tau = 5/2 the centre {1} is the only maximal dense set: one piece, nothing left over
res = spread_approximate(A, F, 2.5, 3)
print("tau=5/2:", [show(B) for B in res.S], "remainder", len(res.remainder))

# at tau = 2 the pairs {1,x} reach the threshold with equality and win
res = spread_approximate(A, F, 2, 3)
print("tau=2:", len(res.S), "selectors, first", [show(B) for B in res.S[:5]])
step = res.trace[0]
print(f"  step 0 picked {show(step.chosen)}: link {step.link_size} >= threshold {step.threshold}")

# random subfamilies: dense ones are already homogeneous (the empty selector wins),
# sparse ones with q = 3 get peeled into their own members
rng = np.random.default_rng(3)
for size, q in [(30, 2), (30, 3), (8, 3)]:
    G = A.with_members(rng.choice(A.members, size, replace=False).tolist())
    res = spread_approximate(A, G, 1.5, q)
    ver = verify_approximation(res, A, G, 1.5, q)
    print(f"random |F|={size}, q={q}: {len(res.S)} pieces, {len(res.remainder)} left, {res.stop_reason};",
          "coverage", ver.coverage.ok, "homogeneity", ver.homogeneity.ok, "remainder", ver.remainder_bound.ok)
