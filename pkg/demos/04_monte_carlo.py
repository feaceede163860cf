"""
Checking the spread lemma by simulation
=======================================

A p-random set should contain some member of an r-spread family with high probability.
"""

from spreadlab import k_subsets
from spreadlab.probabilistic import RngSpec, containment_probability, spread_lemma_audit

rng = RngSpec(2024)

# 1024 singletons are 1024-spread; at p = 1/2 some point is hit almost surely
audit = spread_lemma_audit(k_subsets(1024, 1), m=2, delta=0.25, trials=100_000, rng=rng)
print(f"radius {audit.radius}, bound {audit.bound:.6f}, estimate {audit.estimate} +- {audit.stderr}")
print("passed:", audit.passed)

# pairs of [64] are 32-spread
audit = spread_lemma_audit(k_subsets(64, 2), m=3, delta=1 / 6, trials=50_000, rng=rng, threads=4)
print(f"pairs of [64]: bound {audit.bound}, vacuous {audit.vacuous}, estimate {audit.estimate:.4f}")

# estimates do not depend on the number of threads
F = k_subsets(10, 3)
print(containment_probability(F, 0.2, 20_000, rng, threads=1) == containment_probability(F, 0.2, 20_000, rng, threads=4))
