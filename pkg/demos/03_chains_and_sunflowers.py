"""
Reduction chains and sunflowers
===============================

Minimalise an intersecting family level by level, then look for sunflowers.
"""

from spreadlab import SetFamily, k_subsets
from spreadlab.approximation import build_chain, check_chain_properties, reduce_to_minimal
from spreadlab.family import elements_of
from spreadlab.probabilistic import find_sunflower, sunflower_thresholds

# a 1-intersecting family of small sets
S = SetFamily.from_sets(6, [[1, 2], [1, 3], [1, 2, 4], [2, 3], [1, 3, 5]])
T = reduce_to_minimal(S, 1)
print("minimal reduction:", T.to_sets())

A = k_subsets(6, 3)
chain = build_chain(S, A, 1, 3)
for i, (Ti, Wi) in enumerate(chain.levels):
    print(f"T_{i} = {Ti.to_sets()}  W_{i} = {Wi.to_sets()}")
ver = check_chain_properties(chain, A)
print("sizes", ver.sizes.ok, "coverage", ver.coverage.ok, "sunflower-free", ver.sunflower_free.ok)

# nine 2-sets always contain a 3-sunflower (k! (l-1)^k = 8)
print("thresholds for k=2, l=3:", sunflower_thresholds(2, 3))
F = SetFamily.from_sets(8, [[1, 2], [2, 3], [3, 4], [4, 5], [5, 6], [6, 7], [7, 8], [1, 8], [1, 5]])
flower = find_sunflower(F, 3)
print("petals:", [F.to_sets()[i] for i in flower.petals], "core:", [e + 1 for e in elements_of(flower.core)])
