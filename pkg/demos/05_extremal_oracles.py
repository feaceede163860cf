"""
Exact extremal numbers at desk scale
====================================

Largest intersecting families of sets and permutations, found by clique search.
"""

from math import factorial

from spreadlab import k_subsets, symmetric_group_family
from spreadlab.oracle import (
    count_intersection_classes,
    derangement_count,
    hilton_milner_perm_family,
    max_regular_intersecting,
    max_t_intersecting,
)

for n, k in [(5, 2), (7, 3), (8, 3)]:
    res = max_t_intersecting(k_subsets(n, k), 1)
    print(f"([{n}] choose {k}): largest intersecting family has {res.optimum} members")

for n in (3, 4, 5):
    res = max_t_intersecting(symmetric_group_family(n), 1, threads=4)
    print(f"S_{n}: {res.optimum} (compare (n-1)! = {factorial(n - 1)}), {res.nodes_explored} nodes")

# the Fano plane is the largest regular intersecting family of 3-sets on 7 points
print("regular (7,3):", max_regular_intersecting(7, 3).optimum)

P = hilton_milner_perm_family(5, 2)
print("non-trivial 2-intersecting family in S_5 of size", len(P))

print("derangements:", [derangement_count(m) for m in range(8)])
res = count_intersection_classes(6, 1, (2, 1, 3, 4, 5, 6))
print("agreement classes:", res.counts, "bound", res.bound, "holds", res.bound_holds)
