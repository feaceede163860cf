"""
Spread radius and homogeneity
=============================

How spread are a few standard families, and when does homogeneity buy spreadness?
"""

from fractions import Fraction

from spreadlab import fano_plane, k_subsets, spread_radius, star
from spreadlab.spread import is_tau_homogeneous, observation_spread_bound

# all 3-subsets of [9]: the worst link is a single point, giving radius n/k
A = k_subsets(9, 3)
rep = spread_radius(A)
print("([9] choose 3) radius:", rep.radius, "witness:", rep.witness)

# the Fano plane is far less spread: each pair of points lies on one line
fano = spread_radius(fano_plane())
print("Fano radius:", fano.radius, "~", round(fano.radius_float, 4))
for size, value in sorted(fano.per_size_min.items()):
    print(f"  best root at |X|={size}: {value}")

# a star is concentrated at its centre, so it is only homogeneous for a large tau
F = star(A, 0b1)
for tau in (Fraction(3, 2), Fraction(3)):
    ok, bad = is_tau_homogeneous(F, tau)
    print(f"star at tau={tau}: homogeneous={ok} witness={bad}")

# homogeneity guarantees radius n / (tau k)
tau = Fraction(3)
print("guaranteed:", observation_spread_bound(9, 3, tau), "actual:", spread_radius(F).radius)
