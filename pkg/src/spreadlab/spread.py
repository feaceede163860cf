"""Spreadness, homogeneity and regularity of set families.

All threshold comparisons are done in exact rational arithmetic: float
parameters such as ``tau = 1.5`` are converted with ``Fraction(tau)``, which
is exact for binary floats, so boundary cases (equality) are decided
correctly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from math import comb

from ._kernels import UniformLinks, max_degree_by_size, subset_count_table
from .family import FamilyError, SetFamily, elements_of, lex_key, link, lower_shadow, popcount


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration hit its work budget before finishing.

    ``partial`` carries whatever was computed up to that point.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float) and not math.isfinite(x):
        raise ValueError(f"non-finite parameter {x}")
    return Fraction(x)


@total_ordering
@dataclass(frozen=True)
class RationalRoot:
    """The positive real ``base ** (1 / exponent)`` kept exactly."""

    base: Fraction
    exponent: int

    def __float__(self) -> float:
        return float(self.base) ** (1.0 / self.exponent)

    def _cmp_value(self, other) -> tuple[Fraction, Fraction]:
        # a^(1/s) vs b^(1/t)  <=>  a^t vs b^s
        if isinstance(other, RationalRoot):
            return self.base ** other.exponent, other.base ** self.exponent
        return self.base, as_fraction(other) ** self.exponent

    def __eq__(self, other):
        if not isinstance(other, (RationalRoot, int, float, Fraction)):
            return NotImplemented
        a, b = self._cmp_value(other)
        return a == b

    def __lt__(self, other):
        a, b = self._cmp_value(other)
        return a < b

    def __hash__(self):
        return hash(float(self))

    def __str__(self) -> str:
        if self.exponent == 1:
            return str(self.base)
        base = str(self.base) if self.base.denominator == 1 else f"({self.base})"
        return f"{base}^(1/{self.exponent})"

    def to_json(self) -> dict:
        return {
            "base": {"num": self.base.numerator, "den": self.base.denominator},
            "exponent": self.exponent,
            "approx": float(self),
        }


@dataclass(frozen=True)
class SpreadReport:
    """Spread radius of a family with the set that attains it.

    ``radius`` is ``None`` when no nonempty set lies in a member, in which
    case the family is r-spread for every r.
    """

    radius: RationalRoot | None
    witness: int | None
    per_size_min: dict[int, RationalRoot] = field(default_factory=dict)

    @property
    def radius_float(self) -> float:
        return math.inf if self.radius is None else float(self.radius)

    def is_r_spread(self, r) -> bool:
        return self.radius is None or self.radius >= as_fraction(r)


def spread_radius(F: SetFamily, max_size: int | None = None) -> SpreadReport:
    """Largest r with ``|F(X)| / |F| <= r^(-|X|)`` for every nonempty X.

    Scans every subset of a member up to ``max_size`` elements (default: the
    largest member size); any other X has an empty link and does not
    constrain r.  Ties go to the smaller |X|, then the lexicographically
    least X.
    """
    if not len(F):
        raise FamilyError("spread radius of an empty family is undefined")
    total = len(F)
    per_size: dict[int, RationalRoot] = {}
    best: RationalRoot | None = None
    witness = None
    for s, (count, x) in sorted(max_degree_by_size(F, max_size).items()):
        value = RationalRoot(Fraction(total, count), s)
        per_size[s] = value
        if best is None or value < best:
            best, witness = value, x
    return SpreadReport(best, witness, per_size)


def is_r_spread(F: SetFamily, r, max_size: int | None = None) -> bool:
    return spread_radius(F, max_size).is_r_spread(r)


def _violates(count_f: int, total_f: int, count_a: int, total_a: int, tau: Fraction, s: int) -> bool:
    # |F(S)| / |F| > tau^s |A(S)| / |A|, cleared of denominators
    num, den = tau.numerator, tau.denominator
    return count_f * total_a * den ** s > num ** s * count_a * total_f


def is_tau_homogeneous(F: SetFamily, tau) -> tuple[bool, int | None]:
    """Check ``|F(A)| <= tau^a C(n-a, k-a) / C(n, k) |F|`` for all A with ``|A| <= k``.

    Returns ``(ok, witness)`` with the lexicographically least violator.
    """
    k = F.uniform_k
    if k is None:
        if len(F):
            raise FamilyError("tau-homogeneity needs a uniform family")
        return True, None
    tau = as_fraction(tau)
    n = F.n
    table = subset_count_table(F)
    total_a = comb(n, k)
    for S in sorted(table, key=lex_key):
        a = popcount(S)
        if _violates(table[S], len(F), comb(n - a, k - a), total_a, tau, a):
            return False, S
    return True, None


def is_rel_homogeneous(F: SetFamily, A: SetFamily, tau, *, ambient_counts: dict[int, int] | None = None):
    """Check that F is tau-homogeneous relative to the ambient family A.

    Only sets S lying in a member of F are tested; for any other S the
    left-hand side is zero.  ``ambient_counts`` may pass a precomputed
    :func:`subset_count_table` of A covering those sets.
    """
    if not F.issubfamily(A):
        raise FamilyError("F must be a subfamily of the ambient family")
    if not len(F):
        return True, None
    tau = as_fraction(tau)
    table = subset_count_table(F)
    if ambient_counts is None:
        ambient_counts = subset_count_table(A, F.max_size)
    for S in sorted(table, key=lex_key):
        if _violates(table[S], len(F), ambient_counts[S], len(A), tau, popcount(S)):
            return False, S
    return True, None


def is_rq_spread(A: SetFamily, r, q: int) -> tuple[bool, tuple[int, int] | None]:
    """Every link ``A(S)`` with ``|S| <= q`` is r-spread.

    On failure the witness is ``(S, X)``: the lexicographically least S whose
    link fails, and the set X (disjoint from S) attaining that link's radius.
    """
    r = as_fraction(r)
    if q < 0:
        raise ValueError("q must be nonnegative")
    if not len(A):
        return True, None
    table = subset_count_table(A, q)
    fast = UniformLinks(A) if A.uniform_k is not None and A.n <= 64 else None
    num, den = r.numerator, r.denominator
    for S in sorted(table, key=lambda m: (popcount(m), lex_key(m))):
        if fast is not None:
            size, degrees = fast.link_max_degrees(S)
            # r-spread iff |L| den^x >= num^x max|L(X)| at every size x
            if all(size * den ** x >= num ** x * c for x, (c, _) in degrees.items()):
                continue
        report = spread_radius(link(A, S))
        if not report.is_r_spread(r):
            return False, (S, report.witness)
    return True, None


# -- (t, q, eps, theta)-regularity ------------------------------------------------


@dataclass
class RegularityReport:
    """Outcome of an exhaustive regularity check.

    ``measured_epsilon`` is the smallest eps for which both conditions hold
    at the requested theta; ``measured_theta`` the largest theta for which
    the concentration condition holds at the requested eps.
    """

    ok: bool
    failing_condition: str | None = None  # "shadow_deficit" | "concentration"
    failing_S: int | None = None
    failing_l: int | None = None
    measured_epsilon: float = 0.0
    measured_theta: float = math.inf
    mean_set_size: float = 0.0
    checked: int = 0
    complete: bool = True


def regularity_check(A: SetFamily, t: int, q: int, eps, theta, budget: int = 10**7) -> RegularityReport:
    """Exhaustively test the two regularity conditions for a uniform family A.

    For every S in the lower shadows of A up to size q and every l <= t:

    (i)  ``|shadow_l(A(S))| >= (1 - eps) |shadow_l(A)|``;
    (ii) for H uniform over ``shadow_l(A(S))``, the fraction of H with
         ``|A(S ∪ H)| >= theta * mean`` is at least ``1 - eps``.

    ``budget`` bounds the number of (S, H) evaluations; running out raises
    :class:`BudgetExceeded` with the partial report attached.
    """
    eps, theta = as_fraction(eps), as_fraction(theta)
    if not (0 < eps <= 1) or not (0 < theta <= 1):
        raise ValueError("need eps in (0, 1] and theta in (0, 1]")
    if t < 0 or q < 0:
        raise ValueError("t and q must be nonnegative")
    k = A.uniform_k
    if k is None:
        raise FamilyError("regularity is defined for nonempty uniform families")

    report = RegularityReport(ok=True, mean_set_size=float(k))
    base_shadow = {l: len(lower_shadow(A, l)) for l in range(t + 1)}
    worst_eps = Fraction(0)
    worst_theta: Fraction | None = None

    def fail(kind, S, l):
        if report.ok:
            report.ok = False
            report.failing_condition, report.failing_S, report.failing_l = kind, S, l

    shadows = subset_count_table(A, q)
    for S in sorted(shadows, key=lambda m: (popcount(m), lex_key(m))):
        L = link(A, S)
        link_counts = subset_count_table(L, t)
        for l in range(t + 1):
            hs = [c for H, c in link_counts.items() if popcount(H) == l]
            report.checked += len(hs)
            if report.checked > budget:
                report.complete = False
                report.measured_epsilon = float(worst_eps)
                report.measured_theta = math.inf if worst_theta is None else float(worst_theta)
                raise BudgetExceeded(f"regularity budget of {budget} evaluations exhausted", report)
            # (i) shadow richness
            deficit = 1 - Fraction(len(hs), base_shadow[l]) if base_shadow[l] else Fraction(0)
            worst_eps = max(worst_eps, deficit)
            if len(hs) < (1 - eps) * base_shadow[l]:
                fail("shadow_deficit", S, l)
            if not hs:
                continue
            # (ii) concentration: c * N >= theta * sum(c)
            total = sum(hs)
            size = len(hs)
            passing = sum(1 for c in hs if c * size >= theta * total)
            worst_eps = max(worst_eps, Fraction(size - passing, size))
            if passing < (1 - eps) * size:
                fail("concentration", S, l)
            need = math.ceil((1 - eps) * size)
            if need > 0:
                ranked = sorted(hs, reverse=True)
                th = Fraction(ranked[need - 1] * size, total)
                worst_theta = th if worst_theta is None else min(worst_theta, th)
    report.measured_epsilon = float(worst_eps)
    report.measured_theta = math.inf if worst_theta is None else float(worst_theta)
    return report


def observation_spread_bound(n: int, k: int, tau) -> Fraction:
    """Spread radius guaranteed for a tau-homogeneous k-uniform family on [n]: ``n / (tau k)``."""
    return Fraction(n) / (as_fraction(tau) * k)


def witness_elements(mask: int | None) -> list[int] | None:
    """1-indexed elements of a witness mask, for display."""
    return None if mask is None else [e + 1 for e in elements_of(mask)]
