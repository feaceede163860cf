"""Iterative spread approximation and the minimal-reduction chain.

``spread_approximate`` peels a family F inside an ambient family A: at each
step it picks an inclusion-maximal set S whose link in the current family is
at least ``tau^|S|`` times denser than in A, removes every member containing
S, and repeats until the chosen set is larger than q or nothing is left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from ._kernels import subset_count_table
from .family import (
    FamilyError,
    SetFamily,
    contains_some,
    cover_number,
    elements_of,
    lex_key,
    link,
    popcount,
    t_intersection_violation,
)
from .probabilistic import find_sunflower
from .spread import as_fraction, is_rel_homogeneous

C0 = 2 ** 15


@dataclass(frozen=True)
class TraceStep:
    step: int
    family_size: int
    chosen: int
    link_size: int
    threshold: Fraction  # tau^|S| |A(S)| / |A| * |F^i|


@dataclass
class ApproximationResult:
    """Output of :func:`spread_approximate`.

    ``pieces[B]`` is the subfamily of F removed at the step that chose B
    (members still contain B).  ``stop_reason`` is ``"exhausted"``,
    ``"oversize"`` or ``"empty_selector"``; in the last case the remainder is
    whatever was left when no nonempty set met the threshold.
    """

    S: list[int]
    remainder: SetFamily
    pieces: dict[int, SetFamily]
    trace: list[TraceStep] = field(default_factory=list)
    stop_reason: str = "exhausted"

    @property
    def empty_selector(self) -> bool:
        return self.stop_reason == "empty_selector"

    def approximation_family(self) -> SetFamily:
        return self.remainder.with_members(self.S)


def _qualifies(count_f: int, total_f: int, count_a: int, total_a: int, tau: Fraction, s: int) -> bool:
    # |F^i(S)| >= tau^s |A(S)| / |A| * |F^i|
    num, den = tau.numerator, tau.denominator
    return count_f * total_a * den ** s >= num ** s * count_a * total_f


def _select(current: SetFamily, ambient_counts: dict[int, int], total_a: int, tau: Fraction):
    table = subset_count_table(current)
    qualifying = {
        S for S, c in table.items()
        if _qualifies(c, len(current), ambient_counts[S], total_a, tau, popcount(S))
    }
    dominated = set()
    for Z in qualifying:
        if Z in dominated:
            continue
        els = elements_of(Z)
        # every proper subset of a qualifying set is non-maximal
        stack = [Z]
        while stack:
            x = stack.pop()
            for e in els:
                bit = 1 << e
                if x & bit:
                    y = x ^ bit
                    if y not in dominated:
                        dominated.add(y)
                        stack.append(y)
    maximal = [S for S in qualifying if S not in dominated]
    chosen = min(maximal, key=lex_key)
    return chosen, table[chosen]


def spread_approximate(A: SetFamily, F: SetFamily, tau, q: int) -> ApproximationResult:
    """Run the peeling procedure on ``F ⊆ A`` with parameters ``tau > 1`` and ``q >= 0``.

    Only sets lying inside some member of the current family are candidates.
    Among inclusion-maximal qualifying sets the lexicographically least is
    chosen.  The empty set always qualifies; when it is the only maximal
    choice the procedure stops and leaves the current family as remainder.
    """
    tau = as_fraction(tau)
    if tau <= 1:
        raise ValueError("tau must exceed 1")
    if q < 0:
        raise ValueError("q must be nonnegative")
    if A.n != F.n or not F.issubfamily(A):
        raise FamilyError("F must be a subfamily of the ambient family")

    ambient_counts = subset_count_table(A, F.max_size)
    total_a = len(A)
    current = F
    S: list[int] = []
    pieces: dict[int, SetFamily] = {}
    trace: list[TraceStep] = []
    reason = "exhausted"
    step = 0
    while len(current):
        step += 1
        chosen, link_size = _select(current, ambient_counts, total_a, tau)
        s = popcount(chosen)
        threshold = tau ** s * Fraction(ambient_counts[chosen], total_a) * len(current)
        trace.append(TraceStep(step, len(current), chosen, link_size, threshold))
        if s > q:
            reason = "oversize"
            break
        if chosen == 0:
            reason = "empty_selector"
            break
        removed = [M for M in current.members if M & chosen == chosen]
        S.append(chosen)
        pieces[chosen] = current.with_members(removed)
        current = current.with_members(M for M in current.members if M & chosen != chosen)
    return ApproximationResult(S, current, pieces, trace, reason)


@dataclass
class Verdict:
    ok: bool | None
    witness: object = None
    note: str = ""


@dataclass
class ApproximationVerification:
    coverage: Verdict
    homogeneity: Verdict
    remainder_bound: Verdict
    sizes: Verdict

    @property
    def all_ok(self) -> bool:
        return all(v.ok is not False for v in (self.coverage, self.homogeneity, self.remainder_bound, self.sizes))


def verify_approximation(res: ApproximationResult, A: SetFamily, F: SetFamily, tau, q: int) -> ApproximationVerification:
    """Recheck the three guarantees of a spread approximation from scratch.

    (i) every member of F outside the remainder contains some chosen set;
    (ii) each piece, linked at its key, is tau-homogeneous relative to the
    ambient link; (iii) ``|remainder| <= tau^(-q-1) |A|``.  Under the
    empty-selector stop, a failing (iii) is reported with ``ok=None``.
    """
    tau = as_fraction(tau)
    remainder = set(res.remainder.members)

    sizes = Verdict(True)
    for B in res.S:
        if popcount(B) > q:
            sizes = Verdict(False, B, "chosen set larger than q")
            break

    coverage = Verdict(True)
    if not remainder <= F.member_set:
        coverage = Verdict(False, min(remainder - F.member_set), "remainder not inside F")
    else:
        for M in F.members:
            if M in remainder:
                continue
            if not any(M & B == B for B in res.S):
                coverage = Verdict(False, M, "member not covered by any chosen set")
                break

    homogeneity = Verdict(True)
    ambient_counts = subset_count_table(A, F.max_size)
    for B in res.S:
        piece = res.pieces.get(B)
        if piece is None:
            homogeneity = Verdict(False, B, "no piece recorded for chosen set")
            break
        if not piece.issubfamily(F) or any(M & B != B for M in piece.members):
            homogeneity = Verdict(False, B, "piece is not a star of F at its key")
            break
        ambient_link = link(A, B)
        # counts in the ambient link are counts of B ∪ X in A
        linked_counts = {X: ambient_counts[X | B] for X in subset_count_table(link(piece, B))}
        ok, bad = is_rel_homogeneous(link(piece, B), ambient_link, tau, ambient_counts=linked_counts)
        if not ok:
            homogeneity = Verdict(False, (B, bad), "piece link is not homogeneous")
            break

    lhs = len(remainder) * tau.numerator ** (q + 1)
    rhs = tau.denominator ** (q + 1) * len(A)
    if lhs <= rhs:
        bound = Verdict(True)
    elif res.empty_selector:
        bound = Verdict(None, len(remainder), "not applicable: empty-selector stop")
    else:
        bound = Verdict(False, len(remainder), "remainder exceeds tau^(-q-1)|A|")
    return ApproximationVerification(coverage, homogeneity, bound, sizes)


def check_S_t_intersecting(res: ApproximationResult | list[int], t: int) -> tuple[bool, tuple[int, int] | None]:
    """Pairwise (diagonal included) t-intersection of the chosen sets."""
    sets = res.S if isinstance(res, ApproximationResult) else list(res)
    for i, A in enumerate(sets):
        if popcount(A) < t:
            return False, (A, A)
        for B in sets[i + 1:]:
            if popcount(A & B) < t:
                return False, (A, B)
    return True, None


# -- minimal reduction -----------------------------------------------------------


def _shrink_order(masks):
    return sorted(masks, key=lambda m: (-popcount(m), lex_key(m)))


def reduce_to_minimal(S: SetFamily, t: int) -> SetFamily:
    """Shrink a t-intersecting family until no member can lose an element.

    Members are visited largest first, then lexicographically; the first
    single-element deletion that keeps the family t-intersecting is applied
    and the scan restarts.  Members strictly containing another member are
    dropped at the end.  Every output member is a subset of an input member.
    """
    bad = t_intersection_violation(S, t)
    if bad is not None:
        raise FamilyError("reduce_to_minimal needs a t-intersecting family")
    current = set(S.members)
    changed = True
    while changed:
        changed = False
        for T in _shrink_order(current):
            others = [U for U in current if U != T]
            for e in elements_of(T):
                smaller = T & ~(1 << e)
                if popcount(smaller) >= t and all(popcount(smaller & U) >= t for U in others):
                    current.discard(T)
                    current.add(smaller)
                    changed = True
                    break
            if changed:
                break
    kept = [T for T in current if not any(U != T and U & T == U for U in current)]
    return S.with_members(kept)


def minimality_violation(T: SetFamily, t: int) -> tuple[int, int] | None:
    """First ``(member, proper subset X)`` such that X still meets every member in >= t elements."""
    for M in T.members:
        els = elements_of(M)
        for size in range(len(els)):
            for combo in combinations(els, size):
                X = sum(1 << e for e in combo)
                if all(popcount(X & U) >= t for U in T.members):
                    return M, X
    return None


@dataclass
class ReductionChain:
    """``levels[i] = (T_i, W_i)`` for ``i = 0..q-t``; ``final`` is ``T_{q-t+1}``."""

    levels: list[tuple[SetFamily, SetFamily]]
    final: SetFamily
    t: int
    q: int

    def T(self, i: int) -> SetFamily:
        return self.final if i == len(self.levels) else self.levels[i][0]


def build_chain(S: SetFamily, A: SetFamily, t: int, q: int) -> ReductionChain:
    """Iterate minimal reduction, splitting off the top layer each round.

    ``T_0`` is the reduction of S; ``W_i`` are the members of ``T_i`` of size
    exactly ``q - i``; ``T_{i+1}`` reduces ``T_i \\ W_i``.
    """
    if t < 1 or q < t:
        raise ValueError("need 1 <= t <= q")
    if S.n != A.n:
        raise FamilyError("S and A live on different ground sets")
    if S.max_size > q:
        raise FamilyError("members of S must have size at most q")
    T = reduce_to_minimal(S, t)
    levels = []
    for i in range(q - t + 1):
        W = T.with_members(M for M in T.members if popcount(M) == q - i)
        levels.append((T, W))
        T = reduce_to_minimal(T.with_members(M for M in T.members if popcount(M) != q - i), t)
    return ReductionChain(levels, T, t, q)


@dataclass
class ChainVerification:
    sizes: Verdict
    coverage: Verdict
    sunflower_free: Verdict
    top_layer_bound: Verdict
    collapse_bound: Verdict

    @property
    def all_ok(self) -> bool:
        return all(v.ok is not False for v in (self.sizes, self.coverage, self.sunflower_free,
                                               self.top_layer_bound, self.collapse_bound))


def check_chain_properties(chain: ReductionChain, A: SetFamily, r=None) -> ChainVerification:
    """Verify the five chain properties, each with a witness on failure.

    (i) members of ``T_i`` have size <= q - i; (ii) ``A(T_{i-1}) ⊆ A(T_i) ∪
    A(W_{i-1})``; (iii) ``T_i`` has no sunflower with ``q - i - t + 2``
    petals; (iv) ``|W_i| <= (C0 q log2 q)^(q-i-t)``; (v) when ``T_i``
    collapses to a single t-set X (and ``T_{i-1}`` did not),
    ``|A(T_{i-1} \\ W_{i-1})| <= (q / r) |A(X)|``.  (v) needs ``r``; without
    it the verdict is ``None``.
    """
    t, q = chain.t, chain.q
    depth = len(chain.levels)
    Ts = [chain.T(i) for i in range(depth + 1)]

    sizes = Verdict(True)
    for i, T in enumerate(Ts):
        big = [M for M in T.members if popcount(M) > q - i]
        if big:
            sizes = Verdict(False, (i, big[0]))
            break

    coverage = Verdict(True)
    for i in range(1, depth + 1):
        before = contains_some(A, Ts[i - 1]).member_set
        after = contains_some(A, Ts[i]).member_set | contains_some(A, chain.levels[i - 1][1]).member_set
        missing = before - after
        if missing:
            coverage = Verdict(False, (i, min(missing)))
            break

    sunflower_free = Verdict(True)
    for i in range(depth):
        petals = q - i - t + 2
        if petals < 2:
            continue
        flower = find_sunflower(Ts[i], petals)
        if flower is not None:
            sunflower_free = Verdict(False, (i, flower))
            break

    top = Verdict(True)
    for i, (_, W) in enumerate(chain.levels):
        exp = q - i - t
        base = C0 * q * math.log2(q) if q > 1 else 0.0
        bound = base ** exp if exp > 0 else 1.0
        if len(W) > bound:
            top = Verdict(False, (i, len(W)), f"bound {bound}")
            break

    collapse = Verdict(True, note="no collapse to a single t-set")
    for i in range(1, depth + 1):
        Ti, Tprev = Ts[i], Ts[i - 1]
        single = len(Ti) == 1 and popcount(Ti.members[0]) == t
        prev_single = len(Tprev) == 1 and popcount(Tprev.members[0]) == t
        if not single or prev_single:
            continue
        X = Ti.members[0]
        W_prev = chain.levels[i - 1][1].member_set
        rest = Tprev.with_members(M for M in Tprev.members if M not in W_prev)
        residual = link(rest, X)
        cover = cover_number(residual) if len(residual) and 0 not in residual.member_set else None
        lhs = len(contains_some(A, rest))
        ax = len(contains_some(A, Ti))
        if r is None:
            collapse = Verdict(None, (i, lhs, ax, cover), "r not supplied")
        else:
            r_frac = as_fraction(r)
            ok = lhs * r_frac <= q * ax
            collapse = Verdict(ok, (i, lhs, ax, cover))
        break
    return ChainVerification(sizes, coverage, sunflower_free, top, collapse)
