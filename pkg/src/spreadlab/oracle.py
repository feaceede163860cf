"""Exact oracles for extremal questions at desk scale.

The workhorse is a bitset branch-and-bound maximum clique search with greedy
coloring bounds.  Extremal subfamily problems (largest t-intersecting family,
largest family avoiding one intersection size) become clique problems on the
compatibility graph of the ambient members.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial, gcd

from .family import (
    FamilyError,
    PermutationFamily,
    SetFamily,
    avoids_intersection,
    elements_of,
    k_subsets,
    perm_agreement,
    popcount,
    t_intersection_violation,
)

DEFAULT_BUDGET = 50_000_000
PERM_ORACLE_MAX_N = 5


@dataclass
class ExtremalResult:
    """Best subfamily found.  When ``proved_optimal`` is false the search ran
    out of budget and ``optimum`` is only a lower bound."""

    optimum: int
    witness: SetFamily
    nodes_explored: int
    proved_optimal: bool


# -- maximum clique ----------------------------------------------------------------


def _degeneracy_order(adj: list[int]) -> list[int]:
    """Vertices in reverse smallest-last order (high-core vertices first)."""
    n = len(adj)
    alive = (1 << n) - 1
    deg = [popcount(a) for a in adj]
    removed = []
    for _ in range(n):
        v = min((u for u in range(n) if alive >> u & 1), key=lambda u: (deg[u], u))
        removed.append(v)
        alive &= ~(1 << v)
        a = adj[v] & alive
        while a:
            low = a & -a
            deg[low.bit_length() - 1] -= 1
            a ^= low
    return removed[::-1]


def _color_sort(P: int, adj: list[int]) -> tuple[list[int], list[int]]:
    """Greedy sequential coloring of candidate set P; returns vertices and
    their color numbers in nondecreasing color order."""
    order, colors = [], []
    color = 0
    Q = P
    while Q:
        color += 1
        avail = Q
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~adj[v] & ~low
            Q &= ~low
            order.append(v)
            colors.append(color)
    return order, colors


class _CliqueSearch:
    def __init__(self, adj: list[int], budget: int, initial: list[int]):
        self.adj = adj
        self.budget = budget
        self.nodes = 0
        self.best = list(initial)
        self.exhausted = False
        self.lock = threading.Lock()

    def offer(self, clique: list[int]):
        with self.lock:
            if len(clique) > len(self.best):
                self.best = list(clique)

    def expand(self, R: list[int], P: int):
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return
        order, colors = _color_sort(P, self.adj)
        for idx in range(len(order) - 1, -1, -1):
            if self.exhausted or len(R) + colors[idx] <= len(self.best):
                return
            v = order[idx]
            newP = P & self.adj[v]
            R.append(v)
            if newP:
                self.expand(R, newP)
            else:
                self.offer(R)
            R.pop()
            P &= ~(1 << v)


def max_clique(adj: list[int], budget: int = DEFAULT_BUDGET, threads: int = 1):
    """Maximum clique of a graph given as neighbor bitsets.

    Returns ``(clique, nodes, proved)``.  With ``threads > 1`` the top-level
    branches run concurrently against a shared incumbent; the optimum value
    is unaffected, only node counts vary.
    """
    n = len(adj)
    if n == 0:
        return [], 0, True
    order = _degeneracy_order(adj)
    pos = {v: i for i, v in enumerate(order)}
    # relabel so bit i is the i-th vertex of the order
    radj = [0] * n
    for v, a in enumerate(adj):
        m = 0
        while a:
            low = a & -a
            m |= 1 << pos[low.bit_length() - 1]
            a ^= low
        radj[pos[v]] = m
    # greedy initial clique
    greedy, cand = [], (1 << n) - 1
    while cand:
        v = max(elements_of(cand), key=lambda u: (popcount(radj[u] & cand), -u))
        greedy.append(v)
        cand &= radj[v]
    search = _CliqueSearch(radj, budget, greedy)
    if threads <= 1:
        search.expand([], (1 << n) - 1)
    else:
        # branch i: cliques whose highest-labelled vertex is i
        def task(i: int):
            below = (1 << i) - 1
            P = radj[i] & below
            if len(search.best) >= 1 + popcount(P):
                return
            if P:
                search.expand([i], P)
            else:
                search.offer([i])

        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(task, range(n - 1, -1, -1)))
    clique = sorted(order[v] for v in search.best)
    return clique, search.nodes, not search.exhausted


def _compat_graph(members: list[int], ok) -> list[int]:
    adj = [0] * len(members)
    for i, j in combinations(range(len(members)), 2):
        if ok(members[i], members[j]):
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return adj


def max_t_intersecting(A: SetFamily, t: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> ExtremalResult:
    """Largest t-intersecting subfamily of A (exact unless the budget runs out)."""
    if t < 1:
        raise ValueError("t must be at least 1")
    members = [M for M in A.members if popcount(M) >= t]
    adj = _compat_graph(members, lambda a, b: popcount(a & b) >= t)
    clique, nodes, proved = max_clique(adj, budget, threads)
    witness = A.with_members(members[i] for i in clique)
    return ExtremalResult(len(clique), witness, nodes, proved)


def max_avoiding(A: SetFamily, t: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> ExtremalResult:
    """Largest subfamily of A with no two distinct members meeting in exactly t-1 elements."""
    if t < 1:
        raise ValueError("t must be at least 1")
    members = list(A.members)
    adj = _compat_graph(members, lambda a, b: popcount(a & b) != t - 1)
    clique, nodes, proved = max_clique(adj, budget, threads)
    witness = A.with_members(members[i] for i in clique)
    return ExtremalResult(len(clique), witness, nodes, proved)


def brute_force_max(A: SetFamily, predicate) -> int:
    """Size of the largest subfamily satisfying ``predicate``, over all 2^|A|
    subfamilies.  Independent cross-check for tiny ambients."""
    ms = A.members
    if len(ms) > 20:
        raise ValueError("brute force limited to 20 members")
    best = 0
    for bits in range(1 << len(ms)):
        size = popcount(bits)
        if size <= best:
            continue
        sub = A.with_members(ms[i] for i in range(len(ms)) if bits >> i & 1)
        if predicate(sub):
            best = size
    return best


# -- triviality and Hilton-Milner type constructions ------------------------------


def common_intersection(F: SetFamily) -> int:
    out = (1 << F.n) - 1
    for M in F.members:
        out &= M
    return out


def is_trivial_t_intersecting(F: SetFamily, t: int) -> int | None:
    """A t-set inside every member (lexicographically least), or ``None``."""
    if t_intersection_violation(F, t) is not None:
        raise FamilyError("family is not t-intersecting")
    core = elements_of(common_intersection(F))
    if len(core) < t:
        return None
    return sum(1 << e for e in core[:t])


def hilton_milner_perm_family(n: int, t: int) -> PermutationFamily:
    """Permutations fixing ``1..t`` whose agreement with the t-cycle
    ``(1 2 ... t)`` is not t-1, together with that cycle itself.

    For ``t = 1`` the cycle is the identity and the result is the star of
    permutations fixing 1.
    """
    if not 1 <= t < n:
        raise ValueError("need 1 <= t < n")
    sigma = tuple(list(range(2, t + 1)) + [1] + list(range(t + 1, n + 1)))
    prefix = tuple(range(1, t + 1))
    members = [sigma]
    for tail in permutations(range(t + 1, n + 1)):
        pi = prefix + tail
        if perm_agreement(pi, sigma) != t - 1:
            members.append(pi)
    return PermutationFamily(n, members)


def perm_intersection_profile(P: PermutationFamily, t: int) -> dict:
    """Whether a permutation family avoids agreement t-1 and whether it is trivial."""
    F = P.to_set_family()
    return {
        "avoids": avoids_intersection(F, t - 1),
        "common": popcount(common_intersection(F)) if len(F) else None,
        "non_trivial": len(F) > 0 and popcount(common_intersection(F)) < t,
        "size": len(P),
    }


# -- permutation counting ------------------------------------------------------------


def derangement_count(m: int) -> int:
    """Number of fixed-point-free permutations of m points."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    a, b = 1, 0  # D(0), D(1)
    if m == 0:
        return 1
    for i in range(2, m + 1):
        a, b = b, (i - 1) * (a + b)
    return b


@dataclass
class IntersectionClasses:
    """Sizes of ``G_i = {σ ⊇ Id_[t] : |σ ∩ π| = i}``.

    ``bound`` is ``t^(-t) (n-t)! / 4``; ``hypotheses_met`` records whether
    ``n >= 10`` and ``t <= n/4`` (the range where the bound is a theorem).
    """

    n: int
    t: int
    pi: tuple[int, ...]
    counts: dict[int, int]
    total: int
    bound: Fraction
    bound_holds: bool
    hypotheses_met: bool


def count_intersection_classes(n: int, t: int, pi) -> IntersectionClasses:
    """Enumerate the ``(n-t)!`` permutations fixing ``1..t`` and bucket them
    by agreement with ``pi`` (one-line, 1-indexed)."""
    pi = tuple(int(v) for v in pi)
    if sorted(pi) != list(range(1, n + 1)):
        raise ValueError("pi is not a permutation of 1..n")
    if not 1 <= t <= n:
        raise ValueError("need 1 <= t <= n")
    if all(pi[i] == i + 1 for i in range(t)):
        raise ValueError("pi must not fix every point of 1..t")
    prefix = tuple(range(1, t + 1))
    base = sum(1 for i in range(t) if pi[i] == i + 1)
    counts: dict[int, int] = {}
    for tail in permutations(range(t + 1, n + 1)):
        agree = base + sum(1 for j, v in enumerate(tail, start=t) if pi[j] == v)
        counts[agree] = counts.get(agree, 0) + 1
    total = sum(counts.values())
    bound = Fraction(factorial(n - t), 4 * t ** t)
    return IntersectionClasses(
        n, t, pi, dict(sorted(counts.items())), total, bound,
        counts.get(t - 1, 0) >= bound, n >= 10 and 4 * t <= n,
    )


# -- regular intersecting families --------------------------------------------------------


def regular_feasibility(n: int, k: int) -> str:
    """``"infeasible"`` when no nonempty regular intersecting k-uniform family
    on [n] can exist (``n > k^2``), else ``"unknown"``."""
    if n < 1 or k < 1:
        raise ValueError("need n, k >= 1")
    return "infeasible" if n > k * k else "unknown"


def _find_regular_clique(sets: list[int], n: int, size: int, degree: int, anchor: int, budget: list[int]):
    """An intersecting family of ``size`` k-sets containing ``sets[anchor]``
    in which every element has degree exactly ``degree``."""
    m = len(sets)
    adj = _compat_graph(sets, lambda a, b: bool(a & b))
    containing = [[i for i in range(m) if sets[i] >> e & 1] for e in range(n)]

    def rec(chosen: list[int], cand: int, deg: list[int]):
        budget[0] -= 1
        if budget[0] < 0:
            return None
        if len(chosen) == size:
            return list(chosen)
        # element with positive deficit and fewest remaining options
        best_e, best_opts = None, None
        for e in range(n):
            deficit = degree - deg[e]
            if deficit == 0:
                continue
            opts = [i for i in containing[e] if cand >> i & 1]
            if len(opts) < deficit:
                return None
            if best_opts is None or len(opts) < len(best_opts):
                best_e, best_opts = e, opts
        if best_e is None:
            return None
        need = size - len(chosen)
        if popcount(cand) < need:
            return None
        for i in best_opts:
            if not cand >> i & 1:
                continue
            M = sets[i]
            new_deg = list(deg)
            for e in elements_of(M):
                new_deg[e] += 1
            # sets touching a saturated element can no longer be used
            full = 0
            for e in elements_of(M):
                if new_deg[e] == degree:
                    for j in containing[e]:
                        full |= 1 << j
            found = rec(chosen + [i], cand & adj[i] & ~full, new_deg)
            if found or budget[0] < 0:
                return found
            cand &= ~(1 << i)
        return None

    deg0 = [0] * n
    for e in elements_of(sets[anchor]):
        deg0[e] += 1
    full0 = 0
    for e in elements_of(sets[anchor]):
        if deg0[e] == degree:
            for j in containing[e]:
                full0 |= 1 << j
    return rec([anchor], adj[anchor] & ~full0, deg0)


def max_regular_intersecting(n: int, k: int, budget: int = DEFAULT_BUDGET) -> ExtremalResult:
    """Largest regular intersecting family of k-subsets of [n].

    Candidate sizes s must make ``k s / n`` an integer; they are tried from
    the largest down, so the first success is optimal.  By symmetry every
    search may assume ``{1..k}`` is a member.  The empty family counts as
    regular, so the optimum is 0 when nothing else works.
    """
    if regular_feasibility(n, k) == "infeasible":
        return ExtremalResult(0, SetFamily.from_masks(n, []), 0, True)
    if k > n:
        return ExtremalResult(0, SetFamily.from_masks(n, []), 0, True)
    ambient = k_subsets(n, k)
    sets = list(ambient.members)
    anchor = sets.index((1 << k) - 1)
    step = n // gcd(n, k)
    cap = len(sets) if n < 2 * k else factorial(n - 1) // (factorial(k - 1) * factorial(n - k))
    remaining = [budget]
    for size in range(cap - cap % step, 0, -step):
        found = _find_regular_clique(sets, n, size, k * size // n, anchor, remaining)
        if found:
            W = ambient.with_members(sets[i] for i in found)
            return ExtremalResult(size, W, budget - remaining[0], True)
        if remaining[0] < 0:
            return ExtremalResult(0, SetFamily.from_masks(n, []), budget, False)
    return ExtremalResult(0, SetFamily.from_masks(n, []), budget - remaining[0], True)
