"""Seeded randomness, Monte-Carlo containment estimates, random-coloring
pair search and exact sunflower detection."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import factorial

import numpy as np

from .family import GroundSet, SetFamily, elements_of, lex_key, mask_from_elements, popcount
from .spread import BudgetExceeded, spread_radius

RNG_ALGORITHM = "philox4x64-10+seedseq"
CHUNK_TRIALS = 8192


@dataclass(frozen=True)
class RngSpec:
    """A seed plus the fixed generator tag.

    Stream ``i`` is Philox keyed by ``SeedSequence([seed, i])``, so chunked
    work gives the same numbers whatever the number of worker threads.
    """

    seed: int
    algorithm: str = RNG_ALGORITHM

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.algorithm != RNG_ALGORITHM:
            raise ValueError(f"unknown generator {self.algorithm!r}")

    def generator(self, stream: int = 0) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(np.random.SeedSequence([self.seed, stream])))


def sample_p_random(ground: GroundSet | int, p: float, rng: RngSpec, stream: int = 0) -> int:
    """Mask with each element included independently with probability ``p``."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    n = ground.n if isinstance(ground, GroundSet) else ground
    draws = rng.generator(stream).random(n) < p
    return mask_from_elements(np.flatnonzero(draws).tolist())


def _covered(W: np.ndarray, F: SetFamily) -> np.ndarray:
    """Rows of the boolean sample matrix W containing at least one member."""
    hit = np.zeros(W.shape[0], dtype=bool)
    groups: dict[int, list[list[int]]] = {}
    for m in F.members:
        el = elements_of(m)
        groups.setdefault(len(el), []).append(el)
    for k, rows in groups.items():
        if k == 0:
            hit[:] = True
            return hit
        idx = np.array(rows, dtype=np.intp)
        block = max(1, (1 << 24) // max(1, W.shape[0] * k))
        for start in range(0, len(idx), block):
            sub = W[:, idx[start:start + block]]  # (trials, members, k)
            hit |= sub.all(axis=2).any(axis=1)
    return hit


def _chunk_hits(F: SetFamily, p: float, rng: RngSpec, chunk: int, size: int) -> int:
    W = rng.generator(chunk).random((size, F.n)) < p
    return int(_covered(W, F).sum())


def containment_probability(F: SetFamily, p: float, trials: int, rng: RngSpec, threads: int = 1) -> tuple[float, float]:
    """Monte-Carlo estimate of ``P[some member ⊆ W]`` for p-random W.

    Returns ``(estimate, standard_error)``.  Trials are split into fixed
    chunks of :data:`CHUNK_TRIALS`, each drawn from its own stream, and the
    hit counts are summed, so the estimate does not depend on ``threads``.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    sizes = [CHUNK_TRIALS] * (trials // CHUNK_TRIALS)
    if trials % CHUNK_TRIALS:
        sizes.append(trials % CHUNK_TRIALS)
    jobs = list(enumerate(sizes))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            hits = sum(pool.map(lambda job: _chunk_hits(F, p, rng, *job), jobs))
    else:
        hits = sum(_chunk_hits(F, p, rng, c, s) for c, s in jobs)
    est = hits / trials
    return est, math.sqrt(est * (1 - est) / trials)


@dataclass
class SpreadLemmaAudit:
    radius: float
    mean_size: float
    p: float
    bound: float | None  # None when log2(r * delta) <= 0
    vacuous: bool
    estimate: float
    stderr: float
    trials: int
    passed: bool


def spread_lemma_bound(r: float, m: int, delta: float, mean_size: float) -> float | None:
    """``1 - (5 / log2(r delta))^m |mu|``, or ``None`` when ``r delta <= 1``."""
    if math.isinf(r):
        return 1.0
    x = r * delta
    if x <= 1:
        return None
    return 1 - (5 / math.log2(x)) ** m * mean_size


def spread_lemma_audit(F: SetFamily, m: int, delta: float, trials: int, rng: RngSpec, threads: int = 1) -> SpreadLemmaAudit:
    """Compare the Monte-Carlo containment probability at ``p = m delta``
    with the lower bound the spread lemma gives from F's exact radius.

    Passes when ``estimate + 3 stderr >= bound``; a vacuous bound (undefined
    or nonpositive) passes trivially and is flagged.
    """
    if not len(F):
        raise ValueError("family must be nonempty")
    if m < 1 or delta <= 0:
        raise ValueError("need m >= 1 and delta > 0")
    p = m * delta
    if p > 1:
        raise ValueError("m * delta must not exceed 1")
    radius = spread_radius(F).radius_float
    mean_size = sum(F.sizes) / len(F)
    bound = spread_lemma_bound(radius, m, delta, mean_size)
    vacuous = bound is None or bound <= 0
    est, se = containment_probability(F, p, trials, rng, threads)
    passed = vacuous or est + 3 * se >= bound
    return SpreadLemmaAudit(radius, mean_size, p, bound, vacuous, est, se, trials, passed)


def find_disjoint_pair_by_coloring(G1: SetFamily, G2: SetFamily, trials: int, rng: RngSpec):
    """Randomly 2-color the ground set and look for a member of G1 inside the
    first color class and a member of G2 inside the second.

    Returns ``(A, B, trial)`` for the first success (A and B are then
    disjoint) or ``None`` after ``trials`` attempts.  ``None`` does not prove
    that no disjoint pair exists.
    """
    if G1.n != G2.n:
        raise ValueError("families live on different ground sets")
    gen = rng.generator(0)
    full = (1 << G1.n) - 1
    for trial in range(trials):
        coins = gen.integers(0, 2, G1.n)
        U1 = mask_from_elements(np.flatnonzero(coins == 0).tolist())
        U2 = full & ~U1
        a = next((A for A in G1.members if A & U1 == A), None)
        if a is None:
            continue
        b = next((B for B in G2.members if B & U2 == B), None)
        if b is not None:
            return a, b, trial
    return None


# -- sunflowers ------------------------------------------------------------------


@dataclass(frozen=True)
class Sunflower:
    """Petals as indices into the family's canonical member order."""

    petals: tuple[int, ...]
    core: int

    def is_valid(self, F: SetFamily) -> bool:
        sets = [F.members[i] for i in self.petals]
        if len(set(self.petals)) != len(self.petals):
            return False
        return all(a & b == self.core for a, b in combinations(sets, 2))


def _disjoint_choice(residuals: list[int], need: int, budget: list[int]) -> list[int] | None:
    """Indices of ``need`` pairwise disjoint residuals, by backtracking."""
    order = sorted(range(len(residuals)), key=lambda i: (popcount(residuals[i]), i))

    def rec(start: int, used: int, picked: list[int]):
        if len(picked) == need:
            return picked
        budget[0] -= 1
        if budget[0] < 0:
            raise BudgetExceeded("sunflower search budget exhausted")
        cands = [pos for pos in range(start, len(order)) if not residuals[order[pos]] & used]
        short = need - len(picked)
        if len(cands) < short:
            return None
        for j, pos in enumerate(cands):
            if len(cands) - j < short:
                break
            i = order[pos]
            found = rec(pos + 1, used | residuals[i], picked + [i])
            if found:
                return found
        return None

    return rec(0, 0, [])


def find_sunflower(F: SetFamily, l: int, budget: int = 10**6) -> Sunflower | None:
    """Exact search for an ``l``-sunflower in F.

    Any sunflower's core is the intersection of two of its petals, so only
    pairwise intersections are tried as cores (in lexicographic order).  For
    each core the members containing it are reduced to their parts outside
    the core, and ``l`` pairwise disjoint parts are sought by backtracking.
    Raises :class:`BudgetExceeded` after ``budget`` search nodes.
    """
    if l < 2:
        raise ValueError("a sunflower needs at least 2 petals")
    ms = F.members
    if len(ms) < l:
        return None
    cores = {a & b for a, b in combinations(ms, 2)}
    remaining = [budget]
    for core in sorted(cores, key=lambda c: (popcount(c), lex_key(c))):
        idx = [i for i, M in enumerate(ms) if M & core == core]
        if len(idx) < l:
            continue
        residuals = [ms[i] & ~core for i in idx]
        pick = _disjoint_choice(residuals, l, remaining)
        if pick is not None:
            return Sunflower(tuple(sorted(idx[j] for j in pick)), core)
    return None


def sunflower_thresholds(k: int, l: int, C: int = 2 ** 10) -> tuple[int, float]:
    """``(k! (l-1)^k, (C l log2(k l))^l)``: family sizes above which a
    k-uniform family must contain an l-sunflower."""
    if k < 1 or l < 2:
        raise ValueError("need k >= 1 and l >= 2")
    return factorial(k) * (l - 1) ** k, (C * l * math.log2(k * l)) ** l
