"""Ground sets, set families and the link/shadow operators on them.

Members are stored as Python ``int`` bitmasks over ``0..n-1``; bit ``i`` is
element ``i + 1`` in the 1-indexed external convention used by files and the
command line.  Families are canonical: members are deduplicated and sorted by
mask value, so two families with the same members compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import factorial
from typing import Iterable, Sequence

import numpy as np


class FamilyError(ValueError):
    """Raised when a family operation is called outside its contract."""


# -- masks -----------------------------------------------------------------


def mask_from_elements(elements: Iterable[int]) -> int:
    """Bitmask of 0-indexed ``elements``."""
    mask = 0
    for e in elements:
        mask |= 1 << e
    return mask


def elements_of(mask: int) -> list[int]:
    """Sorted 0-indexed elements of ``mask``."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int, max_size: int | None = None):
    """Yield every submask of ``mask`` (including 0 and ``mask``) up to ``max_size`` bits."""
    elems = elements_of(mask)
    top = len(elems) if max_size is None else min(max_size, len(elems))
    for s in range(top + 1):
        for combo in combinations(elems, s):
            yield mask_from_elements(combo)


def lex_key(mask: int) -> tuple[int, ...]:
    """Ordering key used for every "lexicographically least" tie-break."""
    return tuple(elements_of(mask))


# -- core types ------------------------------------------------------------


@dataclass(frozen=True)
class GroundSet:
    n: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise FamilyError(f"ground set needs n >= 1, got {self.n}")
        if self.labels is not None and len(self.labels) != self.n:
            raise FamilyError("labels must name every element")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1


@dataclass(frozen=True)
class SetFamily:
    """A finite family of distinct subsets of ``[n]``.

    Build with :meth:`from_sets` (1-indexed element lists) or
    :meth:`from_masks`; the constructor canonicalizes member order.
    """

    ground: GroundSet
    members: tuple[int, ...] = ()
    _elem_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        members = tuple(sorted(set(int(m) for m in self.members)))
        if members and members[-1] >> self.ground.n:
            raise FamilyError(f"member has a bit outside the ground set of size {self.ground.n}")
        if members and members[0] < 0:
            raise FamilyError("negative mask")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_masks(cls, n: int | GroundSet, masks: Iterable[int]) -> "SetFamily":
        ground = n if isinstance(n, GroundSet) else GroundSet(n)
        return cls(ground, tuple(masks))

    @classmethod
    def from_sets(cls, n: int | GroundSet, sets: Iterable[Iterable[int]]) -> "SetFamily":
        """Family from 1-indexed element lists, e.g. ``from_sets(4, [[1, 2], [3, 4]])``."""
        ground = n if isinstance(n, GroundSet) else GroundSet(n)
        masks = []
        for s in sets:
            s = list(s)
            bad = [e for e in s if not 1 <= e <= ground.n]
            if bad:
                raise FamilyError(f"elements {bad} outside 1..{ground.n}")
            masks.append(mask_from_elements(e - 1 for e in s))
        return cls(ground, tuple(masks))

    @property
    def n(self) -> int:
        return self.ground.n

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in self.member_set

    @property
    def member_set(self) -> frozenset[int]:
        cached = self._elem_cache.get("set")
        if cached is None:
            cached = self._elem_cache["set"] = frozenset(self.members)
        return cached

    @property
    def sizes(self) -> list[int]:
        return [popcount(m) for m in self.members]

    @property
    def uniform_k(self) -> int | None:
        """Common member size, or ``None`` for an empty or non-uniform family."""
        sizes = set(self.sizes)
        return sizes.pop() if len(sizes) == 1 else None

    @property
    def max_size(self) -> int:
        return max(self.sizes, default=0)

    def with_members(self, masks: Iterable[int]) -> "SetFamily":
        return SetFamily(self.ground, tuple(masks))

    def to_sets(self) -> list[list[int]]:
        """Members as sorted 1-indexed lists."""
        return [[e + 1 for e in elements_of(m)] for m in self.members]

    def issubfamily(self, other: "SetFamily") -> bool:
        return self.member_set <= other.member_set

    def element_matrix(self) -> np.ndarray:
        """``(len, k)`` int array of sorted member elements; uniform families only."""
        cached = self._elem_cache.get("matrix")
        if cached is None:
            k = self.uniform_k
            if k is None:
                raise FamilyError("element_matrix needs a uniform nonempty family")
            cached = np.array([elements_of(m) for m in self.members], dtype=np.int64).reshape(len(self), k)
            cached.flags.writeable = False
            self._elem_cache["matrix"] = cached
        return cached

    def __repr__(self) -> str:
        shown = self.to_sets()[:6]
        more = "" if len(self) <= 6 else f", ... ({len(self)} sets)"
        return f"SetFamily(n={self.n}, {shown}{more})"


def _check_mask(F: SetFamily, mask: int, what: str = "set"):
    if mask < 0 or mask >> F.n:
        raise FamilyError(f"{what} is not a subset of the ground set")


# -- link / restriction operators --------------------------------------------


def link(F: SetFamily, S: int) -> SetFamily:
    """``F(S) = {A \\ S : A in F, S ⊆ A}`` on the same ground set."""
    _check_mask(F, S)
    return F.with_members(A & ~S for A in F.members if A & S == S)


def degree(F: SetFamily, S: int) -> int:
    """Number of members containing ``S``, i.e. ``len(link(F, S))``."""
    return sum(1 for A in F.members if A & S == S)


def avoid(F: SetFamily, X: int) -> SetFamily:
    """Members disjoint from ``X``."""
    _check_mask(F, X)
    return F.with_members(A for A in F.members if not A & X)


def slice_family(F: SetFamily, X: int, Y: int) -> SetFamily:
    """``{A \\ X : A in F, A ∩ Y = X}``; requires ``X ⊆ Y``."""
    _check_mask(F, Y)
    if X & ~Y:
        raise FamilyError("slice needs X ⊆ Y")
    return F.with_members(A & ~X for A in F.members if A & Y == X)


def contains_some(A: SetFamily, S: SetFamily) -> SetFamily:
    """Members of ``A`` containing at least one member of ``S``."""
    if A.n != S.n:
        raise FamilyError("families live on different ground sets")
    keys = S.members
    return A.with_members(F for F in A.members if any(F & B == B for B in keys))


def lower_shadow(F: SetFamily, l: int) -> SetFamily:
    """All ``l``-subsets of members."""
    if l < 0:
        raise FamilyError("shadow level must be nonnegative")
    out = set()
    for A in F.members:
        for combo in combinations(elements_of(A), l):
            out.add(mask_from_elements(combo))
    return F.with_members(out)


def upper_shadow(F: SetFamily, l: int) -> SetFamily:
    """All ``l``-subsets of ``[n]`` containing some member."""
    if l > F.n:
        raise FamilyError(f"upper shadow level {l} exceeds n={F.n}")
    if l < 0:
        raise FamilyError("shadow level must be nonnegative")
    out = set()
    full = F.ground.full_mask
    for A in F.members:
        size = popcount(A)
        if size > l:
            continue
        for extra in combinations(elements_of(full & ~A), l - size):
            out.add(A | mask_from_elements(extra))
    return F.with_members(out)


# -- intersection predicates -------------------------------------------------


def is_t_intersecting(F: SetFamily, t: int) -> bool:
    """``|A ∩ B| >= t`` for every pair, ``A = B`` included."""
    if t < 0:
        raise FamilyError("t must be nonnegative")
    return t_intersection_violation(F, t) is None


def t_intersection_violation(F: SetFamily, t: int) -> tuple[int, int] | None:
    """First pair ``(A, B)`` (possibly ``A == B``) meeting in fewer than ``t`` elements."""
    ms = F.members
    for i, A in enumerate(ms):
        if popcount(A) < t:
            return (A, A)
        for B in ms[i + 1:]:
            if popcount(A & B) < t:
                return (A, B)
    return None


def avoids_intersection(F: SetFamily, s: int) -> bool:
    """No two distinct members meet in exactly ``s`` elements."""
    if s < 0:
        raise FamilyError("s must be nonnegative")
    ms = F.members
    for i, A in enumerate(ms):
        for B in ms[i + 1:]:
            if popcount(A & B) == s:
                return False
    return True


def is_t_cross_dependent(families: Sequence[SetFamily], t: int) -> bool:
    """Every transversal ``A_1, ..., A_s`` has ``|∪A_i| <= Σ|A_i| - t``.

    Checked literally over all transversals, so a single family is
    cross-dependent only when ``t <= 0``.
    """
    if not families:
        return True
    n = families[0].n
    if any(F.n != n for F in families):
        raise FamilyError("families live on different ground sets")

    # depth-first over transversals, carrying (union, total size)
    def rec(i: int, union: int, total: int) -> bool:
        if i == len(families):
            return popcount(union) <= total - t
        return all(rec(i + 1, union | A, total + popcount(A)) for A in families[i].members)

    return rec(0, 0, 0)


# -- covers and degrees --------------------------------------------------------


def element_degrees(F: SetFamily) -> list[int]:
    deg = [0] * F.n
    for A in F.members:
        for e in elements_of(A):
            deg[e] += 1
    return deg


def is_regular(F: SetFamily) -> bool:
    """All ``n`` elements lie in the same number of members."""
    return len(set(element_degrees(F))) <= 1


def cover_number(F: SetFamily) -> int:
    """Minimum number of elements meeting every member (exact).

    Returns 0 for the empty family.  A family with an empty member cannot be
    covered and raises :class:`FamilyError`.
    """
    members = list(F.members)
    if any(m == 0 for m in members):
        raise FamilyError("a family with an empty member has no cover")
    if not members:
        return 0
    best = [len(members)]  # one element per member always works

    # branch on the smallest uncovered member: some element of it is in the cover
    def rec(uncovered: list[int], size: int):
        if not uncovered:
            best[0] = min(best[0], size)
            return
        if size + 1 >= best[0]:
            return
        # disjoint members need distinct cover elements: greedy packing lower bound
        packed, used = 0, 0
        for A in sorted(uncovered, key=popcount):
            if not A & used:
                packed += 1
                used |= A
        if size + packed >= best[0]:
            return
        pivot = min(uncovered, key=popcount)
        for e in elements_of(pivot):
            bit = 1 << e
            rec([A for A in uncovered if not A & bit], size + 1)

    rec(members, 0)
    return best[0]


# -- permutations ------------------------------------------------------------


GRID_MAX_N = 11


def cell_index(x: int, y: int, n: int) -> int:
    """0-indexed grid cell of the 1-indexed pair ``(x, y)``."""
    return (x - 1) * n + (y - 1)


def cell_pair(index: int, n: int) -> tuple[int, int]:
    """Inverse of :func:`cell_index`."""
    return index // n + 1, index % n + 1


@dataclass(frozen=True)
class PartialPermutation:
    """An injective partial map on ``[n]`` given by 1-indexed ``(x, y)`` pairs."""

    n: int
    pairs: frozenset[tuple[int, int]]

    def __init__(self, n: int, pairs: Iterable[tuple[int, int]]):
        pairs = frozenset((int(x), int(y)) for x, y in pairs)
        xs = [x for x, _ in pairs]
        ys = [y for _, y in pairs]
        if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
            raise FamilyError(f"not a partial permutation: {sorted(pairs)}")
        if any(not (1 <= v <= n) for v in xs + ys):
            raise FamilyError(f"pair outside [1, {n}]")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def to_mask(self) -> int:
        return mask_from_elements(cell_index(x, y, self.n) for x, y in self.pairs)

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "PartialPermutation":
        return cls(n, (cell_pair(i, n) for i in elements_of(mask)))


def is_partial_permutation_mask(mask: int, n: int) -> bool:
    """True iff the grid cells in ``mask`` use no row or column twice."""
    rows = cols = 0
    for i in elements_of(mask):
        r, c = 1 << (i // n), 1 << (i % n)
        if rows & r or cols & c:
            return False
        rows |= r
        cols |= c
    return True


def perm_to_mask(perm: Sequence[int], n: int | None = None) -> int:
    """Grid mask of a one-line permutation (1-indexed images)."""
    n = len(perm) if n is None else n
    return mask_from_elements(cell_index(x, y, n) for x, y in enumerate(perm, start=1))


def mask_to_perm(mask: int, n: int) -> list[int]:
    pairs = sorted(cell_pair(i, n) for i in elements_of(mask))
    if len(pairs) != n or [x for x, _ in pairs] != list(range(1, n + 1)):
        raise FamilyError("mask is not a full permutation")
    return [y for _, y in pairs]


@dataclass(frozen=True)
class PermutationFamily:
    """Full permutations of ``[n]`` in one-line notation (1-indexed images)."""

    n: int
    perms: tuple[tuple[int, ...], ...]

    def __init__(self, n: int, perms: Iterable[Sequence[int]]):
        cleaned = sorted(set(tuple(int(v) for v in p) for p in perms))
        target = list(range(1, n + 1))
        for p in cleaned:
            if sorted(p) != target:
                raise FamilyError(f"{list(p)} is not a permutation of 1..{n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "perms", tuple(cleaned))

    def __len__(self) -> int:
        return len(self.perms)

    def __iter__(self):
        return iter(self.perms)

    def to_set_family(self) -> SetFamily:
        """Graph encoding on the ``n * n`` grid; needs ``n <= 11``."""
        if self.n > GRID_MAX_N:
            raise FamilyError(f"grid encoding supports n <= {GRID_MAX_N}")
        return SetFamily.from_masks(self.n * self.n, (perm_to_mask(p, self.n) for p in self.perms))

    @classmethod
    def from_set_family(cls, F: SetFamily, n: int) -> "PermutationFamily":
        if F.n != n * n:
            raise FamilyError("ground set is not an n x n grid")
        return cls(n, (mask_to_perm(m, n) for m in F.members))


def perm_agreement(p: Sequence[int], q: Sequence[int]) -> int:
    """``|p ∩ q|``: positions where two one-line permutations agree."""
    return sum(1 for a, b in zip(p, q) if a == b)


def symmetric_group(n: int) -> PermutationFamily:
    return PermutationFamily(n, permutations(range(1, n + 1)))


def symmetric_group_family(n: int) -> SetFamily:
    """``Σ_n`` as an ``n``-uniform family on the grid ``[n]^2``."""
    return symmetric_group(n).to_set_family()


def partial_permutation_link_size(n: int, S: int) -> int:
    """Closed form ``|Σ_n(S)|``: ``(n - |S|)!`` for partial permutations, else 0."""
    return factorial(n - popcount(S)) if is_partial_permutation_mask(S, n) else 0


# -- ambient families ----------------------------------------------------------


def k_subsets(n: int, k: int) -> SetFamily:
    """All ``k``-subsets of ``[n]``."""
    return SetFamily.from_masks(n, (mask_from_elements(c) for c in combinations(range(n), k)))


def product_family(n: int, k: int, w: int) -> SetFamily:
    """``([n] choose k)^w`` on ``w`` disjoint blocks of size ``n``."""
    blocks = [[mask_from_elements(c) << (b * n) for c in combinations(range(n), k)] for b in range(w)]
    members = [0]
    for block in blocks:
        members = [m | x for m in members for x in block]
    return SetFamily.from_masks(n * w, members)


def cube_family(n: int, k: int) -> SetFamily:
    """``[n]^k``: one element chosen from each of ``k`` blocks of size ``n``."""
    return product_family(n, 1, k)


FANO_LINES = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))


def fano_plane() -> SetFamily:
    return SetFamily.from_sets(7, FANO_LINES)


def star(F: SetFamily, S: int) -> SetFamily:
    """Members of ``F`` containing ``S`` (not linked)."""
    return F.with_members(A for A in F.members if A & S == S)
