"""Subset-degree counting kernels.

For a family F, the degree of a set X is |F(X)|, the number of members
containing X.  Only subsets of members have nonzero degree, so counting is
done by enumerating member subsets.  Ground sets of up to 64 elements use a
vectorized uint64 path; wider ground sets fall back to plain Python.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations

import numpy as np

from .family import SetFamily, elements_of, lex_key, popcount, submasks

_FAST_WIDTH = 64


def _size_groups(F: SetFamily) -> dict[int, np.ndarray]:
    groups: dict[int, list[list[int]]] = {}
    for m in F.members:
        el = elements_of(m)
        groups.setdefault(len(el), []).append(el)
    return {k: np.array(rows, dtype=np.uint64).reshape(len(rows), k) for k, rows in groups.items()}


def _keys_at_size(groups: dict[int, np.ndarray], s: int) -> np.ndarray:
    """Masks (uint64) of every s-subset of every member, with multiplicity."""
    chunks = []
    one = np.uint64(1)
    for k, E in groups.items():
        if k < s:
            continue
        if s == 0:
            chunks.append(np.zeros(len(E), dtype=np.uint64))
            continue
        bits = one << E
        for pos in combinations(range(k), s):
            key = bits[:, pos[0]].copy()
            for p in pos[1:]:
                key |= bits[:, p]
            chunks.append(key)
    if not chunks:
        return np.zeros(0, dtype=np.uint64)
    return np.concatenate(chunks)


def lex_min_same_size(masks: np.ndarray) -> int:
    """Lexicographically least of equal-size masks.

    For two sets of the same size the lex-smaller one owns the lowest bit in
    which they differ, so keeping the holders of each bit in turn (when any
    candidate has it) isolates the least set.
    """
    cand = masks
    bit = np.uint64(1)
    for _ in range(64):
        if len(cand) == 1:
            break
        has = (cand & bit) != 0
        if has.any():
            cand = cand[has]
        bit <<= np.uint64(1)
    return int(cand[0])


def subset_count_table(F: SetFamily, max_size: int | None = None) -> dict[int, int]:
    """Map every subset X of a member (``|X| <= max_size``) to ``|F(X)|``."""
    cap = F.max_size if max_size is None else max_size
    if F.n > _FAST_WIDTH:
        counts: Counter = Counter()
        for m in F.members:
            counts.update(submasks(m, cap))
        return dict(counts)
    groups = _size_groups(F)
    table: dict[int, int] = {}
    for s in range(cap + 1):
        keys = _keys_at_size(groups, s)
        if not len(keys):
            break
        uniq, cnt = np.unique(keys, return_counts=True)
        table.update(zip(uniq.tolist(), cnt.tolist()))
    return table


def max_degree_by_size(F: SetFamily, max_size: int | None = None) -> dict[int, tuple[int, int]]:
    """For each size s >= 1, the largest ``|F(X)|`` over s-sets X and the
    lexicographically least X attaining it.  Sizes with no nonempty link are
    omitted."""
    cap = F.max_size if max_size is None else max_size
    out: dict[int, tuple[int, int]] = {}
    if F.n > _FAST_WIDTH:
        by_size: dict[int, Counter] = {}
        for m in F.members:
            for x in submasks(m, cap):
                s = popcount(x)
                if s:
                    by_size.setdefault(s, Counter())[x] += 1
        for s, counts in sorted(by_size.items()):
            best = max(counts.values())
            out[s] = (best, min((x for x, c in counts.items() if c == best), key=lex_key))
        return out
    return _max_degree_groups(_size_groups(F), cap)


def _max_degree_groups(groups: dict[int, np.ndarray], cap: int) -> dict[int, tuple[int, int]]:
    out: dict[int, tuple[int, int]] = {}
    for s in range(1, cap + 1):
        keys = _keys_at_size(groups, s)
        if not len(keys):
            break
        uniq, cnt = np.unique(keys, return_counts=True)
        best = int(cnt.max())
        out[s] = (best, lex_min_same_size(uniq[cnt == best]))
    return out


class UniformLinks:
    """Fast link statistics for a uniform family on at most 64 elements.

    Keeps the member element matrix and member masks as arrays so that the
    per-size maximum degrees of any link ``F(S)`` come from array slicing
    instead of materializing the link as a family.
    """

    def __init__(self, F: SetFamily):
        if F.n > _FAST_WIDTH or F.uniform_k is None:
            raise ValueError("UniformLinks needs a nonempty uniform family on at most 64 elements")
        self.k = F.uniform_k
        self.E = F.element_matrix().astype(np.uint64)
        self.masks = np.array(F.members, dtype=np.uint64)

    def link_matrix(self, S: int) -> np.ndarray:
        s = popcount(S)
        key = np.uint64(S)
        rows = self.E[(self.masks & key) == key]
        if s == 0:
            return rows
        keep = ((key >> rows) & np.uint64(1)) == 0
        return rows[keep].reshape(len(rows), self.k - s)

    def link_max_degrees(self, S: int) -> tuple[int, dict[int, tuple[int, int]]]:
        """``(|F(S)|, max_degree_by_size(F(S)))``."""
        L = self.link_matrix(S)
        width = L.shape[1]
        if not len(L):
            return 0, {}
        return len(L), _max_degree_groups({width: L}, width)
