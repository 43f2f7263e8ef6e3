"""Ranking and unranking of fixed-size vertex subsets.

Subsets are strictly increasing tuples of vertex indices.  Two linear
orders appear in this package:

* colex order (compare largest element first) — what the dynamic
  programs in :mod:`gbs_dks.hafnian` enumerate natively;
* lex order (compare smallest element first) — the canonical order for
  weight tables and cache files.

The two are linked by reflection: mapping every vertex v to n-1-v turns
the lex order of subsets into the reversed colex order, so a colex-indexed
array over the reflected graph, read backwards, is lex-indexed over the
original graph.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np


@lru_cache(maxsize=64)
def binom_table(n: int, k: int) -> np.ndarray:
    """Table b[a, t] = C(a, t) for 0 <= a <= n, 0 <= t <= k (int64, read-only)."""
    b = np.zeros((n + 1, k + 1), dtype=np.int64)
    for a in range(n + 1):
        for t in range(min(a, k) + 1):
            b[a, t] = comb(a, t)
    b.flags.writeable = False
    return b


def colex_rank(subset: tuple[int, ...]) -> int:
    """Position of a strictly increasing subset in colex order."""
    return sum(comb(c, t + 1) for t, c in enumerate(subset))


def colex_unrank(rank: int, k: int) -> tuple[int, ...]:
    """Inverse of :func:`colex_rank` for subsets of size k."""
    out = [0] * k
    for t in range(k, 0, -1):
        # largest c with C(c, t) <= rank
        c = t - 1
        while comb(c + 1, t) <= rank:
            c += 1
        rank -= comb(c, t)
        out[t - 1] = c
    return tuple(out)


def reflect(subset: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Relabel every vertex v as n-1-v, keeping the result sorted."""
    return tuple(n - 1 - v for v in reversed(subset))


def lex_rank(subset: tuple[int, ...], n: int) -> int:
    """Position of a subset in lex order over all size-k subsets of range(n)."""
    k = len(subset)
    return comb(n, k) - 1 - colex_rank(reflect(subset, n))


def lex_unrank(rank: int, n: int, k: int) -> tuple[int, ...]:
    """Inverse of :func:`lex_rank`."""
    return reflect(colex_unrank(comb(n, k) - 1 - rank, k), n)


def lex_unrank_batch(ranks: np.ndarray, n: int, k: int) -> np.ndarray:
    """Vectorized :func:`lex_unrank`; returns an (m, k) int64 array of subsets."""
    b = binom_table(n, k)
    r = (comb(n, k) - 1) - np.asarray(ranks, dtype=np.int64)
    out = np.empty((len(r), k), dtype=np.int64)
    for t in range(k, 0, -1):
        col = b[:, t]
        c = np.searchsorted(col, r, side="right") - 1
        r = r - col[c]
        out[:, k - t] = (n - 1) - c  # reflection folds in here
    out.sort(axis=1)
    return out


def validate_subset(subset: tuple[int, ...], n: int, k: int | None = None) -> None:
    """Raise ValueError unless subset is strictly increasing within range(n)."""
    if k is not None and len(subset) != k:
        raise ValueError(f"subset has size {len(subset)}, expected {k}")
    prev = -1
    for v in subset:
        if not prev < v < n:
            raise ValueError(f"subset {subset} is not strictly increasing within [0, {n})")
        prev = v
