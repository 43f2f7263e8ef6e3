"""Exact hafnians of symmetric integer matrices, and matching/edge bounds.

For a 0/1 adjacency matrix the hafnian equals the number of perfect
matchings of the graph, which is what every caller in this package needs.
Two independent routes are provided:

* :func:`hafnian_pairings` enumerates all (d-1)!! pairings — the slow,
  obviously-correct oracle used to validate everything else;
* :func:`hafnian_fast` runs a subset dynamic program in O(d * 2^d) integer
  operations, compiled with numba.

:func:`subgraph_matching_counts` batches the same recurrence across every
k-subset of a vertex set at once, sharing sub-results between overlapping
subsets; it is the kernel behind exhaustive weight tables.
"""

from __future__ import annotations

from math import comb, factorial, log, exp

import numpy as np
from numba import njit

from .errors import InputError
from .subsets import binom_table

# 2^24 int64 DP states is ~134 MB; beyond that the mask DP is not sensible.
MAX_FAST_DIM = 24


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"matrix must be square, got shape {a.shape}")
    a = a.astype(np.int64)
    if not np.array_equal(a, a.T):
        raise InputError("matrix must be symmetric")
    return a


def hafnian_pairings(m) -> int:
    """Sum over all perfect pairings of the product of matched entries.

    Exact integer arithmetic; exponential in the dimension.  Odd dimension
    gives 0 (no pairing exists), dimension 0 gives 1 (empty product).
    """
    a = _as_matrix(m)
    d = a.shape[0]
    if d % 2:
        return 0

    def rec(rem: list[int]) -> int:
        if not rem:
            return 1
        i = rem[0]
        total = 0
        for pos in range(1, len(rem)):
            aij = a[i, rem[pos]]
            if aij:
                total += int(aij) * rec(rem[1:pos] + rem[pos + 1:])
        return total

    return rec(list(range(d)))


@njit(cache=True)
def _mask_dp(a, d):
    # f[mask] = hafnian of the submatrix on the vertices in mask; masks with
    # odd popcount inherit 0 automatically because single vertices get 0.
    f = np.zeros(1 << d, np.int64)
    f[0] = 1
    for mask in range(1, 1 << d):
        low = mask & (-mask)
        i = 0
        t = low
        while t > 1:
            t >>= 1
            i += 1
        acc = 0
        m2 = mask ^ low
        while m2:
            lj = m2 & (-m2)
            j = 0
            t = lj
            while t > 1:
                t >>= 1
                j += 1
            m2 ^= lj
            if a[i, j] != 0:
                acc += a[i, j] * f[mask ^ low ^ lj]
        f[mask] = acc
    return f[(1 << d) - 1]


def hafnian_fast(m) -> int:
    """Same value as :func:`hafnian_pairings`, in O(d * 2^d) operations.

    Exact for 0/1 matrices up to dimension MAX_FAST_DIM; general integer
    entries are supported but large magnitudes can overflow 64-bit
    intermediates, which is outside this package's use.
    """
    a = _as_matrix(m)
    d = a.shape[0]
    if d % 2:
        return 0
    if d == 0:
        return 1
    if d > MAX_FAST_DIM:
        raise InputError(f"dimension {d} exceeds the mask-DP limit of {MAX_FAST_DIM}")
    return int(_mask_dp(np.ascontiguousarray(a), d))


@njit(cache=True)
def _level_up(adj, prev, out, s, binom):
    # Perfect-matching counts for all size-s subsets in colex order, given the
    # size-(s-2) level.  The minimum element c[0] must be matched to some c[t];
    # the colex rank of the remainder is pref + suff constructed from the
    # binomial expansion of subset ranks.
    ns = out.shape[0]
    c = np.arange(s)
    suff = np.empty(s + 1, np.int64)
    for r in range(ns):
        suff[s] = 0
        for u in range(s - 1, 0, -1):
            suff[u] = suff[u + 1] + binom[c[u], u - 1]
        acc = 0
        pref = 0
        a0 = c[0]
        for t in range(1, s):
            if adj[a0, c[t]]:
                acc += prev[pref + suff[t + 1]]
            pref += binom[c[t], t]
        out[r] = acc
        i = 0
        while i < s - 1 and c[i] + 1 == c[i + 1]:
            c[i] = i
            i += 1
        c[i] += 1


def subgraph_matching_counts(adjacency: np.ndarray, k: int) -> np.ndarray:
    """Perfect-matching count of every k-subset's induced subgraph.

    Returns an int64 array of length C(n, k) indexed by the lex rank of the
    subset (see :mod:`gbs_dks.subsets`).  k must be even.  Counts for all
    even sizes below k are computed level by level and shared, so the whole
    table costs far less than C(n, k) independent hafnians.
    """
    a = np.asarray(adjacency)
    n = a.shape[0]
    if k % 2 or not 2 <= k <= n:
        raise InputError(f"subset size must be even and within [2, {n}], got {k}")
    # Run the colex-ordered DP on the reflected graph (v -> n-1-v); reversing
    # the final level then yields lex order on the original labels.
    refl = np.ascontiguousarray(a[::-1, ::-1].astype(np.uint8))
    binom = binom_table(n, k)
    prev = np.ones(1, np.int64)
    for s in range(2, k + 1, 2):
        out = np.empty(comb(n, s), np.int64)
        _level_up(refl, prev, out, s, binom)
        prev = out
    return prev[::-1]


def double_factorial(n: int) -> int:
    """n!! for n >= -1 (the -1 and 0 cases are the empty product, 1)."""
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def pm_upper_bound(vertices: int, edges: int) -> float:
    """Largest possible perfect-matching count of a graph with the given size.

    For a graph on 2m vertices with l edges the count is at most
    (q!)^((m-a)/q) * ((q+1)!)^(a/(q+1)) where q = floor(l/m) and a = l - m*q.
    Fewer than m edges cannot support any perfect matching, so the bound is 0
    there.  Monotonically non-decreasing in ``edges`` for fixed ``vertices``.
    """
    if vertices <= 0 or vertices % 2:
        raise InputError(f"vertex count must be positive and even, got {vertices}")
    m = vertices // 2
    if not 0 <= edges <= m * (2 * m - 1):
        raise InputError(f"edge count {edges} impossible on {vertices} vertices")
    if edges < m:
        return 0.0
    q, alpha = divmod(edges, m)
    value = log(factorial(q)) * (m - alpha) / q
    if alpha:
        value += log(factorial(q + 1)) * alpha / (q + 1)
    return exp(value)


def min_edges_for_pm(vertices: int, pm_count: int) -> int:
    """Smallest edge count whose bound admits ``pm_count`` perfect matchings.

    Valid because :func:`pm_upper_bound` is monotone in the edge count: any
    graph with this many matchings has at least the returned number of edges.
    """
    if pm_count < 1:
        raise InputError(f"matching count must be at least 1, got {pm_count}")
    if pm_count > double_factorial(vertices - 1):
        raise InputError(
            f"{pm_count} exceeds the maximum of {double_factorial(vertices - 1)} "
            f"perfect matchings on {vertices} vertices"
        )
    m = vertices // 2
    # 1e-12 relative slack absorbs float roundoff in the log/exp evaluation.
    target = pm_count * (1.0 - 1e-12)
    for edges in range(m, m * (2 * m - 1) + 1):
        if pm_upper_bound(vertices, edges) >= target:
            return edges
    raise AssertionError("unreachable: bound at the complete graph covers every legal count")
