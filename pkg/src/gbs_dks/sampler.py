"""Subgraph samplers biased toward dense regions.

The exact sampler enumerates every k-subset once, weights it by the square
of its induced perfect-matching count, and then draws by cumulative-weight
binary search — a faithful classical stand-in for a photonic sampler whose
click patterns land on vertex subsets with exactly these odds.  Graphs too
large to enumerate go through the metropolized independence chain instead.

All weights are exact integers; no floating point enters the distribution.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

import numpy as np

from .errors import BudgetExceededError, EmptyDistributionError, InputError
from .graph import Graph
from .hafnian import _mask_dp, subgraph_matching_counts
from .subsets import binom_table, lex_rank, lex_unrank, lex_unrank_batch, validate_subset

DEFAULT_TABLE_BUDGET = 50_000_000
DEFAULT_RETRY_BUDGET = 1_000
DEFAULT_PROPOSAL_BUDGET = 10_000

# In-process table reuse across samplers and optimizer repetitions.
_TABLE_MEMO: dict[tuple[str, int], "WeightTable"] = {}


@dataclass(frozen=True)
class MisParams:
    """Chain controls for metropolized independence sampling."""

    burn_in: int = 10_000
    thinning: int = 10

    def __post_init__(self):
        if self.burn_in < 0:
            raise InputError(f"burn_in must be nonnegative, got {self.burn_in}")
        if self.thinning < 1:
            raise InputError(f"thinning must be at least 1, got {self.thinning}")


@dataclass(frozen=True)
class WeightTable:
    """Exhaustive distribution over k-subsets with positive squared matching count.

    Entries sit in lex order of the subset tuples; ``ranks[i]`` is the lex
    rank of entry i, ``weights[i]`` its integer weight, and ``cum`` the
    inclusive cumulative sum used for sampling.
    """

    fingerprint: str
    n: int
    k: int
    ranks: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    cum: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.ranks)

    @property
    def total_weight(self) -> int:
        return int(self.cum[-1]) if len(self.ranks) else 0

    def subset_at(self, i: int) -> tuple[int, ...]:
        return lex_unrank(int(self.ranks[i]), self.n, self.k)

    def index_of(self, subset: tuple[int, ...]) -> int:
        """Entry index of a subset, or -1 if it carries zero weight."""
        r = lex_rank(tuple(subset), self.n)
        i = int(np.searchsorted(self.ranks, r))
        if i < len(self.ranks) and self.ranks[i] == r:
            return i
        return -1

    def weight_of(self, subset: tuple[int, ...]) -> int:
        i = self.index_of(subset)
        return int(self.weights[i]) if i >= 0 else 0

    def probabilities(self) -> np.ndarray:
        return self.weights / self.total_weight

    def subsets(self) -> np.ndarray:
        """All entry subsets as an (m, k) int64 array, in table order."""
        return lex_unrank_batch(self.ranks, self.n, self.k)


def build_weight_table(g: Graph, k: int, *, budget: int = DEFAULT_TABLE_BUDGET) -> WeightTable:
    """Enumerate all k-subsets of g and tabulate squared matching counts.

    Refuses when C(n, k) exceeds ``budget``; callers should switch to
    :func:`mis_sample` past that point.
    """
    if k % 2:
        raise InputError(f"subset size must be even, got {k}")
    if not 2 <= k <= g.n:
        raise InputError(f"subset size must be in [2, {g.n}], got {k}")
    total = comb(g.n, k)
    if total > budget:
        raise BudgetExceededError(
            f"C({g.n}, {k}) = {total} subsets exceeds the enumeration budget of "
            f"{budget}; use the MIS sampler for graphs of this size"
        )
    counts = subgraph_matching_counts(g.adjacency, k)
    nz = np.flatnonzero(counts).astype(np.int64)
    w = counts[nz]
    w = w * w
    if len(w) and int(w.max()) * len(w) >= 2**62:
        raise BudgetExceededError("total table weight would overflow 64-bit accumulation")
    return WeightTable(
        fingerprint=g.fingerprint(),
        n=g.n,
        k=k,
        ranks=nz,
        weights=w,
        cum=np.cumsum(w),
    )


def get_weight_table(
    g: Graph,
    k: int,
    *,
    budget: int = DEFAULT_TABLE_BUDGET,
    cache_dir=None,
) -> WeightTable:
    """Memoized (and optionally disk-cached) :func:`build_weight_table`."""
    key = (g.fingerprint(), k)
    if key in _TABLE_MEMO:
        return _TABLE_MEMO[key]
    table = None
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"{g.fingerprint()}-k{k}.gbswt"
        if path.exists():
            table = load_weight_table(path)
            if table.fingerprint != g.fingerprint() or table.n != g.n or table.k != k:
                raise InputError(f"cache file {path} does not match the requested graph")
    if table is None:
        table = build_weight_table(g, k, budget=budget)
        if path is not None:
            os.makedirs(cache_dir, exist_ok=True)
            save_weight_table(table, path)
    _TABLE_MEMO[key] = table
    return table


def clear_table_memo() -> None:
    _TABLE_MEMO.clear()


def save_weight_table(table: WeightTable, path) -> None:
    """Write the diff-able text cache: header plus one lex-ordered entry per line."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"GBSWT1 {table.fingerprint} {table.n} {table.k} {len(table)}\n")
        for start in range(0, len(table), 1_000_000):
            chunk = slice(start, start + 1_000_000)
            subs = lex_unrank_batch(table.ranks[chunk], table.n, table.k)
            ws = table.weights[chunk]
            f.writelines(
                " ".join(map(str, row)) + f"\t{w}\n" for row, w in zip(subs.tolist(), ws.tolist())
            )


def load_weight_table(path) -> WeightTable:
    with open(path, encoding="utf-8") as f:
        header = f.readline().split()
        if len(header) != 5 or header[0] != "GBSWT1":
            raise InputError(f"{path} is not a weight-table cache file")
        fingerprint, n, k, count = header[1], int(header[2]), int(header[3]), int(header[4])
        body = f.read()
    tokens = np.fromiter(body.split(), dtype=np.int64)
    if tokens.size != count * (k + 1):
        raise InputError(f"{path}: expected {count} entries of {k + 1} fields")
    rows = tokens.reshape(count, k + 1)
    subs, w = rows[:, :k], rows[:, k]
    # lex rank via reflected colex expansion, vectorized over all entries
    b = binom_table(n, k)
    refl = (n - 1) - subs[:, ::-1]
    ranks = comb(n, k) - 1 - b[refl, np.arange(1, k + 1)].sum(axis=1)
    if np.any(np.diff(ranks) <= 0):
        raise InputError(f"{path}: entries are not in strict lex order")
    if np.any(w < 1):
        raise InputError(f"{path}: weights must be positive")
    return WeightTable(
        fingerprint=fingerprint, n=n, k=k, ranks=ranks, weights=w, cum=np.cumsum(w)
    )


# ---------------------------------------------------------------------------
# draws


def gbs_explore(table: WeightTable, rng: np.random.Generator) -> tuple[int, ...]:
    """One subset with probability weight / total_weight."""
    if len(table) == 0:
        raise EmptyDistributionError(
            f"no {table.k}-subset of this graph has a perfect matching"
        )
    r = int(rng.integers(0, table.total_weight))
    return table.subset_at(int(np.searchsorted(table.cum, r, side="right")))


def sample_indices(table: WeightTable, size: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorized table-entry draws (indices into the table), for analysis."""
    if len(table) == 0:
        raise EmptyDistributionError("cannot sample from an empty table")
    r = rng.integers(0, table.total_weight, size=size)
    return np.searchsorted(table.cum, r, side="right")


def uniform_explore(g: Graph, k: int, rng: np.random.Generator) -> tuple[int, ...]:
    """Uniformly random k-subset of the vertex set."""
    if not 1 <= k <= g.n:
        raise InputError(f"subset size must be in [1, {g.n}], got {k}")
    return tuple(sorted(rng.choice(g.n, size=k, replace=False).tolist()))


def drop_min_degree_vertex(g: Graph, subset: tuple[int, ...]) -> tuple[int, ...]:
    """Remove the vertex with the lowest degree inside the induced subgraph.

    Ties break toward the lowest vertex index, which argmin gives for free.
    """
    s = np.asarray(subset, dtype=np.intp)
    induced_deg = g.adjacency[np.ix_(s, s)].sum(axis=1)
    drop = int(np.argmin(induced_deg))
    return tuple(v for i, v in enumerate(subset) if i != drop)


def gbs_explore_odd(
    g: Graph,
    k: int,
    rng: np.random.Generator,
    *,
    budget: int = DEFAULT_TABLE_BUDGET,
    cache_dir=None,
) -> tuple[int, ...]:
    """Odd-size variant: draw a (k+1)-subset, then drop its min-degree vertex."""
    if k % 2 == 0:
        raise InputError(f"this entry point is for odd sizes, got {k}")
    if k + 1 > g.n:
        raise InputError(f"need k+1 = {k + 1} <= n = {g.n}")
    table = get_weight_table(g, k + 1, budget=budget, cache_dir=cache_dir)
    return drop_min_degree_vertex(g, gbs_explore(table, rng))


def _induced_weight(g: Graph, subset) -> int:
    """Squared matching count of an induced subgraph, skipping revalidation."""
    s = np.asarray(subset, dtype=np.intp)
    sub = np.ascontiguousarray(g.adjacency[np.ix_(s, s)].astype(np.int64))
    h = int(_mask_dp(sub, len(s)))
    return h * h


def mis_sample(
    g: Graph,
    k: int,
    params: MisParams = MisParams(),
    rng: np.random.Generator | None = None,
    *,
    proposal_budget: int = DEFAULT_PROPOSAL_BUDGET,
    events: Counter | None = None,
):
    """Metropolized independence sampler targeting the squared-matching-count law.

    Proposals are uniform k-subsets, accepted with probability
    min(1, w(S')/w(S)).  Yields one subset per ``thinning`` steps after
    ``burn_in`` steps.  If no positive-weight state turns up within
    ``proposal_budget`` probes, the stream degrades to uniform sampling and
    the event is counted.
    """
    if k % 2:
        raise InputError(f"subset size must be even, got {k}")
    if not 2 <= k <= g.n:
        raise InputError(f"subset size must be in [2, {g.n}], got {k}")
    if rng is None:
        rng = np.random.default_rng()
    ev = events if events is not None else Counter()

    cur = None
    for _ in range(proposal_budget):
        s = uniform_explore(g, k, rng)
        w = _induced_weight(g, s)
        if w:
            cur, w_cur = s, w
            break
    if cur is None:
        ev["mis_uniform_fallback"] += 1
        while True:
            yield uniform_explore(g, k, rng)

    def step(state, weight):
        prop = uniform_explore(g, k, rng)
        w_prop = _induced_weight(g, prop)
        # u < min(1, w'/w)  <=>  u*w < w'; w'=0 can never pass since u*w >= 0
        if rng.random() * weight < w_prop:
            return prop, w_prop
        return state, weight

    for _ in range(params.burn_in):
        cur, w_cur = step(cur, w_cur)
    while True:
        for _ in range(params.thinning):
            cur, w_cur = step(cur, w_cur)
        yield cur


# ---------------------------------------------------------------------------
# tweak routines


def _finish_tweak(g, kept, replacement_size, candidates, rng, ev):
    if candidates is not None:
        return tuple(sorted(kept | set(candidates)))
    ev["tweak_retry_exhausted"] += 1
    pool = np.array([v for v in range(g.n) if v not in kept], dtype=np.intp)
    fallback = rng.choice(pool, size=replacement_size, replace=False)
    return tuple(sorted(kept | set(int(v) for v in fallback)))


def gbs_tweak(
    g: Graph,
    subset: tuple[int, ...],
    min_keep: int,
    rng: np.random.Generator,
    *,
    table: WeightTable | None = None,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
    budget: int = DEFAULT_TABLE_BUDGET,
    events: Counter | None = None,
) -> tuple[int, ...]:
    """Replace part of a candidate subset, biased toward dense material.

    Three stages: (1) keep a core of ``min_keep`` vertices drawn from the
    candidate proportionally to squared matching counts, extended by m more
    uniform survivors where m is uniform on {0, ..., k - min_keep - 1};
    (2) draw a (k - min_keep)-subset of the whole graph proportionally to
    squared matching counts and uniformly discard m of its vertices,
    redrawing while it collides with the kept set (at most ``retry_budget``
    times, then a uniform disjoint draw is substituted and counted);
    (3) return the union.  Degenerate weight tables at either stage fall
    back to uniform draws for that stage, also counted in ``events``.
    """
    k = len(subset)
    _check_tweak_args(g, subset, min_keep, k)
    ev = events if events is not None else Counter()

    induced = g.subgraph(subset)
    try:
        core_positions = gbs_explore(build_weight_table(induced, min_keep, budget=budget), rng)
    except EmptyDistributionError:
        ev["tweak_core_uniform"] += 1
        core_positions = uniform_explore(induced, min_keep, rng)
    kept = {subset[i] for i in core_positions}

    m = int(rng.integers(0, k - min_keep))
    if m:
        rest = [v for v in subset if v not in kept]
        extra = rng.choice(len(rest), size=m, replace=False)
        kept.update(rest[i] for i in extra)

    if table is None:
        table = get_weight_table(g, k - min_keep, budget=budget)
    candidates = None
    for _ in range(retry_budget):
        try:
            draw = gbs_explore(table, rng)
        except EmptyDistributionError:
            ev["tweak_replacement_uniform"] += 1
            draw = uniform_explore(g, k - min_keep, rng)
        cand = _discard_m(draw, m, rng)
        if kept.isdisjoint(cand):
            candidates = cand
            break
    return _finish_tweak(g, kept, k - min_keep - m, candidates, rng, ev)


def uniform_tweak(
    g: Graph,
    subset: tuple[int, ...],
    min_keep: int,
    rng: np.random.Generator,
    *,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
    events: Counter | None = None,
) -> tuple[int, ...]:
    """Same three-stage structure as :func:`gbs_tweak` with uniform draws."""
    k = len(subset)
    _check_tweak_args(g, subset, min_keep, k)
    ev = events if events is not None else Counter()

    induced = g.subgraph(subset)
    core_positions = uniform_explore(induced, min_keep, rng)
    kept = {subset[i] for i in core_positions}

    m = int(rng.integers(0, k - min_keep))
    if m:
        rest = [v for v in subset if v not in kept]
        extra = rng.choice(len(rest), size=m, replace=False)
        kept.update(rest[i] for i in extra)

    candidates = None
    for _ in range(retry_budget):
        draw = uniform_explore(g, k - min_keep, rng)
        cand = _discard_m(draw, m, rng)
        if kept.isdisjoint(cand):
            candidates = cand
            break
    return _finish_tweak(g, kept, k - min_keep - m, candidates, rng, ev)


def _check_tweak_args(g: Graph, subset, min_keep: int, k: int) -> None:
    validate_subset(tuple(subset), g.n)
    if min_keep % 2 or not 2 <= min_keep < k:
        raise InputError(
            f"min_keep must be even with 2 <= min_keep < {k}, got {min_keep}"
        )


def _discard_m(draw: tuple[int, ...], m: int, rng: np.random.Generator) -> tuple[int, ...]:
    if not m:
        return draw
    drop = set(rng.choice(len(draw), size=m, replace=False).tolist())
    return tuple(v for i, v in enumerate(draw) if i not in drop)


# ---------------------------------------------------------------------------
# encoding scale


def spectral_radius(g: Graph) -> float:
    """Largest adjacency eigenvalue, to LAPACK accuracy."""
    return float(np.linalg.eigvalsh(g.adjacency.astype(float))[-1])


def max_scaling(g: Graph) -> float:
    """Supremum of admissible encoding scales, 1/spectral_radius.

    An edgeless graph has spectral radius 0; the scale is then unbounded and
    reported as ``inf``.
    """
    lam = spectral_radius(g)
    return math.inf if lam <= 0 else 1.0 / lam


# ---------------------------------------------------------------------------
# strategy factories for the optimizers


def make_explorer(method: str, g: Graph, k: int, *, budget: int = DEFAULT_TABLE_BUDGET, cache_dir=None):
    """Bind an explore strategy to a graph; returns callable(rng) -> subset.

    The callable carries a ``.events`` Counter and a ``.method`` tag.
    """
    events: Counter = Counter()
    if method == "uniform":
        def explore(rng):
            return uniform_explore(g, k, rng)
    elif method == "gbs":
        table = get_weight_table(g, k + 1 if k % 2 else k, budget=budget, cache_dir=cache_dir)
        if k % 2:
            def explore(rng):
                return drop_min_degree_vertex(g, gbs_explore(table, rng))
        else:
            def explore(rng):
                return gbs_explore(table, rng)
    else:
        raise InputError(f"unknown explore method {method!r}; expected 'gbs' or 'uniform'")
    explore.events = events
    explore.method = method
    return explore


def make_tweaker(
    method: str,
    g: Graph,
    k: int,
    min_keep: int,
    *,
    budget: int = DEFAULT_TABLE_BUDGET,
    cache_dir=None,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
):
    """Bind a tweak strategy; returns callable(subset, rng) -> subset."""
    if min_keep % 2 or not 2 <= min_keep < k:
        raise InputError(f"min_keep must be even with 2 <= min_keep < {k}, got {min_keep}")
    events: Counter = Counter()
    if method == "uniform":
        def tweak(subset, rng):
            return uniform_tweak(g, subset, min_keep, rng, retry_budget=retry_budget, events=events)
    elif method == "gbs":
        table = get_weight_table(g, k - min_keep, budget=budget, cache_dir=cache_dir)
        def tweak(subset, rng):
            return gbs_tweak(
                g, subset, min_keep, rng,
                table=table, retry_budget=retry_budget, budget=budget, events=events,
            )
    else:
        raise InputError(f"unknown tweak method {method!r}; expected 'gbs' or 'uniform'")
    tweak.events = events
    tweak.method = method
    return tweak
