"""Densest-k-subgraph solvers.

Every stochastic routine takes its randomness through an explore/tweak
strategy pair, so biased and uniform sampling swap in and out without any
change to the control flow.  Deterministic comparators (greedy peeling,
exhaustive scan) live here too.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from math import comb

import numpy as np
from numba import njit

from .errors import BudgetExceededError, EmptyDistributionError, InputError
from .graph import Graph, induced_edge_count
from .sampler import uniform_explore

DEFAULT_ENUM_BUDGET = 50_000_000


@dataclass(frozen=True)
class AnnealParams:
    """Simulated-annealing controls.

    The temperature decays linearly from ``t0`` to 0 across ``steps``,
    clamped below at ``floor``.  ``min_keep`` is the minimum number of
    vertices the tweak stage leaves untouched; it must be even and smaller
    than the subset size.
    """

    t0: float = 0.01
    steps: int = 500
    min_keep: int = 6
    floor: float = 1e-12

    def __post_init__(self):
        if self.t0 <= 0:
            raise InputError(f"initial temperature must be positive, got {self.t0}")
        if self.steps < 1:
            raise InputError(f"step budget must be at least 1, got {self.steps}")
        if self.floor < 0:
            raise InputError(f"temperature floor must be nonnegative, got {self.floor}")
        if self.min_keep % 2 or self.min_keep < 2:
            raise InputError(f"min_keep must be even and at least 2, got {self.min_keep}")

    def temperature(self, step: int) -> float:
        """Temperature used during 1-based step ``step``."""
        return max(self.t0 * (1 - (step - 1) / self.steps), self.floor)


@dataclass
class RunTrace:
    """Per-run record: best-so-far edge counts, one entry per step."""

    best_edges: list[int]
    final_subset: tuple[int, ...]
    samples_used: int
    fallback_events: dict[str, int] = field(default_factory=dict)

    def best_at(self, draw: int) -> int:
        """Best-so-far after ``draw`` steps, clamped to the run length."""
        if draw < 1:
            raise InputError(f"draw index must be at least 1, got {draw}")
        return self.best_edges[min(draw, len(self.best_edges)) - 1]


def accept_proposal(delta: float, t: float, rng: np.random.Generator) -> bool:
    """Metropolis rule: accept a density change of ``delta`` with prob exp(delta/t)."""
    if delta >= 0:
        return True
    return rng.random() < math.exp(delta / t)


def _snapshot(strategy) -> dict:
    ev = getattr(strategy, "events", None)
    return dict(ev) if ev is not None else {}


def _events_since(strategy, before: dict) -> Counter:
    ev = getattr(strategy, "events", None)
    if ev is None:
        return Counter()
    return Counter({key: ev[key] - before.get(key, 0) for key in ev if ev[key] > before.get(key, 0)})


def random_search(
    g: Graph,
    k: int,
    n_samples: int,
    explorer,
    rng: np.random.Generator,
) -> RunTrace:
    """Draw ``n_samples`` subsets and keep the densest one seen.

    If the explorer reports an empty distribution, the search switches to
    uniform draws for the remainder and records the event.
    """
    if n_samples < 1:
        raise InputError(f"need at least one sample, got {n_samples}")
    before = _snapshot(explorer)
    fallbacks: Counter = Counter()
    degraded = False
    best_subset: tuple[int, ...] | None = None
    best_count = -1
    trace: list[int] = []
    for _ in range(n_samples):
        if degraded:
            s = uniform_explore(g, k, rng)
        else:
            try:
                s = explorer(rng)
            except EmptyDistributionError:
                degraded = True
                fallbacks["explore_empty_fallback"] += 1
                s = uniform_explore(g, k, rng)
        count = induced_edge_count(g, s)
        if count > best_count:
            best_count, best_subset = count, s
        trace.append(best_count)
    fallbacks.update(_events_since(explorer, before))
    return RunTrace(trace, best_subset, n_samples, dict(fallbacks))


def simulated_annealing(
    g: Graph,
    k: int,
    params: AnnealParams,
    explorer,
    tweaker,
    rng: np.random.Generator,
    observer=None,
) -> RunTrace:
    """Anneal from an explored start, tweaking and cooling once per step.

    A proposal denser than the current subset is always taken; otherwise it
    is taken with probability exp(density difference / temperature).  The
    best subset ever visited is tracked separately and returned.
    ``observer``, if given, is called as
    observer(step, current_edges, proposal_edges, accepted) for every step.
    """
    if k % 2:
        raise InputError(f"annealing needs even subset size (tweak draws), got {k}")
    if not params.min_keep < k:
        raise InputError(f"min_keep = {params.min_keep} must be below k = {k}")
    before_e, before_t = _snapshot(explorer), _snapshot(tweaker)
    fallbacks: Counter = Counter()

    try:
        current = explorer(rng)
    except EmptyDistributionError:
        fallbacks["explore_empty_fallback"] += 1
        current = uniform_explore(g, k, rng)
    pairs = k * (k - 1) / 2
    cur_count = induced_edge_count(g, current)
    best, best_count = current, cur_count

    trace: list[int] = []
    for step in range(1, params.steps + 1):
        t = params.temperature(step)
        proposal = tweaker(current, rng)
        prop_count = induced_edge_count(g, proposal)
        if prop_count > cur_count:
            accepted = True
        else:
            accepted = accept_proposal((prop_count - cur_count) / pairs, t, rng)
        if observer is not None:
            observer(step, cur_count, prop_count, accepted)
        if accepted:
            current, cur_count = proposal, prop_count
        if cur_count > best_count:
            best, best_count = current, cur_count
        trace.append(best_count)

    fallbacks.update(_events_since(explorer, before_e))
    fallbacks.update(_events_since(tweaker, before_t))
    return RunTrace(trace, best, params.steps + 1, dict(fallbacks))


def charikar_greedy(g: Graph, k: int) -> tuple[int, ...]:
    """Peel the minimum-degree vertex (ties: lowest index) until k remain."""
    if not 1 <= k <= g.n:
        raise InputError(f"k must be in [1, {g.n}], got {k}")
    alive = np.ones(g.n, dtype=bool)
    deg = g.adjacency.sum(axis=0, dtype=np.int64)
    sentinel = np.iinfo(np.int64).max
    for _ in range(g.n - k):
        v = int(np.argmin(np.where(alive, deg, sentinel)))
        alive[v] = False
        deg -= g.adjacency[v]
    return tuple(np.flatnonzero(alive).tolist())


@njit(cache=True)
def _exhaustive_scan(adj, n, k):
    c = np.arange(k)
    best = np.arange(k)
    best_count = -1
    while True:
        count = 0
        for i in range(k):
            for j in range(i + 1, k):
                if adj[c[i], c[j]]:
                    count += 1
        if count > best_count:
            best_count = count
            best = c.copy()
        i = k - 1
        while i >= 0 and c[i] == n - k + i:
            i -= 1
        if i < 0:
            break
        c[i] += 1
        for j in range(i + 1, k):
            c[j] = c[j - 1] + 1
    return best_count, best


def exhaustive_best(g: Graph, k: int, *, budget: int = DEFAULT_ENUM_BUDGET) -> tuple[tuple[int, ...], int]:
    """Ground truth by full enumeration: the densest k-subset and its edge count.

    Lex enumeration with a strict improvement test keeps the
    lexicographically smallest among ties.
    """
    if not 1 <= k <= g.n:
        raise InputError(f"k must be in [1, {g.n}], got {k}")
    total = comb(g.n, k)
    if total > budget:
        raise BudgetExceededError(
            f"C({g.n}, {k}) = {total} subsets exceeds the enumeration budget of {budget}"
        )
    adj = np.ascontiguousarray(g.adjacency.astype(np.uint8))
    count, best = _exhaustive_scan(adj, g.n, k)
    return tuple(int(v) for v in best), int(count)
