"""Simple undirected graphs: representation, generators, queries, text I/O.

Graphs are immutable once constructed.  The adjacency matrix is a
read-only boolean array with zero diagonal; symmetry and simplicity are
enforced at every construction site, so downstream code never revalidates.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .errors import GraphParseError, InputError

# Planted-instance construction constants: a 20-vertex background at edge
# probability 0.5, a 10-vertex dense part at 0.875, joined by 8 distinct
# cross edges drawn uniformly at random.
BASE_N = 20
BASE_P = 0.5
PLANTED_N = 10
PLANTED_Q = 0.875
CROSS_EDGES = 8


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("adjacency", "_fp")

    def __init__(self, adjacency: np.ndarray):
        a = np.asarray(adjacency)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InputError(f"adjacency must be square, got shape {a.shape}")
        if a.shape[0] < 1:
            raise InputError("graph needs at least one vertex")
        a = a.astype(bool)
        if a.diagonal().any():
            raise InputError("self-loops are not allowed (nonzero diagonal)")
        if not np.array_equal(a, a.T):
            raise InputError("adjacency matrix must be symmetric")
        a = a.copy()
        a.flags.writeable = False
        self.adjacency = a
        self._fp: str | None = None

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def edge_count(self) -> int:
        """Number of unordered adjacent pairs."""
        return int(np.count_nonzero(self.adjacency)) // 2

    def density(self) -> float:
        """edge_count / C(n, 2), in [0, 1].  Needs n >= 2."""
        if self.n < 2:
            raise InputError("density is undefined for a single-vertex graph")
        return self.edge_count() / (self.n * (self.n - 1) / 2)

    def degree(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise InputError(f"vertex {v} out of range [0, {self.n})")
        return int(np.count_nonzero(self.adjacency[v]))

    def degrees(self) -> np.ndarray:
        """Degree of every vertex, as an int64 vector."""
        return self.adjacency.sum(axis=0, dtype=np.int64)

    def subgraph(self, subset: tuple[int, ...]) -> "Graph":
        """Induced subgraph on the given vertex subset (order as listed)."""
        s = np.asarray(subset, dtype=np.intp)
        if s.size and (s.min() < 0 or s.max() >= self.n):
            raise InputError(f"subset {tuple(subset)} has indices outside [0, {self.n})")
        return Graph(self.adjacency[np.ix_(s, s)])

    def edges(self) -> list[tuple[int, int]]:
        """Sorted list of edges as (u, v) with u < v."""
        iu, iv = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(iu.tolist(), iv.tolist()))

    def fingerprint(self) -> str:
        """Content hash of (n, edge set); stable across runs and platforms."""
        if self._fp is None:
            h = hashlib.sha256()
            h.update(f"{self.n}:".encode())
            h.update(np.packbits(np.triu(self.adjacency, 1)).tobytes())
            self._fp = h.hexdigest()
        return self._fp

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and np.array_equal(self.adjacency, other.adjacency)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count()})"


def from_edges(n: int, edges) -> Graph:
    """Build a graph from an iterable of (u, v) pairs."""
    a = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        if u == v:
            raise InputError(f"self-loop ({u}, {v}) is not allowed")
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge ({u}, {v}) outside [0, {n})")
        a[u, v] = a[v, u] = True
    return Graph(a)


def complete_graph(n: int) -> Graph:
    return Graph(~np.eye(n, dtype=bool))


def erdos_renyi(n: int, p: float, seed) -> Graph:
    """G(n, p): each of the C(n, 2) possible edges included with probability p.

    Bit-reproducible: one uniform draw per pair (u, v), u < v, in lex order.
    """
    if not 0.0 <= p <= 1.0:
        raise InputError(f"edge probability must be in [0, 1], got {p}")
    if n < 1:
        raise InputError("n must be at least 1")
    rng = np.random.default_rng(seed)
    draws = rng.random(n * (n - 1) // 2) < p
    a = np.zeros((n, n), dtype=bool)
    iu = np.triu_indices(n, 1)
    a[iu] = draws
    return Graph(a | a.T)


def planted_instance(seed, shuffle: bool = False) -> tuple[Graph, tuple[int, ...]]:
    """Benchmark graph with a dense low-degree part hidden inside a random background.

    Construction: (i) a BASE_N-vertex background at edge probability BASE_P;
    (ii) a PLANTED_N-vertex part at edge probability PLANTED_Q; (iii) exactly
    CROSS_EDGES cross edges, each between a uniformly random background vertex
    and a uniformly random planted vertex, redrawn on collision so all pairs
    are distinct.  Returns the combined graph and the planted vertex subset
    (the highest indices unless ``shuffle`` relabels everything).
    """
    rng = np.random.default_rng(seed)
    n = BASE_N + PLANTED_N
    a = np.zeros((n, n), dtype=bool)

    base_draws = rng.random(BASE_N * (BASE_N - 1) // 2) < BASE_P
    iu = np.triu_indices(BASE_N, 1)
    a[iu] = base_draws

    planted_draws = rng.random(PLANTED_N * (PLANTED_N - 1) // 2) < PLANTED_Q
    pu = np.triu_indices(PLANTED_N, 1)
    block = np.zeros((PLANTED_N, PLANTED_N), dtype=bool)
    block[pu] = planted_draws
    a[BASE_N:, BASE_N:] = block

    crossed: set[tuple[int, int]] = set()
    while len(crossed) < CROSS_EDGES:
        u = int(rng.integers(BASE_N))
        v = BASE_N + int(rng.integers(PLANTED_N))
        if (u, v) not in crossed:
            crossed.add((u, v))
            a[u, v] = True
    a |= a.T

    subset = tuple(range(BASE_N, n))
    if shuffle:
        perm = rng.permutation(n)
        inv = np.argsort(perm)
        a = a[np.ix_(inv, inv)]
        subset = tuple(sorted(int(perm[v]) for v in subset))
    return Graph(a), subset


def read_graph(path) -> Graph:
    """Parse the text graph format.

    First significant line: vertex count n.  Each later non-empty line:
    "u v" with 0-based indices.  Lines starting with '#' are comments;
    duplicate edges are tolerated.
    """
    n: int | None = None
    edges: list[tuple[int, int]] = []
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if n is None:
                try:
                    n = int(line)
                except ValueError:
                    raise GraphParseError(f"expected vertex count, got {line!r}", lineno)
                if n < 1:
                    raise GraphParseError(f"vertex count must be positive, got {n}", lineno)
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphParseError(f"expected 'u v', got {line!r}", lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphParseError(f"non-integer vertex in {line!r}", lineno)
            if u == v:
                raise GraphParseError(f"self-loop ({u}, {v}) is not allowed", lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphParseError(f"edge ({u}, {v}) outside [0, {n})", lineno)
            edges.append((min(u, v), max(u, v)))
    if n is None:
        raise GraphParseError("file contains no vertex count")
    return from_edges(n, set(edges))


def write_graph(g: Graph, path) -> None:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_subset(path) -> tuple[int, ...]:
    """Read a vertex subset: one line of space-separated indices."""
    text = Path(path).read_text(encoding="utf-8").strip()
    if not text:
        return ()
    try:
        values = tuple(int(tok) for tok in text.split())
    except ValueError:
        raise GraphParseError(f"non-integer index in subset file {path}")
    return tuple(sorted(values))


def write_subset(subset: tuple[int, ...], path) -> None:
    Path(path).write_text(" ".join(str(v) for v in subset) + "\n", encoding="utf-8")


def induced_edge_count(g: Graph, subset) -> int:
    """Edge count of the induced subgraph, without building a Graph object."""
    s = np.asarray(subset, dtype=np.intp)
    return int(np.count_nonzero(g.adjacency[np.ix_(s, s)])) // 2


def all_subset_edge_counts(g: Graph, subsets: np.ndarray) -> np.ndarray:
    """Induced edge counts for many subsets at once (rows of an (m, k) array)."""
    sub = g.adjacency[subsets[:, :, None], subsets[:, None, :]]
    return sub.sum(axis=(1, 2)) // 2
