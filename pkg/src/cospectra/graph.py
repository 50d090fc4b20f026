"""Undirected simple graphs, G(n, p) sampling and structural surgery.

Graphs are immutable.  Vertices are ``0..n-1``; every derived graph
(giant component, core, induced subgraph) remembers the original index of
each of its vertices in :attr:`Graph.origin`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Graph",
    "RootedGraph",
    "SampleConfig",
    "sample_gnp",
    "edge_threshold",
    "trial_seed",
    "connected_components",
    "giant_component",
    "k_core",
    "complement",
    "induced_subgraph",
    "attach_rooted",
    "disjoint_union",
    "empty_graph",
    "complete_graph",
    "path_graph",
    "cycle_graph",
    "star_graph",
]


class Graph:
    """Immutable undirected simple graph.

    Neighbor lists are sorted tuples; :attr:`masks` holds the same adjacency
    as one Python int bit-row per vertex.
    """

    __slots__ = ("n", "adj", "masks", "origin", "_edges", "_hash")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), origin: Sequence[int] | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in nbrs)
        self.masks: tuple[int, ...] = tuple(sum(1 << w for w in s) for s in nbrs)
        if origin is None:
            origin = range(n)
        self.origin: tuple[int, ...] = tuple(int(x) for x in origin)
        if len(self.origin) != n:
            raise ValueError("origin map must have one entry per vertex")
        self._edges: tuple[tuple[int, int], ...] | None = None
        self._hash: int | None = None

    @classmethod
    def from_adjacency(cls, a, origin: Sequence[int] | None = None) -> "Graph":
        a = np.asarray(a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency matrix must be symmetric")
        if np.any(np.diag(a) != 0):
            raise ValueError("adjacency matrix must have zero diagonal")
        if np.any((a != 0) & (a != 1)):
            raise ValueError("adjacency matrix must be 0/1")
        iu, ju = np.nonzero(np.triu(a, 1))
        return cls(a.shape[0], zip(iu.tolist(), ju.tolist()), origin)

    # -- basic queries -------------------------------------------------

    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        if self._edges is None:
            self._edges = tuple((u, v) for u in range(self.n) for v in self.adj[u] if u < v)
        return self._edges

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.masks[u] >> v) & 1)

    def adjacency_matrix(self, dtype=np.int64) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def adjacency_rows(self) -> list[list[int]]:
        """Dense adjacency as nested lists of Python ints."""
        rows = [[0] * self.n for _ in range(self.n)]
        for u, v in self.edges():
            rows[u][v] = rows[v][u] = 1
        return rows

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm must be a permutation of range(n)")
        origin = [0] * self.n
        for v in range(self.n):
            origin[perm[v]] = self.origin[v]
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self.edges()), origin)

    def with_origin(self, origin: Sequence[int] | None = None) -> "Graph":
        return Graph(self.n, self.edges(), origin)

    # -- dunder --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.adj))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class RootedGraph:
    graph: Graph
    root: int

    def __post_init__(self):
        if not 0 <= self.root < self.graph.n:
            raise ValueError(f"root {self.root} not a vertex of a graph on {self.graph.n} vertices")

    @property
    def n(self) -> int:
        return self.graph.n

    def is_tree(self) -> bool:
        g = self.graph
        return g.m == g.n - 1 and len(connected_components(g)) == 1


@dataclass(frozen=True)
class SampleConfig:
    """Parameters of one G(n, p) draw; ``p = lam / divisor`` clamped to [0, 1]."""

    n: int
    lam: float
    seed: int
    divisor: str = "n-1"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.divisor not in ("n", "n-1"):
            raise ValueError("divisor must be 'n' or 'n-1'")

    @property
    def p(self) -> Fraction:
        """Exact edge probability (the float ``lam`` read exactly), clamped."""
        d = self.n if self.divisor == "n" else self.n - 1
        if d <= 0:
            return Fraction(0)
        p = Fraction(self.lam) / d
        return min(p, Fraction(1))


def edge_threshold(p: Fraction) -> int:
    """Integer threshold t with an edge drawn iff a raw 64-bit word is < t."""
    if p >= 1:
        return 1 << 64
    return int(p * (1 << 64))


def trial_seed(seed: int, trial: int) -> int:
    """Seed of trial ``trial`` in a run seeded by ``seed``.

    Uses numpy's SeedSequence spawn tree, so the value depends only on
    ``(seed, trial)`` and not on how trials are scheduled.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sample_gnp(config: SampleConfig) -> Graph:
    """Draw G(n, p) from a PCG64 stream seeded by ``config.seed``.

    One raw 64-bit word is consumed per unordered pair, in row-major order
    ``(0,1), (0,2), ..., (0,n-1), (1,2), ...``; the pair is an edge iff the
    word is below :func:`edge_threshold`.
    """
    n = config.n
    d = n if config.divisor == "n" else n - 1
    if d > 0 and Fraction(config.lam) / d > 1:
        warnings.warn(f"lambda={config.lam} gives p > 1 for n={n}; clamping to p = 1", stacklevel=2)
    npairs = n * (n - 1) // 2
    if npairs == 0:
        return Graph(n)
    thr = edge_threshold(config.p)
    raw = np.random.PCG64(config.seed).random_raw(npairs)
    if thr >= 1 << 64:
        hit = np.ones(npairs, dtype=bool)
    else:
        hit = raw < np.uint64(thr)
    iu, ju = np.triu_indices(n, 1)
    return Graph(n, zip(iu[hit].tolist(), ju[hit].tolist()))


# -- decomposition -----------------------------------------------------


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted vertex lists, ordered by their smallest vertex."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], [s]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
                    comp.append(w)
        comps.append(sorted(comp))
    return comps


def giant_component(g: Graph) -> Graph:
    """Induced subgraph on a largest component (ties: lowest original index)."""
    if g.n == 0:
        raise ValueError("the empty graph has no component")
    comps = connected_components(g)
    # components come ordered by smallest vertex, so max() keeps the first tie
    best = max(comps, key=len)
    return induced_subgraph(g, best)


def k_core(g: Graph, k: int) -> Graph:
    if k < 1:
        raise ValueError("k must be positive")
    deg = g.degrees()
    alive = [True] * g.n
    stack = [v for v in range(g.n) if deg[v] < k]
    for v in stack:
        alive[v] = False
    while stack:
        v = stack.pop()
        for w in g.adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] < k:
                    alive[w] = False
                    stack.append(w)
    return induced_subgraph(g, [v for v in range(g.n) if alive[v]])


# -- surgery -----------------------------------------------------------


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    edges = []
    for u in range(g.n):
        rest = full & ~g.masks[u] & ~((1 << (u + 1)) - 1)
        while rest:
            low = rest & -rest
            edges.append((u, low.bit_length() - 1))
            rest ^= low
    return Graph(g.n, edges, g.origin)


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """Subgraph induced on ``s``; new vertex i is the i-th smallest of ``s``."""
    verts = sorted(set(int(v) for v in s))
    for v in verts:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} not in graph")
    index = {v: i for i, v in enumerate(verts)}
    edges = [(index[u], index[w]) for u in verts for w in g.adj[u] if u < w and w in index]
    return Graph(len(verts), edges, [g.origin[v] for v in verts])


def _bfs_order(g: Graph, root: int) -> list[int]:
    order, seen = [root], {root}
    i = 0
    while i < len(order):
        for w in g.adj[order[i]]:
            if w not in seen:
                seen.add(w)
                order.append(w)
        i += 1
    # vertices unreachable from the root keep index order at the end
    order.extend(v for v in range(g.n) if v not in seen)
    return order


def attach_rooted(g: Graph, v: int, t: RootedGraph) -> Graph:
    """Glue a copy of ``t`` onto ``g`` by identifying ``t.root`` with ``v``.

    The non-root vertices of ``t`` are appended in BFS order from the root.
    """
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} not in graph")
    order = _bfs_order(t.graph, t.root)
    new_index = {t.root: v}
    for i, w in enumerate(order[1:]):
        new_index[w] = g.n + i
    edges = list(g.edges()) + [(new_index[a], new_index[b]) for a, b in t.graph.edges()]
    origin = list(g.origin) + [-1] * (t.graph.n - 1)
    return Graph(g.n + t.graph.n - 1, edges, origin)


def disjoint_union(*graphs: Graph) -> Graph:
    edges, off = [], 0
    for h in graphs:
        edges.extend((u + off, v + off) for u, v in h.edges())
        off += h.n
    return Graph(off, edges)


# -- small named graphs ------------------------------------------------


def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with the centre at vertex 0."""
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))
