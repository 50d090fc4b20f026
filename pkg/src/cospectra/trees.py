"""Rooted trees: level sequences, canonical codes, cospectral swap pairs.

Rooted trees on t vertices are generated as canonical level sequences
(Beyer-Hedetniemi successor rule), which lists every rooted tree exactly
once.  Free trees are obtained from them by deduplicating on the unrooted
canonical form.
"""

from __future__ import annotations

import enum
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .graph import Graph, RootedGraph, SampleConfig, attach_rooted, connected_components, induced_subgraph, sample_gnp
from .spectral import IntPolynomial, char_poly, are_r_cospectral

__all__ = [
    "SwapMode",
    "RootedTreePair",
    "rooted_level_sequences",
    "tree_from_levels",
    "rooted_tree_code",
    "root_automorphism_count",
    "rooted_trees",
    "free_trees",
    "rooted_isomorphic",
    "battery_hosts",
    "discover_swap_pairs",
    "load_catalog",
    "catalog_pair",
]


class SwapMode(str, enum.Enum):
    COSPECTRAL = "cospectral"
    R_COSPECTRAL = "r-cospectral"


@dataclass(frozen=True)
class RootedTreePair:
    first: RootedGraph
    second: RootedGraph
    mode: SwapMode

    @property
    def t(self) -> int:
        return self.first.graph.n

    def reversed(self) -> "RootedTreePair":
        return RootedTreePair(self.second, self.first, self.mode)

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "mode": self.mode.value,
            "first": {"edges": [list(e) for e in self.first.graph.edges()], "root": self.first.root},
            "second": {"edges": [list(e) for e in self.second.graph.edges()], "root": self.second.root},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RootedTreePair":
        t = int(obj["t"])
        a = RootedGraph(Graph(t, obj["first"]["edges"]), int(obj["first"]["root"]))
        b = RootedGraph(Graph(t, obj["second"]["edges"]), int(obj["second"]["root"]))
        return cls(a, b, SwapMode(obj["mode"]))


# -- generation ----------------------------------------------------------


def rooted_level_sequences(t: int):
    """Yield level sequences (root at level 0) of all rooted trees on t vertices."""
    if t < 1:
        return
    if t <= 2:
        yield tuple(range(t))
        return
    levels = list(range(t))
    while True:
        yield tuple(levels)
        p = max((i for i in range(t) if levels[i] > 1), default=None)
        if p is None:
            return
        q = max(i for i in range(p) if levels[i] == levels[p] - 1)
        for i in range(p, t):
            levels[i] = levels[i - (p - q)]


def tree_from_levels(levels) -> RootedGraph:
    """Vertex i of the tree is position i of the preorder level sequence; root 0."""
    edges = []
    last_at = {}
    for i, lv in enumerate(levels):
        if lv > 0:
            edges.append((last_at[lv - 1], i))
        last_at[lv] = i
    return RootedGraph(Graph(len(levels), edges), 0)


def _children(g: Graph, root: int) -> dict[int, list[int]]:
    kids: dict[int, list[int]] = {root: []}
    stack = [root]
    parent = {root: -1}
    while stack:
        v = stack.pop()
        for w in g.adj[v]:
            if w != parent[v]:
                if w in parent:
                    raise ValueError("graph has a cycle through the root's component")
                parent[w] = v
                kids[v].append(w)
                kids[w] = []
                stack.append(w)
    return kids


def rooted_tree_code(g: Graph, root: int) -> str:
    """AHU string code; equal iff the rooted trees are isomorphic."""
    kids = _children(g, root)

    def code(v):
        return "(" + "".join(sorted(code(c) for c in kids[v])) + ")"

    return code(root)


def rooted_isomorphic(a: RootedGraph, b: RootedGraph) -> bool:
    return a.graph.n == b.graph.n and rooted_tree_code(a.graph, a.root) == rooted_tree_code(b.graph, b.root)


def root_automorphism_count(t: RootedGraph) -> int:
    """|Aut(T)| over automorphisms fixing the root."""
    kids = _children(t.graph, t.root)
    total = 1

    def code(v):
        nonlocal total
        cs = [code(c) for c in kids[v]]
        for mult in _multiplicities(cs):
            total *= math.factorial(mult)
        return "(" + "".join(sorted(cs)) + ")"

    code(t.root)
    return total


def _multiplicities(items):
    counts = defaultdict(int)
    for x in items:
        counts[x] += 1
    return counts.values()


def rooted_trees(t: int) -> list[RootedGraph]:
    return [tree_from_levels(lv) for lv in rooted_level_sequences(t)]


def _center_code(g: Graph) -> str:
    # unrooted canonical code: minimum rooted code over the (one or two) centres
    if g.n <= 2:
        return rooted_tree_code(g, 0) if g.n else ""
    deg = g.degrees()
    layer = [v for v in range(g.n) if deg[v] == 1]
    left = g.n
    removed = set()
    while left > 2:
        left -= len(layer)
        nxt = []
        for v in layer:
            removed.add(v)
            for w in g.adj[v]:
                if w not in removed:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    return min(rooted_tree_code(g, c) for c in layer)


def free_trees(t: int) -> list[Graph]:
    seen, out = set(), []
    for rt in rooted_trees(t):
        key = _center_code(rt.graph)
        if key not in seen:
            seen.add(key)
            out.append(rt.graph)
    return out


# -- discovery -----------------------------------------------------------


def _minus_root(t: RootedGraph) -> Graph:
    return induced_subgraph(t.graph, [v for v in range(t.graph.n) if v != t.root])


BATTERY_SIZE = 20
BATTERY_N = 8
BATTERY_LAMBDA = 3.0


@lru_cache(maxsize=None)
def battery_hosts(seed: int = 20240601) -> tuple[Graph, ...]:
    """The fixed battery of connected 8-vertex hosts for the R-cospectral test."""
    hosts = []
    k = 0
    while len(hosts) < BATTERY_SIZE:
        g = sample_gnp(SampleConfig(BATTERY_N, BATTERY_LAMBDA, seed + k))
        k += 1
        if len(connected_components(g)) == 1:
            hosts.append(g)
    return tuple(hosts)


def _passes_battery(a: RootedGraph, b: RootedGraph) -> bool:
    if not are_r_cospectral(a.graph, b.graph):
        return False
    for h in battery_hosts():
        for v in range(h.n):
            if not are_r_cospectral(attach_rooted(h, v, a), attach_rooted(h, v, b)):
                return False
    return True


def discover_swap_pairs(t: int, mode: SwapMode | str = SwapMode.COSPECTRAL, limit: int | None = None) -> list[RootedTreePair]:
    """All pairs of non-isomorphic rooted trees on t vertices usable for swaps.

    A pair qualifies when phi(T1) = phi(T2) and phi(T1 - root) = phi(T2 - root);
    by Schwenk's formula every host then gives cospectral attachments.  In
    R-cospectral mode each pair must in addition give R-cospectral
    attachments at every vertex of every battery host.
    """
    mode = SwapMode(mode)
    if t > 12:
        raise ValueError("rooted-tree enumeration is budgeted for t <= 12")
    groups: dict[tuple[IntPolynomial, IntPolynomial], list[RootedGraph]] = defaultdict(list)
    for rt in rooted_trees(t):
        groups[(char_poly(rt.graph), char_poly(_minus_root(rt)))].append(rt)
    out = []
    for key in sorted(groups, key=lambda k: (k[0].coeffs, k[1].coeffs)):
        members = groups[key]
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                a, b = members[i], members[j]
                if mode is SwapMode.R_COSPECTRAL and not _passes_battery(a, b):
                    continue
                out.append(RootedTreePair(a, b, mode))
                if limit is not None and len(out) >= limit:
                    return out
    return out


# -- shipped catalog ------------------------------------------------------


def load_catalog() -> dict:
    text = resources.files("cospectra.data").joinpath("swap_pairs.json").read_text()
    return json.loads(text)


def catalog_pair(mode: SwapMode | str = SwapMode.COSPECTRAL) -> RootedTreePair:
    """The smallest catalogued pair for ``mode``."""
    mode = SwapMode(mode)
    cat = load_catalog()
    for obj in cat["pairs"]:
        if obj["mode"] == mode.value:
            return RootedTreePair.from_json(obj)
    raise LookupError(f"no catalogued pair for mode {mode.value}")


def build_catalog(cospectral_t: int = 9, r_cospectral_t: int = 11) -> dict:
    """Rerun discovery and return the JSON-ready catalog (smallest sizes first)."""
    from . import __version__

    minimal = next(t for t in range(2, cospectral_t + 1) if discover_swap_pairs(t, SwapMode.COSPECTRAL, limit=1))
    pairs = discover_swap_pairs(cospectral_t, SwapMode.COSPECTRAL)
    pairs += discover_swap_pairs(r_cospectral_t, SwapMode.R_COSPECTRAL)
    return {
        "schema": 1,
        "provenance": {
            "generator": "cospectra.trees.discover_swap_pairs",
            "version": __version__,
            "minimal_cospectral_t": minimal,
            "battery": {"hosts": BATTERY_SIZE, "n": BATTERY_N, "lambda": BATTERY_LAMBDA, "seed": 20240601},
        },
        "pairs": [p.to_json() for p in pairs],
    }
