"""Pendant trees: detection, swaps, first-moment counts and mate enumeration.

A pendant copy of a rooted tree T in G is a vertex set S containing a root
r such that G[S] is isomorphic to T (root to root) and no vertex of S other
than r has a neighbour outside S.  Copies are identified by (S, r); two
labelings of the same set differing by an automorphism of T count once.
"""

from __future__ import annotations

import itertools
import math
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, RootedGraph, attach_rooted, connected_components, induced_subgraph
from .isomorphism import BudgetExceeded, DEFAULT_BUDGET, automorphism_moved_vertices, canonical_form
from .trees import RootedTreePair, SwapMode, _children, root_automorphism_count, rooted_tree_code
from .spectral import are_cospectral, are_r_cospectral

__all__ = [
    "PendantEmbedding",
    "InvalidEmbedding",
    "find_pendant_copies",
    "is_valid_embedding",
    "swap_pendant",
    "swap_pendants",
    "expected_pendant_count",
    "lambda_threshold",
    "shared_root_check",
    "SharedRootViolation",
    "enumerate_mates",
    "rigid_pendant_roots",
]


@dataclass(frozen=True)
class PendantEmbedding:
    """``vertices[i]`` is the host vertex playing tree vertex ``i``."""

    vertices: tuple[int, ...]
    root: int

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)


class InvalidEmbedding(ValueError):
    pass


class SharedRootViolation(AssertionError):
    """Two intersecting pendant copies with different roots were found."""


def _branch(g: Graph, r: int, c: int, cap: int) -> dict[int, int] | None:
    """BFS parent map of the component of ``c`` in ``g - r``, provided it
    hangs off ``r`` as a tree through ``c`` alone with at most ``cap`` vertices."""
    seen = {c: r}
    order = [c]
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for w in g.adj[v]:
            if w == seen[v]:
                continue
            if w == r or w in seen:
                return None  # second route back to r, or a cycle
            seen[w] = v
            order.append(w)
            if len(order) > cap:
                return None
    return seen


def _map_tree(kids_t, tv, kids_g, gv, codes_t, codes_g, out):
    out[tv] = gv
    pool = defaultdict(list)
    for c in kids_g[gv]:
        pool[codes_g[c]].append(c)
    for c in kids_t[tv]:
        _map_tree(kids_t, c, kids_g, pool[codes_t[c]].pop(), codes_t, codes_g, out)


def _codes(kids, root) -> dict[int, str]:
    codes = {}

    def code(v):
        codes[v] = "(" + "".join(sorted(code(c) for c in kids[v])) + ")"
        return codes[v]

    code(root)
    return codes


def find_pendant_copies(g: Graph, t: RootedGraph, roots=None) -> list[PendantEmbedding]:
    """All pendant copies of the rooted tree ``t`` in ``g``."""
    if not t.is_tree():
        raise ValueError("pattern must be a tree")
    tn = t.graph.n
    kids_t = _children(t.graph, t.root)
    codes_t = _codes(kids_t, t.root)
    need = Counter(codes_t[c] for c in kids_t[t.root])
    out: list[PendantEmbedding] = []
    if tn == 1:
        return [PendantEmbedding((v,), v) for v in (range(g.n) if roots is None else sorted(roots))]
    for r in range(g.n) if roots is None else sorted(roots):
        if g.degree(r) < len(kids_t[t.root]):
            continue
        avail: dict[str, list[tuple[int, list[int]]]] = defaultdict(list)
        for c in g.adj[r]:
            br = _branch(g, r, c, tn - 1)
            if br is None:
                continue
            sub = induced_subgraph(g, br)
            pos = {v: i for i, v in enumerate(sorted(br))}
            code = rooted_tree_code(sub, pos[c])
            if code in need:
                avail[code].append((c, br))
        if any(len(avail[k]) < m for k, m in need.items()):
            continue
        choices = [list(itertools.combinations(avail[k], m)) for k, m in sorted(need.items())]
        for combo in itertools.product(*choices):
            chosen = [c for group in combo for c in group]
            # host-side rooted tree, then map t onto it
            hk: dict[int, list[int]] = {r: []}
            for _, br in chosen:
                for v in br:
                    hk.setdefault(v, [])
                for v, par in br.items():
                    hk.setdefault(par, []).append(v)
            codes_g = _codes(hk, r)
            img: dict[int, int] = {}
            _map_tree(kids_t, t.root, hk, r, codes_t, codes_g, img)
            out.append(PendantEmbedding(tuple(img[i] for i in range(tn)), r))
    return out


def is_valid_embedding(g: Graph, t: RootedGraph, e: PendantEmbedding) -> bool:
    """Check both embedding invariants directly."""
    vs = e.vertices
    if len(vs) != t.graph.n or len(set(vs)) != len(vs) or e.root != vs[t.root]:
        return False
    if any(not 0 <= v < g.n for v in vs):
        return False
    s = set(vs)
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if g.has_edge(vs[i], vs[j]) != t.graph.has_edge(i, j):
                return False
    for i, v in enumerate(vs):
        if i != t.root and any(w not in s for w in g.adj[v]):
            return False
    return True


def swap_pendants(g: Graph, embeddings, pair: RootedTreePair) -> Graph:
    """Replace each given pendant copy of ``pair.first`` by ``pair.second``.

    Surviving vertices keep their relative order; new tree vertices are
    appended root by root (ascending root), each tree in BFS order.
    """
    embeddings = list(embeddings)
    drop: set[int] = set()
    for e in embeddings:
        if not is_valid_embedding(g, pair.first, e):
            raise InvalidEmbedding(f"{e} is not a pendant copy of the first tree")
        body = e.vertex_set - {e.root}
        if body & drop:
            raise InvalidEmbedding("pendant copies overlap")
        drop |= body
    keep = [v for v in range(g.n) if v not in drop]
    h = induced_subgraph(g, keep)
    index = {v: i for i, v in enumerate(keep)}
    for e in sorted(embeddings, key=lambda e: e.root):
        h = attach_rooted(h, index[e.root], pair.second)
    return h


def swap_pendant(g: Graph, e: PendantEmbedding, pair: RootedTreePair) -> Graph:
    return swap_pendants(g, [e], pair)


def expected_pendant_count(n: int, lam: float, t: RootedGraph, c_hat: float, divisor: str = "n-1") -> float:
    """Finite-n first moment of the number of pendant copies with root in the giant.

    Ordered tuples: falling factorial n^(t) times the probability that the
    t-1 tree edges are present and every other pair meeting a non-root
    vertex is absent; ``c_hat`` stands in for the chance that the root lies
    in the giant.  Dividing by the root-fixing automorphisms of T converts
    tuples into (vertex set, root) copies.
    """
    tn = t.graph.n
    if tn < 2:
        raise ValueError("tree needs at least 2 vertices")
    if tn > n:
        raise ValueError("tree larger than the graph")
    if not 0 <= c_hat <= 1:
        raise ValueError("c_hat must lie in [0, 1]")
    d = n if divisor == "n" else n - 1
    p = min(Fraction(lam) / d, Fraction(1)) if d > 0 else Fraction(0)
    falling = math.perm(n, tn)
    absent = (tn - 1) * (n - tn) + math.comb(tn, 2) - (tn - 1)
    prob = p ** (tn - 1) * (1 - p) ** absent
    return float(falling * prob) * c_hat / root_automorphism_count(t)


def lambda_threshold(n: float, t: int) -> float:
    """ln(n)/(t-1) + ln(ln(n)); callers subtract their own slack h(n)."""
    if n < 3 or t < 2:
        raise ValueError("need n >= 3 and t >= 2")
    return math.log(n) / (t - 1) + math.log(math.log(n))


def shared_root_check(g: Graph, t: RootedGraph) -> bool:
    """True iff any two intersecting pendant copies of ``t`` share their root.

    A counterexample is reported as :class:`SharedRootViolation`.
    """
    if len(connected_components(g)) != 1 or g.n < 2 * t.graph.n:
        raise ValueError("need a connected graph with at least 2t vertices")
    copies = find_pendant_copies(g, t)
    for a, b in itertools.combinations(copies, 2):
        if a.vertex_set & b.vertex_set and a.root != b.root:
            raise SharedRootViolation(f"pendant copies {a} and {b} intersect with distinct roots")
    return True


def rigid_pendant_roots(g: Graph, pair: RootedTreePair, budget: int = DEFAULT_BUDGET):
    """``(embedding per rigid root, certified)``.

    Roots moved by an automorphism of ``g`` are dropped; when the
    automorphism search runs out of budget no root can be certified rigid.
    """
    first: dict[int, PendantEmbedding] = {}
    for e in find_pendant_copies(g, pair.first):
        first.setdefault(e.root, e)
    try:
        moved = automorphism_moved_vertices(g, budget)
    except BudgetExceeded:
        return {}, False
    return {r: e for r, e in sorted(first.items()) if r not in moved}, True


def enumerate_mates(g: Graph, pair: RootedTreePair, max_count: int | None = None,
                    budget: int = DEFAULT_BUDGET) -> list[Graph]:
    """The graphs G_S for subsets S of rigid pendant roots, deduplicated.

    ``S`` ranges over subsets in order of size then lexicographically, so
    ``[g]`` (S empty) always comes first.
    """
    rigid, certified = rigid_pendant_roots(g, pair, budget)
    if not certified:
        warnings.warn("automorphism budget exhausted; no pendant root certified rigid", stacklevel=2)
    roots = sorted(rigid)
    check = are_r_cospectral if pair.mode is SwapMode.R_COSPECTRAL else are_cospectral
    seen: set[bytes] = set()
    out: list[Graph] = []
    for size in range(len(roots) + 1):
        for sub in itertools.combinations(roots, size):
            h = swap_pendants(g, [rigid[r] for r in sub], pair)
            if not check(g, h):
                raise AssertionError("pendant swap broke cospectrality")
            key = canonical_form(h, budget=budget)
            if key in seen:
                continue
            seen.add(key)
            out.append(h)
            if max_count is not None and len(out) >= max_count:
                return out
    return out
