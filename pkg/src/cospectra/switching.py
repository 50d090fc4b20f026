"""Orthogonal switching: Godsil-McKay sets, conjugation, local verifiers.

A switch is conjugation of the adjacency matrix by ``diag(Q, -I, I)`` with
the switch vertices first, then the negated vertices, then the rest.  All
matrix work is in exact rationals.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import Graph, connected_components, cycle_graph, disjoint_union, empty_graph, path_graph
from .isomorphism import is_isomorphic

__all__ = [
    "OrthogonalSwitch",
    "NonGraphResult",
    "TheoremViolation",
    "gm_q_matrix",
    "gm_switch",
    "GMSet",
    "gm_find_sets",
    "apply_switch",
    "NeighborhoodGraph",
    "neighborhood_graph",
    "subgraph_switch_check",
    "is_disjoint_cycles",
    "DenseWitness",
    "dense_small_subgraph",
    "PathsCyclesMultiset",
    "pc_invariant",
    "pc_graph",
    "pc_cospectral_pair",
    "union_cycles_switch_isomorphism",
    "gm_pendant_example",
]

QMatrix = tuple[tuple[Fraction, ...], ...]


class NonGraphResult(ValueError):
    """The conjugated matrix is not the adjacency matrix of a simple graph."""


class TheoremViolation(AssertionError):
    """A computed instance contradicts a statement that should always hold."""


def _is_orthogonal(q: QMatrix) -> bool:
    m = len(q)
    for i in range(m):
        for j in range(i, m):
            dot = sum(q[t][i] * q[t][j] for t in range(m))
            if dot != (1 if i == j else 0):
                return False
    return True


def _is_permutation(q: QMatrix) -> bool:
    return all(sorted(row) == [0] * (len(row) - 1) + [1] for row in q) and all(
        sorted(col) == [0] * (len(col) - 1) + [1] for col in zip(*q)
    )


@dataclass(frozen=True)
class OrthogonalSwitch:
    q: QMatrix
    switch_vertices: tuple[int, ...]
    negated_vertices: frozenset[int] = frozenset()
    level: int = field(init=False)

    def __post_init__(self):
        q = tuple(tuple(Fraction(x) for x in row) for row in self.q)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "switch_vertices", tuple(int(v) for v in self.switch_vertices))
        object.__setattr__(self, "negated_vertices", frozenset(int(v) for v in self.negated_vertices))
        m = len(q)
        if any(len(row) != m for row in q):
            raise ValueError("Q must be square")
        if m != len(self.switch_vertices):
            raise ValueError("Q size does not match the number of switch vertices")
        if len(set(self.switch_vertices)) != m:
            raise ValueError("switch vertices must be distinct")
        if self.negated_vertices & set(self.switch_vertices):
            raise ValueError("negated vertices must be disjoint from the switch vertices")
        if not _is_orthogonal(q):
            raise ValueError("Q is not orthogonal")
        if _is_permutation(q):
            raise ValueError("Q is a permutation matrix")
        level = 1
        for row in q:
            for x in row:
                level = level * x.denominator // math.gcd(level, x.denominator)
        object.__setattr__(self, "level", level)

    @property
    def m(self) -> int:
        return len(self.q)

    def to_json(self) -> dict:
        den = self.level
        return {
            "m": self.m,
            "q_num": [[int(x * den) for x in row] for row in self.q],
            "q_den": den,
            "vertices": list(self.switch_vertices),
            "negated": sorted(self.negated_vertices),
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> "OrthogonalSwitch":
        if isinstance(obj, str):
            obj = json.loads(obj)
        den = int(obj["q_den"])
        if den <= 0:
            raise ValueError("q_den must be positive")
        q = [[Fraction(int(x), den) for x in row] for row in obj["q_num"]]
        if len(q) != int(obj["m"]):
            raise ValueError("m does not match q_num")
        return cls(tuple(map(tuple, q)), tuple(obj["vertices"]), frozenset(obj.get("negated", [])))


def gm_q_matrix(k: int) -> QMatrix:
    """(1/k) [[J - kI, J], [J, J - kI]], i.e. (1/k) J_{2k} - I_{2k}."""
    if k < 2:
        raise ValueError("k must be at least 2 (k = 1 gives a permutation)")
    m = 2 * k
    return tuple(tuple(Fraction(1, k) - (1 if i == j else 0) for j in range(m)) for i in range(m))


def gm_switch(x: Sequence[int]) -> OrthogonalSwitch:
    if len(x) % 2:
        raise ValueError("a Godsil-McKay set has even size")
    return OrthogonalSwitch(gm_q_matrix(len(x) // 2), tuple(x))


# -- conjugation ---------------------------------------------------------


def apply_switch(g: Graph, s: OrthogonalSwitch) -> Graph:
    """Conjugate A by diag(Q, -I, I); vertex indices of ``g`` are kept."""
    xs = s.switch_vertices
    for v in itertools.chain(xs, s.negated_vertices):
        if not 0 <= v < g.n:
            raise ValueError(f"switch vertex {v} not in graph")
    q = s.q
    m = len(xs)
    xset = set(xs)
    sign = [(-1 if v in s.negated_vertices else 1) for v in range(g.n)]
    new_edges = [
        (u, w) for u, w in g.edges()
        if u not in xset and w not in xset and sign[u] * sign[w] == 1
    ]
    for u, w in g.edges():
        if u not in xset and w not in xset and sign[u] * sign[w] == -1:
            raise NonGraphResult(f"edge ({u}, {w}) between negated and fixed vertices becomes -1")
    # X-X block: Q^T A_XX Q
    axx = [[1 if g.has_edge(a, b) else 0 for b in xs] for a in xs]
    aq = [[sum(axx[i][t] * q[t][j] for t in range(m)) for j in range(m)] for i in range(m)]
    for i in range(m):
        for j in range(i, m):
            val = sum(q[t][i] * aq[t][j] for t in range(m))
            if i == j:
                if val != 0:
                    raise NonGraphResult(f"diagonal entry {val} at switch vertex {xs[i]}")
            elif val == 1:
                new_edges.append((xs[i], xs[j]))
            elif val != 0:
                raise NonGraphResult(f"entry {val} between switch vertices {xs[i]}, {xs[j]}")
    # X-rest block: sign(v) * Q^T a_v for each outside vertex v
    for v in range(g.n):
        if v in xset:
            continue
        col = [1 if g.has_edge(a, v) else 0 for a in xs]
        if not any(col):
            continue
        for i in range(m):
            val = sign[v] * sum(q[t][i] * col[t] for t in range(m))
            if val == 1:
                new_edges.append((xs[i], v))
            elif val != 0:
                raise NonGraphResult(f"entry {val} between {xs[i]} and {v}")
    return Graph(g.n, new_edges, g.origin)


# -- Godsil-McKay set search ---------------------------------------------


@dataclass(frozen=True)
class GMSet:
    vertices: tuple[int, ...]
    halves: tuple[tuple[int, ...], tuple[int, ...]]

    def switch(self) -> OrthogonalSwitch:
        return gm_switch(self.halves[0] + self.halves[1])


def _gm_ok(g: Graph, xs: Sequence[int], k: int) -> bool:
    xmask = 0
    for v in xs:
        xmask |= 1 << v
    degs = {bin(g.masks[v] & xmask).count("1") for v in xs}
    if len(degs) != 1:
        return False
    outside = 0
    for v in xs:
        outside |= g.masks[v]
    outside &= ~xmask
    while outside:
        low = outside & -outside
        v = low.bit_length() - 1
        outside ^= low
        c = bin(g.masks[v] & xmask).count("1")
        if c != k and c != 2 * k:
            return False
    return True


def _switch_changes(g: Graph, xs: Sequence[int], k: int) -> bool:
    # the switch is the identity iff no outside vertex has exactly k neighbours in X
    xmask = sum(1 << v for v in xs)
    for v in range(g.n):
        if not xmask >> v & 1 and bin(g.masks[v] & xmask).count("1") == k:
            return True
    return False


def gm_find_sets(g: Graph, k: int, limit: int | None = 100, nontrivial: bool = False) -> list[GMSet]:
    """Sets X of size 2k with G[X] regular and every outside vertex seeing 0, k or 2k of X.

    Since (1/k) J - I commutes with every permutation of X, any split of X
    into two halves realises the same switch; the halves returned are the
    first and last k vertices in index order.  With ``nontrivial``, sets
    on which the switch acts as the identity are skipped.

    Search: X grows from its smallest vertex as a set that stays connected
    through edges or common neighbours.  An outside vertex with a count
    outside {0, k, 2k} forces one of its neighbours into X; closed pieces
    that are far apart (no edges, no common neighbours) are combined.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    size = 2 * k
    found: dict[frozenset, None] = {}
    masks = g.masks
    n = g.n
    two_hop = []
    for v in range(n):
        reach = masks[v]
        nb = masks[v]
        while nb:
            low = nb & -nb
            reach |= masks[low.bit_length() - 1]
            nb ^= low
        two_hop.append(reach & ~(1 << v))

    pieces_by_size: dict[int, set[frozenset]] = {s: set() for s in range(1, size + 1)}

    def bad_vertex(xmask: int) -> int | None:
        out = 0
        m = xmask
        while m:
            low = m & -m
            out |= masks[low.bit_length() - 1]
            m ^= low
        out &= ~xmask
        best = None
        while out:
            low = out & -out
            v = low.bit_length() - 1
            out ^= low
            c = bin(masks[v] & xmask).count("1")
            if c not in (0, k, 2 * k):
                if best is None or v < best:
                    best = v
        return best

    def grow(xmask: int, root: int, budget: list[int]):
        budget[0] -= 1
        if budget[0] < 0:
            return
        cnt = bin(xmask).count("1")
        key = frozenset(v for v in range(n) if xmask >> v & 1)
        if cnt >= 1 and key not in pieces_by_size[cnt]:
            pieces_by_size[cnt].add(key)
        else:
            return
        if cnt == size:
            return
        b = bad_vertex(xmask)
        if b is not None:
            cand = (masks[b] | (1 << b)) & ~xmask
        else:
            cand = 0
            m = xmask
            while m:
                low = m & -m
                cand |= two_hop[low.bit_length() - 1]
                m ^= low
            cand &= ~xmask
        cand &= ~((1 << root) - 1)  # root stays the minimum
        while cand:
            low = cand & -cand
            cand ^= low
            grow(xmask | low, root, budget)

    for r in range(n):
        grow(1 << r, r, [200_000])

    def accept(vs: frozenset):
        xs = sorted(vs)
        if vs in found or not _gm_ok(g, xs, k):
            return
        if nontrivial and not _switch_changes(g, xs, k):
            return
        found[vs] = None

    for piece in sorted(pieces_by_size[size], key=sorted):
        accept(piece)
    # combine mutually far pieces whose sizes add up to 2k
    closed = {s: [p for p in sorted(pieces_by_size[s], key=sorted) if _closed(g, p, k)] for s in range(1, size)}
    for combo_sizes in _partitions(size):
        if len(combo_sizes) < 2:
            continue
        lists = [closed[s] for s in combo_sizes]
        for parts in itertools.product(*lists):
            allv = frozenset().union(*parts)
            if len(allv) != size:
                continue
            if any(_near(g, a, b, two_hop) for a, b in itertools.combinations(parts, 2)):
                continue
            accept(allv)
            if limit is not None and len(found) >= limit * 4:
                break
    out = []
    for vs in sorted(found, key=lambda s: sorted(s)):
        xs = tuple(sorted(vs))
        out.append(GMSet(xs, (xs[:k], xs[k:])))
        if limit is not None and len(out) >= limit:
            break
    return out


def _closed(g: Graph, piece: frozenset, k: int) -> bool:
    # every outside vertex sees 0 or k of the piece, and the piece is regular
    pm = sum(1 << v for v in piece)
    degs = {bin(g.masks[v] & pm).count("1") for v in piece}
    if len(degs) != 1:
        return False
    out = 0
    for v in piece:
        out |= g.masks[v]
    out &= ~pm
    while out:
        low = out & -out
        v = low.bit_length() - 1
        out ^= low
        if bin(g.masks[v] & pm).count("1") != k:
            return False
    return True


def _near(g: Graph, a: frozenset, b: frozenset, two_hop) -> bool:
    bm = sum(1 << v for v in b)
    return any(two_hop[v] & bm for v in a)


def _partitions(total: int, max_part: int | None = None):
    if max_part is None:
        max_part = total
    if total == 0:
        yield []
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in _partitions(total - first, first):
            yield [first] + rest


# -- neighbourhood graphs and local checks --------------------------------


@dataclass(frozen=True)
class NeighborhoodGraph:
    graph: Graph
    x_set: frozenset[int]
    boundary: frozenset[int]
    index: tuple[int, ...]  # local vertex i is host vertex index[i]


def neighborhood_graph(g: Graph, x: Iterable[int]) -> NeighborhoodGraph:
    """Subgraph on X and N(X) keeping exactly the edges that meet X."""
    xs = set(int(v) for v in x)
    boundary = set()
    for v in xs:
        boundary.update(w for w in g.adj[v] if w not in xs)
    verts = sorted(xs | boundary)
    pos = {v: i for i, v in enumerate(verts)}
    edges = [(pos[u], pos[w]) for u, w in g.edges() if u in xs or w in xs]
    return NeighborhoodGraph(Graph(len(verts), edges, verts), frozenset(xs), frozenset(boundary), tuple(verts))


def subgraph_switch_check(g: Graph, h: Graph, s: OrthogonalSwitch, y: Iterable[int],
                          f: Iterable[Sequence[int]] = ()) -> bool:
    """Does the switch restricted to X and Y turn G[X u Y] - F into H[X u Y] - F?"""
    xs = s.switch_vertices
    ys = sorted(set(int(v) for v in y))
    if set(ys) & set(xs):
        raise ValueError("Y must be disjoint from the switch set")
    fset = {(min(a, b), max(a, b)) for a, b in f}
    if any(a in xs or b in xs for a, b in fset):
        raise ValueError("F may not contain edges meeting the switch set")
    verts = sorted(set(xs) | set(ys))
    pos = {v: i for i, v in enumerate(verts)}

    def local(graph: Graph) -> Graph:
        es = [(pos[a], pos[b]) for a, b in graph.edges() if a in pos and b in pos and (a, b) not in fset]
        return Graph(len(verts), es)

    gl, hl = local(g), local(h)
    sl = OrthogonalSwitch(s.q, tuple(pos[v] for v in xs), frozenset(pos[v] for v in s.negated_vertices if v in pos))
    try:
        return apply_switch(gl, sl) == hl
    except NonGraphResult:
        return False


def is_disjoint_cycles(g: Graph) -> bool:
    return g.n > 0 and all(d == 2 for d in g.degrees())


@dataclass(frozen=True)
class DenseWitness:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    @property
    def excess(self) -> int:
        return len(self.edges) - len(self.vertices)


def _short_cycles(g: Graph, max_len: int) -> list[tuple[frozenset, frozenset]]:
    """Simple cycles closed by non-tree edges of BFS trees, length <= max_len."""
    seen: set[frozenset] = set()
    out = []
    for s in range(g.n):
        parent = {s: -1}
        depth = {s: 0}
        q = deque([s])
        while q:
            u = q.popleft()
            if 2 * depth[u] + 1 > max_len:
                break
            for w in g.adj[u]:
                if w not in parent:
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    q.append(w)
                elif w != parent[u] and (depth[w] >= depth[u]):
                    # paths from u and w to their meeting point
                    pu, pw = [u], [w]
                    a, b = u, w
                    while a != b:
                        if depth[a] >= depth[b]:
                            a = parent[a]
                            pu.append(a)
                        else:
                            b = parent[b]
                            pw.append(b)
                    cyc = pu + pw[-2::-1]
                    if len(cyc) > max_len or len(cyc) < 3:
                        continue
                    es = frozenset((min(cyc[i], cyc[(i + 1) % len(cyc)]), max(cyc[i], cyc[(i + 1) % len(cyc)]))
                                   for i in range(len(cyc)))
                    if es not in seen:
                        seen.add(es)
                        out.append((frozenset(cyc), es))
    return out


def dense_small_subgraph(g: Graph, v_bound: int) -> DenseWitness | None:
    """A connected subgraph on <= v_bound vertices with more edges than vertices.

    Starts from short cycles C0 and grows breadth-first away from C0 until a
    second closing edge appears; the witness is C0 plus the two tree paths
    and the closing edge.  The smallest witness found is returned.
    """
    if v_bound < 3:
        raise ValueError("v_bound must be at least 3")
    best: DenseWitness | None = None
    for cverts, cedges in sorted(_short_cycles(g, v_bound), key=lambda c: len(c[0])):
        if best is not None and len(cverts) + 1 >= len(best.vertices):
            break
        parent = {v: None for v in cverts}
        depth = {v: 0 for v in cverts}
        q = deque(sorted(cverts))
        found = None
        while q and found is None:
            u = q.popleft()
            for w in g.adj[u]:
                e = (min(u, w), max(u, w))
                if e in cedges or parent.get(u) == w:
                    continue
                if w in depth:
                    found = (u, w)
                    break
                if len(cverts) + depth[u] + 1 > v_bound:
                    continue
                parent[w] = u
                depth[w] = depth[u] + 1
                q.append(w)
        if found is None:
            continue
        u, w = found
        vs, es = set(cverts), set(cedges)
        es.add((min(u, w), max(u, w)))
        for a in (u, w):
            while parent[a] is not None:
                vs.add(a)
                es.add((min(a, parent[a]), max(a, parent[a])))
                a = parent[a]
        if len(vs) <= v_bound and (best is None or len(vs) < len(best.vertices)):
            best = DenseWitness(frozenset(vs), frozenset(es))
    return best


# -- paths and cycles ------------------------------------------------------


@dataclass(frozen=True)
class PathsCyclesMultiset:
    """``cycles[i]`` copies of C_i (i >= 3), ``paths[j]`` copies of P_j (j >= 1 vertices)."""

    cycles: tuple[tuple[int, int], ...] = ()
    paths: tuple[tuple[int, int], ...] = ()

    @classmethod
    def make(cls, cycles: dict[int, int] | None = None, paths: dict[int, int] | None = None):
        cycles = {int(i): int(a) for i, a in (cycles or {}).items() if a}
        paths = {int(j): int(b) for j, b in (paths or {}).items() if b}
        if any(i < 3 for i in cycles) or any(j < 1 for j in paths):
            raise ValueError("cycles need length >= 3 and paths >= 1 vertex")
        if any(a < 0 for a in cycles.values()) or any(b < 0 for b in paths.values()):
            raise ValueError("counts must be non-negative")
        return cls(tuple(sorted(cycles.items())), tuple(sorted(paths.items())))

    def a(self, i: int) -> int:
        return dict(self.cycles).get(i, 0)

    def b(self, j: int) -> int:
        return dict(self.paths).get(j, 0)

    @property
    def s(self) -> int:
        return max([i for i, _ in self.cycles] + [j for j, _ in self.paths] + [0])

    @classmethod
    def of_graph(cls, g: Graph) -> "PathsCyclesMultiset":
        if any(d > 2 for d in g.degrees()):
            raise ValueError("graph has a vertex of degree > 2")
        cycles: dict[int, int] = {}
        paths: dict[int, int] = {}
        for comp in connected_components(g):
            edges = sum(g.degree(v) for v in comp) // 2
            if edges == len(comp):
                cycles[len(comp)] = cycles.get(len(comp), 0) + 1
            else:
                paths[len(comp)] = paths.get(len(comp), 0) + 1
        return cls.make(cycles, paths)


def pc_invariant(m: PathsCyclesMultiset, s: int | None = None) -> list[int]:
    """(2 a_{2i} + b_{i-1}) for i = 1..s+1, with b_0 = 0."""
    s = m.s if s is None else s
    return [2 * m.a(2 * i) + (m.b(i - 1) if i > 1 else 0) for i in range(1, s + 2)]


def pc_graph(m: PathsCyclesMultiset) -> Graph:
    parts = []
    for i, a in m.cycles:
        parts += [cycle_graph(i)] * a
    for j, b in m.paths:
        parts += [path_graph(j)] * b
    return disjoint_union(*parts) if parts else empty_graph(0)


def pc_cospectral_pair(n: int) -> tuple[Graph, Graph]:
    """(C_{2n} + 2 P_1, C_4 + 2 P_{n-1})."""
    if n < 3:
        raise ValueError("n must be at least 3")
    a = PathsCyclesMultiset.make({2 * n: 1}, {1: 2})
    b = PathsCyclesMultiset.make({4: 1}, {n - 1: 2})
    return pc_graph(a), pc_graph(b)


def union_cycles_switch_isomorphism(g: Graph, s: OrthogonalSwitch) -> bool:
    """Switch ``g`` where the neighbourhood graph is a union of cycles; expect an isomorphic result."""
    if len(connected_components(g)) != 1:
        raise ValueError("graph must be connected")
    if min(g.degrees(), default=0) < 2:
        raise ValueError("graph must have minimum degree at least 2")
    if not is_disjoint_cycles(neighborhood_graph(g, s.switch_vertices).graph):
        raise ValueError("neighbourhood graph of the switch set is not a union of cycles")
    h = apply_switch(g, s)
    if not is_isomorphic(g, h):
        raise TheoremViolation("switching with a cycle-union neighbourhood graph gave a non-isomorphic graph")
    return True


def gm_pendant_example() -> tuple[Graph, GMSet]:
    """A graph with one degree-1 vertex whose neighbourhood graph for a GM set
    has a single cycle, yet switching gives a non-isomorphic mate.

    X = {0, 1, 2, 3} is independent; boundary vertices 4..7 see the pairs
    {0,1}, {0,2}, {0,3}, {1,2}, so G_X is the 6-cycle 0-4-1-7-2-5-0 with
    the path 0-6-3 hanging off it, and vertex 3 has degree 1.  Each
    boundary vertex carries a different clique (sizes 2..5) joined to it.
    """
    edges = [(0, 4), (1, 4), (0, 5), (2, 5), (0, 6), (3, 6), (1, 7), (2, 7)]
    n = 8
    for y, size in zip((4, 5, 6, 7), (2, 3, 4, 5)):
        new = list(range(n, n + size))
        n += size
        edges += [(y, v) for v in new] + list(itertools.combinations(new, 2))
    xs = (0, 1, 2, 3)
    return Graph(n, edges), GMSet(xs, (xs[:2], xs[2:]))
