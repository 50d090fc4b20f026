"""Canonical labeling by colour refinement and individualization.

The search tree is the usual one: refine to an equitable ordered partition,
pick the first smallest non-singleton cell, individualize each of its
vertices in turn.  Leaves are discrete partitions and give labelings; the
canonical labeling is the one whose relabelled edge list is lexicographically
largest.  Automorphisms discovered at the leaves prune sibling subtrees.
"""

from __future__ import annotations

from typing import Sequence

from .graph import Graph

__all__ = [
    "BudgetExceeded",
    "refine",
    "canonical_labeling",
    "canonical_form",
    "is_isomorphic",
    "isomorphism",
    "automorphism_orbits",
    "automorphism_moved_vertices",
]

DEFAULT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    """The search visited more tree nodes than allowed."""


def refine(g: Graph, colors: Sequence[int]) -> list[int]:
    """Coarsest equitable refinement of ``colors``, as ranks ``0..k-1``.

    Ranks are assigned by sorting (old colour, sorted neighbour colours), so
    the result is invariant under relabelling the vertices.
    """
    adj = g.adj
    ranks = _ranks(list(colors))
    k = max(ranks) + 1 if ranks else 0
    while True:
        sig = [(ranks[v], tuple(sorted(ranks[w] for w in adj[v]))) for v in range(g.n)]
        new = _ranks(sig)
        k_new = max(new) + 1 if new else 0
        if k_new == k:
            return new
        ranks, k = new, k_new


def _ranks(keys: list) -> list[int]:
    order = {key: i for i, key in enumerate(sorted(set(keys)))}
    return [order[key] for key in keys]


def _individualize(colors: list[int], v: int) -> list[int]:
    cv = colors[v]
    out = [2 * c for c in colors]
    for u, c in enumerate(colors):
        if c == cv and u != v:
            out[u] = 2 * c + 1
    return out


class _Search:
    """One canonical-labelling search.

    When a leaf reproduces the certificate of the first (or current best)
    leaf, the two paths differ by an automorphism and everything below their
    divergence point is already covered, so the search jumps back there.
    """

    NO_JUMP = 1 << 30

    def __init__(self, g: Graph, colors: Sequence[int], budget: int):
        self.g = g
        self.budget = budget
        self.nodes = 0
        self.best_cert = None
        self.best_lab: list[int] | None = None
        self.best_path: list[int] = []
        self.first_cert = None
        self.first_lab: list[int] | None = None
        self.first_path: list[int] = []
        self.autos: list[list[int]] = []
        self.run(list(colors), [])

    def cert(self, lab: list[int]):
        return tuple(sorted((max(lab[u], lab[v]), min(lab[u], lab[v])) for u, v in self.g.edges()))

    def automorphism(self, lab_a: list[int], lab_b: list[int]) -> list[int]:
        # maps the vertex labelled x in b to the vertex labelled x in a
        inv_a = [0] * len(lab_a)
        for v, x in enumerate(lab_a):
            inv_a[x] = v
        return [inv_a[x] for x in lab_b]

    def run(self, colors: list[int], prefix: list[int]) -> int:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"canonical search exceeded {self.budget} nodes")
        colors = refine(self.g, colors)
        n = self.g.n
        k = max(colors) + 1 if colors else 0
        if k == n:
            return self.leaf(colors, prefix)
        sizes = [0] * k
        for c in colors:
            sizes[c] += 1
        target = min((s, c) for c, s in enumerate(sizes) if s > 1)[1]
        cell = [v for v in range(n) if colors[v] == target]
        depth = len(prefix)
        explored: list[int] = []
        seen_autos, orbit = -1, None
        for v in cell:
            if explored:
                if seen_autos != len(self.autos):
                    orbit = self.orbits_fixing(prefix)
                    seen_autos = len(self.autos)
                if orbit is not None and orbit[v] in {orbit[u] for u in explored}:
                    continue
            jump = self.run(_individualize(colors, v), prefix + [v])
            if jump < depth:
                return jump
            explored.append(v)
        return self.NO_JUMP

    def orbits_fixing(self, prefix: list[int]) -> list[int] | None:
        gens = [a for a in self.autos if all(a[x] == x for x in prefix)]
        if not gens:
            return None
        parent = list(range(self.g.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in gens:
            for x, y in enumerate(a):
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[rx] = ry
        return [find(x) for x in range(self.g.n)]

    @staticmethod
    def _common(a: list[int], b: list[int]) -> int:
        i = 0
        while i < len(a) and i < len(b) and a[i] == b[i]:
            i += 1
        return i

    def leaf(self, lab: list[int], path: list[int]) -> int:
        c = self.cert(lab)
        if self.first_lab is None:
            self.first_cert, self.first_lab, self.first_path = c, lab, path
            self.best_cert, self.best_lab, self.best_path = c, lab, path
            return self.NO_JUMP
        if c == self.first_cert:
            self.add_auto(self.automorphism(self.first_lab, lab))
            return self._common(self.first_path, path)
        if c == self.best_cert:
            self.add_auto(self.automorphism(self.best_lab, lab))
            return self._common(self.best_path, path)
        if c > self.best_cert:
            self.best_cert, self.best_lab, self.best_path = c, lab, path
        return self.NO_JUMP

    def add_auto(self, a: list[int]):
        if any(x != i for i, x in enumerate(a)):
            self.autos.append(a)


def canonical_labeling(g: Graph, colors: Sequence[int] | None = None, budget: int = DEFAULT_BUDGET) -> list[int]:
    """Canonical labeling ``lab`` (vertex ``v`` -> ``lab[v]``) of a coloured graph."""
    if g.n == 0:
        return []
    if colors is None:
        colors = [0] * g.n
    s = _Search(g, colors, budget)
    return s.best_lab


def _search(g: Graph, colors: Sequence[int] | None, budget: int) -> _Search | None:
    if g.n == 0:
        return None
    return _Search(g, [0] * g.n if colors is None else colors, budget)


def canonical_form(g: Graph, colors: Sequence[int] | None = None, budget: int = DEFAULT_BUDGET) -> bytes:
    """Byte string equal for two (coloured) graphs iff they are isomorphic."""
    from .formats import to_graph6

    if g.n == 0:
        return b"?"
    lab = canonical_labeling(g, colors, budget)
    body = to_graph6(g.relabel(lab), header=False)
    if colors is None:
        return body
    inv = [0] * g.n
    for v, x in enumerate(lab):
        inv[x] = v
    # colour of each canonical position, using the caller's colour values
    col = ",".join(str(colors[inv[x]]) for x in range(g.n))
    return body + b"|" + col.encode()


def isomorphism(g: Graph, h: Graph, budget: int = DEFAULT_BUDGET) -> list[int] | None:
    """A map ``phi`` with ``uv`` an edge of g iff ``phi[u]phi[v]`` is an edge of h, or None."""
    if g.n != h.n or g.m != h.m or sorted(g.degrees()) != sorted(h.degrees()):
        return None
    if g.n == 0:
        return []
    lab_g = canonical_labeling(g, budget=budget)
    lab_h = canonical_labeling(h, budget=budget)
    if g.relabel(lab_g) != h.relabel(lab_h):
        return None
    inv_h = [0] * h.n
    for v, x in enumerate(lab_h):
        inv_h[x] = v
    return [inv_h[lab_g[v]] for v in range(g.n)]


def is_isomorphic(g: Graph, h: Graph, budget: int = DEFAULT_BUDGET) -> bool:
    return isomorphism(g, h, budget) is not None


def automorphism_orbits(g: Graph, budget: int = DEFAULT_BUDGET) -> list[list[int]]:
    """Orbits of Aut(g), each sorted, ordered by smallest member.

    Vertices ``v, w`` share an orbit iff ``g`` with ``v`` individualized is
    isomorphic to ``g`` with ``w`` individualized.  Automorphisms found
    while labelling ``g`` merge most orbits before that test is needed.
    """
    n = g.n
    if n == 0:
        return []
    s = _Search(g, [0] * n, budget)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for a in s.autos:
        for x, y in enumerate(a):
            union(x, y)
    cells = refine(g, [0] * n)
    forms: dict[int, bytes] = {}

    def form(v):
        if v not in forms:
            marks = [1] * n
            marks[v] = 0
            forms[v] = canonical_form(g, marks, budget)
        return forms[v]

    for c in set(cells):
        members = [v for v in range(n) if cells[v] == c]
        if len(members) < 2:
            continue
        reps: list[int] = []
        for v in members:
            root = find(v)
            if any(find(r) == root for r in reps):
                continue
            for r in reps:
                if form(r) == form(v):
                    union(r, v)
                    break
            else:
                reps.append(v)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def automorphism_moved_vertices(g: Graph, budget: int = DEFAULT_BUDGET) -> set[int]:
    """Vertices moved by some automorphism.

    Raises :class:`BudgetExceeded` when the search budget runs out; callers
    treat that as an unknown outcome.
    """
    return {v for orb in automorphism_orbits(g, budget) if len(orb) > 1 for v in orb}
