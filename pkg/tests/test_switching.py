import itertools
import random
from fractions import Fraction

import pytest

from cospectra.graph import Graph, complete_graph, cycle_graph, disjoint_union, empty_graph, path_graph, star_graph
from cospectra.isomorphism import is_isomorphic
from cospectra.spectral import are_cospectral, are_r_cospectral, char_poly
from cospectra.switching import (
    NonGraphResult,
    OrthogonalSwitch,
    PathsCyclesMultiset,
    apply_switch,
    dense_small_subgraph,
    gm_find_sets,
    gm_pendant_example,
    gm_q_matrix,
    gm_switch,
    is_disjoint_cycles,
    neighborhood_graph,
    pc_cospectral_pair,
    pc_graph,
    pc_invariant,
    subgraph_switch_check,
    union_cycles_switch_isomorphism,
)

from conftest import planted_gm_graph, random_graph

ROT90 = ((0, -1), (1, 0))


def test_gm_q_matrix():
    h = Fraction(1, 2)
    assert gm_q_matrix(2) == ((-h, h, h, h), (h, -h, h, h), (h, h, -h, h), (h, h, h, -h))
    for k in range(2, 7):
        q = gm_q_matrix(k)
        m = 2 * k
        for i in range(m):
            assert sum(q[i]) == 1
            for j in range(m):
                assert sum(q[t][i] * q[t][j] for t in range(m)) == (i == j)
    with pytest.raises(ValueError):
        gm_q_matrix(1)


def test_orthogonal_switch_invariants():
    s = OrthogonalSwitch(ROT90, (0, 1))
    assert s.level == 1 and s.m == 2
    assert gm_switch([0, 1, 2, 3]).level == 2
    with pytest.raises(ValueError):
        OrthogonalSwitch(((1, 0), (0, 1)), (0, 1))
    with pytest.raises(ValueError):
        OrthogonalSwitch(((1, 1), (0, 1)), (0, 1))
    with pytest.raises(ValueError):
        OrthogonalSwitch(ROT90, (0, 0))
    with pytest.raises(ValueError):
        OrthogonalSwitch(ROT90, (0, 1), frozenset({1}))
    t = gm_switch([3, 1, 4, 5])
    assert OrthogonalSwitch.from_json(t.to_json()) == t


def test_apply_switch_examples():
    assert apply_switch(empty_graph(3), OrthogonalSwitch(ROT90, (0, 1))) == empty_graph(3)
    # vertex 4 sees a single vertex of X
    g = Graph(5, [(0, 1), (2, 3), (0, 4)])
    with pytest.raises(NonGraphResult):
        apply_switch(g, gm_switch([0, 1, 2, 3]))


def test_planted_gm_switch_is_cospectral():
    rng = random.Random(1)
    for _ in range(100):
        k = rng.randint(2, 4)
        g, xs = planted_gm_graph(rng, k, rng.randint(1, 10))
        h = apply_switch(g, gm_switch(xs))
        assert are_cospectral(g, h)
        assert h.m == g.m


def test_gm_switch_ignores_bipartition():
    rng = random.Random(2)
    g, xs = planted_gm_graph(rng, 3, 8)
    h = apply_switch(g, gm_switch(xs))
    for _ in range(5):
        ys = list(xs)
        rng.shuffle(ys)
        assert apply_switch(g, gm_switch(ys)) == h


def test_gm_find_sets_examples():
    c4 = cycle_graph(4)
    assert [s.vertices for s in gm_find_sets(c4, 2)] == [(0, 1, 2, 3)]
    assert gm_find_sets(star_graph(3), 2, nontrivial=True) == []
    g, gm = gm_pendant_example()
    assert gm.vertices in {s.vertices for s in gm_find_sets(g, 2)}


def test_gm_find_sets_matches_brute_force():
    rng = random.Random(3)
    for _ in range(15):
        g = random_graph(rng, rng.randint(4, 10), 0.4)
        brute = set()
        for xs in itertools.combinations(range(g.n), 4):
            sub = [sum(g.has_edge(a, b) for b in xs) for a in xs]
            if len(set(sub)) != 1:
                continue
            if all(sum(g.has_edge(v, x) for x in xs) in (0, 2, 4) for v in range(g.n) if v not in xs):
                brute.add(xs)
        assert {s.vertices for s in gm_find_sets(g, 2, limit=None)} == brute


def test_found_sets_switch_validly():
    rng = random.Random(4)
    g, xs = planted_gm_graph(rng, 2, 10)
    sets = gm_find_sets(g, 2)
    assert tuple(sorted(xs)) in {s.vertices for s in sets}
    for s in sets:
        assert are_r_cospectral(g, apply_switch(g, s.switch()))


def test_gm_pendant_example_gives_mate():
    g, gm = gm_pendant_example()
    assert g.degrees().count(1) == 1
    ng = neighborhood_graph(g, gm.vertices).graph
    assert not is_disjoint_cycles(ng)
    h = apply_switch(g, gm.switch())
    assert are_cospectral(g, h)
    assert not is_isomorphic(g, h)


def test_neighborhood_graph():
    c6 = cycle_graph(6)
    assert neighborhood_graph(c6, []).graph.n == 0
    full = neighborhood_graph(c6, range(6))
    assert full.graph == c6 and full.boundary == frozenset()
    nb = neighborhood_graph(c6, [0, 1])
    assert is_isomorphic(nb.graph, path_graph(4))
    assert nb.boundary == {2, 5}
    k4 = neighborhood_graph(complete_graph(4), [0])
    assert k4.graph.m == 3


def test_subgraph_switch_check_examples():
    rng = random.Random(5)
    g, xs = planted_gm_graph(rng, 2, 8)
    s = gm_switch(xs)
    h = apply_switch(g, s)
    rest = [v for v in range(g.n) if v not in xs]
    assert subgraph_switch_check(g, h, s, rest)
    assert subgraph_switch_check(g, h, s, [])
    with pytest.raises(ValueError):
        subgraph_switch_check(g, h, s, [xs[0]])
    touching = next((x, w) for x in xs for w in g.adj[x])
    with pytest.raises(ValueError):
        subgraph_switch_check(g, h, s, rest, [touching])


def test_is_disjoint_cycles():
    assert is_disjoint_cycles(cycle_graph(5))
    assert not is_disjoint_cycles(path_graph(3))
    assert is_disjoint_cycles(disjoint_union(cycle_graph(3), cycle_graph(4)))


def test_dense_small_subgraph():
    assert dense_small_subgraph(path_graph(8), 8) is None
    assert dense_small_subgraph(cycle_graph(6), 10) is None
    w = dense_small_subgraph(complete_graph(4), 4)
    assert w is not None and len(w.vertices) == 4 and w.excess >= 1
    theta = Graph(5, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)])
    w = dense_small_subgraph(theta, 6)
    assert w.vertices == frozenset(range(5)) and len(w.edges) == 6
    assert dense_small_subgraph(theta, 4) is None


def test_dense_witness_is_genuine():
    rng = random.Random(6)
    for _ in range(40):
        g = random_graph(rng, 14, 0.2)
        w = dense_small_subgraph(g, 7)
        if w is None:
            continue
        assert len(w.vertices) <= 7 and len(w.edges) > len(w.vertices)
        assert all(g.has_edge(a, b) and a in w.vertices and b in w.vertices for a, b in w.edges)


def test_paths_cycles():
    for n in range(3, 13):
        a, b = pc_cospectral_pair(n)
        assert a.n == b.n == 2 * n + 2
        assert char_poly(a) == char_poly(b)
        assert not is_isomorphic(a, b)
        assert pc_invariant(PathsCyclesMultiset.of_graph(a), n + 1) == pc_invariant(PathsCyclesMultiset.of_graph(b), n + 1)
    assert pc_invariant(PathsCyclesMultiset.make()) == [0]
    with pytest.raises(ValueError):
        pc_cospectral_pair(2)


def test_equal_invariant_different_cycles():
    # the n = 5 generator with C_8 + 2P_3 added to both sides
    m1 = PathsCyclesMultiset.make({10: 1, 8: 1}, {1: 2, 3: 2})
    m2 = PathsCyclesMultiset.make({4: 1, 8: 1}, {4: 2, 3: 2})
    assert m1.cycles != m2.cycles
    assert pc_invariant(m1, 6) == pc_invariant(m2, 6)
    assert char_poly(pc_graph(m1)) == char_poly(pc_graph(m2))


def test_union_cycles_switch_isomorphism():
    # C8 with X = alternate vertices is regular (independent) and each outside vertex sees two of X
    g = cycle_graph(8)
    s = gm_switch([0, 2, 4, 6])
    assert union_cycles_switch_isomorphism(g, s)
    with pytest.raises(ValueError):
        union_cycles_switch_isomorphism(disjoint_union(cycle_graph(4), cycle_graph(4)), s)
