import random

import numpy as np
import pytest
import sympy

from cospectra.graph import Graph, complement, complete_graph, cycle_graph, disjoint_union, path_graph, star_graph
from cospectra.spectral import (
    IntPolynomial,
    are_cospectral,
    are_r_cospectral,
    char_poly,
    char_poly_faddeev_leverrier,
    char_poly_matrix,
    char_poly_minors,
    cycle_char_poly,
    path_char_poly,
)

from conftest import random_graph, random_perm


def sympy_char_poly(g: Graph) -> IntPolynomial:
    a = sympy.zeros(g.n, g.n)
    for u, v in g.edges():
        a[u, v] = a[v, u] = 1
    x = sympy.Symbol("x")
    coeffs = sympy.Poly(a.charpoly(x).as_expr(), x).all_coeffs()
    return IntPolynomial([int(c) for c in reversed(coeffs)])


def test_known_polynomials():
    assert char_poly(Graph(0)) == IntPolynomial([1])
    assert char_poly(Graph(1)) == IntPolynomial([0, 1])
    assert char_poly(complete_graph(3)) == IntPolynomial([-2, -3, 0, 1])
    assert char_poly(star_graph(4)) == IntPolynomial([0, 0, 0, -4, 0, 1])
    for n in range(3, 15):
        assert char_poly(path_graph(n)) == path_char_poly(n)
        assert char_poly(cycle_graph(n)) == cycle_char_poly(n)


def test_poly_arithmetic_and_json():
    p = IntPolynomial([1, -2, 0, 3])
    assert p.degree == 3 and p(2) == 1 - 4 + 24
    assert p * IntPolynomial([0, 1]) == IntPolynomial([0, 1, -2, 0, 3])
    assert IntPolynomial.from_json(p.to_json()) == p
    assert str(p) == "3x^3 - 2x + 1"
    big = IntPolynomial([10**40, -(10**30)])
    assert IntPolynomial.from_json(big.to_json()) == big


def test_methods_agree_with_sympy():
    rng = random.Random(4)
    for n in range(1, 13):
        g = random_graph(rng, n, 0.4)
        rows = g.adjacency_matrix().tolist()
        ref = sympy_char_poly(g)
        assert char_poly(g) == ref
        assert char_poly_faddeev_leverrier(rows) == ref
        if n <= 7:
            assert char_poly_minors(rows) == ref


def test_large_graph_matches_faddeev_leverrier():
    g = random_graph(random.Random(8), 40, 0.3)
    rows = g.adjacency_matrix().tolist()
    assert char_poly(g) == char_poly_faddeev_leverrier(rows)


def test_trace_identities():
    rng = random.Random(5)
    for _ in range(10):
        g = random_graph(rng, 15, 0.3)
        c = char_poly(g)
        a = g.adjacency_matrix().astype(np.int64)
        triangles = int(np.trace(a @ a @ a)) // 6
        assert c[g.n] == 1 and c[g.n - 1] == 0
        assert c[g.n - 2] == -g.m
        assert c[g.n - 3] == -2 * triangles


def test_relabeling_invariance(rng):
    g = random_graph(rng, 11, 0.4)
    assert char_poly(g) == char_poly(g.relabel(random_perm(rng, 11)))


def test_char_poly_matrix_general_integer_entries():
    rows = [[2, -1, 0], [5, 0, 3], [1, 1, -4]]
    m = sympy.Matrix(rows)
    x = sympy.Symbol("x")
    ref = [int(c) for c in reversed(sympy.Poly(m.charpoly(x).as_expr(), x).all_coeffs())]
    assert char_poly_matrix(rows) == IntPolynomial(ref)


def test_classic_cospectral_pair():
    a = star_graph(4)
    b = disjoint_union(cycle_graph(4), Graph(1))
    assert are_cospectral(a, b)
    assert not are_r_cospectral(a, b)
    assert not are_cospectral(a, path_graph(5))


def test_r_cospectral_uses_complement():
    g = random_graph(random.Random(6), 9, 0.5)
    h = g.relabel(random_perm(random.Random(7), 9))
    assert are_r_cospectral(g, h)
    assert char_poly(complement(g)) == char_poly(complement(h))


def test_cycle_poly_needs_three():
    with pytest.raises(ValueError):
        cycle_char_poly(2)
