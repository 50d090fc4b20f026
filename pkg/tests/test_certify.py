import random

import sympy

from cospectra.census import brute_force_rds_oracle
from cospectra.certify import (
    CertifyBudget,
    Controllability,
    Outcome,
    certify,
    controllability_class,
    default_modulus,
    kernel_final_column,
    modified_walk_matrix,
    walk_matrix,
    walk_smith_form,
)
from cospectra.graph import Graph, complete_graph, cycle_graph, empty_graph, path_graph
from cospectra.intlinalg import bareiss_det, matmul, rank, smith_normal_form
from cospectra.isomorphism import is_isomorphic
from cospectra.spectral import are_r_cospectral
from cospectra.switching import apply_switch, gm_switch

from conftest import planted_gm_graph, random_graph, random_perm


def test_walk_matrix_examples():
    w = walk_matrix(empty_graph(4))
    assert w.rank == 1 and [r[0] for r in w.entries] == [1] * 4
    assert w.entries[0][1:] == (0, 0, 0)
    assert walk_matrix(complete_graph(2)).entries == ((1, 1), (1, 1))
    p3 = walk_matrix(path_graph(3))
    assert p3.entries == ((1, 1, 2), (1, 2, 2), (1, 1, 2))
    assert p3.rank == 2


def test_controllability_classes():
    assert controllability_class(Graph(1)) is Controllability.CONTROLLABLE
    assert controllability_class(cycle_graph(5)) is Controllability.NEITHER
    assert controllability_class(path_graph(3)) is Controllability.ALMOST_CONTROLLABLE


def test_rank_is_isomorphism_invariant():
    rng = random.Random(1)
    for _ in range(30):
        g = random_graph(rng, 10, 0.3)
        assert walk_matrix(g).rank == walk_matrix(g.relabel(random_perm(rng, 10))).rank


def all_cofactors_last_column(rows):
    n = len(rows)
    return [(-1) ** (i + n - 1) * bareiss_det([r[:-1] for k, r in enumerate(rows) if k != i]) for i in range(n)]


def test_kernel_final_column_small():
    assert kernel_final_column([[1, 0], [0, 0]]) == [0, 1]


def test_kernel_final_column_matches_cofactors():
    rng = random.Random(2)
    done = 0
    while done < 30:
        n = rng.randint(2, 12)
        basis = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n - 1)]
        mix = [[rng.randint(-2, 2) for _ in range(n - 1)] for _ in range(n)]
        rows = matmul(mix, basis)
        if rank(rows) != n - 1:
            continue
        assert kernel_final_column(rows) == all_cofactors_last_column(rows)
        swapped = [rows[1], rows[0]] + rows[2:]
        c, d = kernel_final_column(rows), kernel_final_column(swapped)
        assert d == [-c[1], -c[0]] + [-x for x in c[2:]]
        done += 1


def test_kernel_final_column_on_walk_matrices():
    rng = random.Random(3)
    seen = 0
    for _ in range(300):
        g = random_graph(rng, rng.randint(4, 11), 0.35)
        w = walk_matrix(g)
        if w.rank != w.n - 1:
            continue
        rows = w.rows()
        assert kernel_final_column(w) == all_cofactors_last_column(rows)
        assert rank(modified_walk_matrix(w)) == w.n
        seen += 1
    assert seen >= 5


def test_default_modulus():
    assert default_modulus(1) is None
    assert default_modulus(2) == 4
    assert default_modulus(12) == 243
    assert default_modulus(-7) == 49


def test_walk_smith_form_modular_equals_exact():
    rng = random.Random(4)
    for _ in range(10):
        g = random_graph(rng, 12, 0.3)
        if walk_matrix(g).rank < g.n - 1:
            continue
        exact = walk_smith_form(g, None)
        auto = walk_smith_form(g)
        assert auto.divisors == exact.divisors
        if auto.modulus:
            assert auto.v == [[x % auto.modulus for x in r] for r in exact.v]


def test_snf_divisors_stable_under_unimodular_ops():
    rng = random.Random(5)
    m = [[rng.randint(-9, 9) for _ in range(6)] for _ in range(6)]
    base = smith_normal_form(m).divisors
    for _ in range(10):
        i, j = rng.sample(range(6), 2)
        q = rng.randint(-3, 3)
        m = [r[:] for r in m]
        m[i] = [a + q * b for a, b in zip(m[i], m[j])]
        for r in m:
            r[j] += q * r[i]
        assert smith_normal_form(m).divisors == base
    assert abs(sympy.Matrix(m).det()) == (sympy.prod(base) if len(base) == 6 else 0)


def test_certify_trivial_cases():
    assert certify(Graph(1)).outcome is Outcome.DETERMINED
    assert certify(cycle_graph(5)).outcome is Outcome.INCONCLUSIVE_RANK


def test_certify_agrees_with_census_n6():
    census = brute_force_rds_oracle(6)
    for i in range(len(census)):
        g = census.graph(i)
        rep = certify(g, use_census=False)
        if rep.outcome is Outcome.DETERMINED:
            assert census.is_rds(g)
        elif rep.outcome is Outcome.MATE_FOUND:
            assert not census.is_rds(g)


def test_certify_census_path_is_exact():
    census = brute_force_rds_oracle(7)
    for i in range(0, len(census), 7):
        g = census.graph(i)
        rep = certify(g)
        if rep.outcome is Outcome.INCONCLUSIVE_RANK:
            continue
        assert (rep.outcome is Outcome.DETERMINED) == census.is_rds(g)


def test_planted_switch_never_certified():
    rng = random.Random(6)
    for _ in range(10):
        g, xs = planted_gm_graph(rng, 2, rng.randint(8, 14))
        h = apply_switch(g, gm_switch(xs))
        if is_isomorphic(g, h):
            continue
        rep = certify(g, use_census=False)
        assert rep.outcome is not Outcome.DETERMINED
        if rep.outcome is Outcome.MATE_FOUND:
            assert are_r_cospectral(g, rep.mate) and not is_isomorphic(g, rep.mate)


def test_entry_budget_terminates():
    g = random_graph(random.Random(7), 30, 0.2)
    rep = certify(g, CertifyBudget(max_bits=8), use_census=False)
    assert rep.outcome in (Outcome.TERMINATED, Outcome.INCONCLUSIVE_RANK)
