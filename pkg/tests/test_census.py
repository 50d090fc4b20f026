import itertools

import pytest

from cospectra.census import Census, brute_force_rds_oracle, generate_graphs, lookup
from cospectra.formats import from_graph6
from cospectra.graph import Graph, cycle_graph, disjoint_union, star_graph
from cospectra.isomorphism import canonical_form, is_isomorphic
from cospectra.spectral import are_cospectral, are_r_cospectral

UNLABELED = [1, 1, 2, 4, 11, 34, 156, 1044]


def test_counts_match_unlabeled_sequence():
    assert [len(generate_graphs(n)) for n in range(8)] == UNLABELED


def test_forms_are_distinct_and_canonical():
    forms = generate_graphs(6)
    assert len(set(forms)) == len(forms)
    for f in forms:
        assert canonical_form(from_graph6(f)) == f


def test_independent_enumeration_n5():
    pairs = list(itertools.combinations(range(5), 2))
    brute = {canonical_form(Graph(5, [e for i, e in enumerate(pairs) if mask >> i & 1]))
             for mask in range(1 << len(pairs))}
    assert brute == set(generate_graphs(5))


def test_n4_all_determined():
    census = brute_force_rds_oracle(4)
    assert len(census) == 11
    assert all(len(m) == 1 for m in census.cp_classes().values())


def test_classic_pair_in_census():
    census = brute_force_rds_oracle(5)
    a, b = disjoint_union(cycle_graph(4), Graph(1)), star_graph(4)
    ia, ib = census.index[canonical_form(a)], census.index[canonical_form(b)]
    assert census.cp_class[ia] == census.cp_class[ib]
    assert census.r_class[ia] != census.r_class[ib]
    assert [is_isomorphic(h, b) for h in census.cospectral_mates(a)] == [True]
    assert census.is_rds(a) and census.is_rds(b)


def test_mate_counts_n6_n7():
    # graphs having a cospectral mate: 10 on six vertices, 110 on seven
    for n, want in ((6, 10), (7, 110)):
        census = brute_force_rds_oracle(n)
        assert sum(len(m) for m in census.cp_classes().values() if len(m) > 1) == want
    census = brute_force_rds_oracle(7)
    assert sum(len(m) for m in census.r_classes().values() if len(m) > 1) == 40


def test_classes_are_spectral():
    census = brute_force_rds_oracle(6)
    for members in census.r_classes().values():
        for i, j in itertools.combinations(members, 2):
            assert are_r_cospectral(census.graph(i), census.graph(j))
    for members in census.cp_classes().values():
        for i, j in itertools.combinations(members, 2):
            assert are_cospectral(census.graph(i), census.graph(j))


def test_save_and_load(tmp_path):
    census = brute_force_rds_oracle(5, use_cache=False)
    path = tmp_path / "c5.bin"
    census.save(path)
    back = Census.load(path)
    assert back.forms == census.forms and back.r_class == census.r_class and back.cp_class == census.cp_class
    (tmp_path / "junk.bin").write_bytes(b"nope")
    with pytest.raises(ValueError):
        Census.load(tmp_path / "junk.bin")


def test_lookup():
    det, mate = lookup(cycle_graph(6))
    assert det and mate is None
    census = brute_force_rds_oracle(7)
    i = next(m[0] for m in census.r_classes().values() if len(m) > 1)
    g = census.graph(i)
    det, mate = lookup(g)
    assert not det and are_r_cospectral(g, mate) and not is_isomorphic(g, mate)


def test_budget():
    with pytest.raises(ValueError):
        generate_graphs(10)


def test_n8_census():
    census = brute_force_rds_oracle(8)
    assert len(census) == 12346
    # graphs sharing their spectrum with another graph, and their generalized spectrum
    assert sum(len(m) for m in census.cp_classes().values() if len(m) > 1) == 1722
    assert sum(len(m) for m in census.r_classes().values() if len(m) > 1) == 1166
