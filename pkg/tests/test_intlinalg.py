import random

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from cospectra.intlinalg import (
    EntryTooLarge,
    adjugate_solve,
    bareiss_det,
    identity,
    matmul,
    nullspace_mod,
    primitive,
    rank,
    rational_nullspace,
    smith_form_mod_prime_power,
    smith_normal_form,
)


def rand_matrix(rng, r, c, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(c)] for _ in range(r)]


def sympy_divisors(m):
    d = sympy_snf(sympy.Matrix(m), domain=sympy.ZZ)
    return [abs(int(d[i, i])) for i in range(min(d.shape)) if d[i, i] != 0]


def test_det_and_rank_match_sympy():
    rng = random.Random(1)
    for n in range(1, 9):
        m = rand_matrix(rng, n, n)
        assert bareiss_det(m) == sympy.Matrix(m).det()
        assert rank(m) == sympy.Matrix(m).rank()
    singular = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert bareiss_det(singular) == 0 and rank(singular) == 2


def test_adjugate():
    rng = random.Random(2)
    for n in range(1, 7):
        m = rand_matrix(rng, n, n)
        if bareiss_det(m) == 0:
            continue
        det, adj = adjugate_solve(m)
        assert det == bareiss_det(m)
        assert matmul(m, adj) == [[det * x for x in r] for r in identity(n)]
    with pytest.raises(ZeroDivisionError):
        adjugate_solve([[1, 2], [2, 4]])


def test_nullspaces():
    m = [[1, 2, 3], [2, 4, 6]]
    basis = rational_nullspace(m)
    assert len(basis) == 2
    assert all(x == 0 for v in basis for x in matmul(m, [[e] for e in v]) for x in x)
    assert primitive([0, -4, 6]) == [0, 2, -3]
    mod = nullspace_mod([[1, 1], [1, 1]], 2)
    assert mod == [[1, 1]]
    assert nullspace_mod([[2, 0], [0, 1]], 2) == [[1, 0]]


def check_snf(m, res):
    d = res.diagonal(len(m), len(m[0]))
    assert matmul(matmul(res.u, m), res.v) == d
    for a, b in zip(res.divisors, res.divisors[1:]):
        assert b % a == 0
    assert abs(sympy.Matrix(res.u).det()) == 1
    assert abs(sympy.Matrix(res.v).det()) == 1


def test_snf_matches_sympy_and_is_unimodular():
    rng = random.Random(3)
    for _ in range(40):
        r, c = rng.randint(1, 7), rng.randint(1, 7)
        m = rand_matrix(rng, r, c)
        res = smith_normal_form(m)
        check_snf(m, res)
        assert res.divisors == sympy_divisors(m)


def test_snf_modulus_agrees_with_exact():
    rng = random.Random(4)
    q = 3 ** 5
    for _ in range(20):
        m = rand_matrix(rng, 6, 6, -50, 50)
        exact = smith_normal_form(m)
        red = smith_normal_form(m, modulus=q)
        assert red.divisors == exact.divisors
        assert red.u == [[x % q for x in r] for r in exact.u]
        assert red.v == [[x % q for x in r] for r in exact.v]
        d = red.diagonal(6, 6)
        assert [[x % q for x in r] for r in matmul(matmul(red.u, m), red.v)] == [[x % q for x in r] for r in d]


def test_snf_zero_and_rank_deficient():
    assert smith_normal_form([[0, 0], [0, 0]]).divisors == []
    assert smith_normal_form([[2, 4], [4, 8]]).divisors == [2]


def test_local_snf_matches_global_valuations():
    rng = random.Random(5)
    for _ in range(30):
        m = rand_matrix(rng, 5, 5, -30, 30)
        p, a = rng.choice([2, 3, 5]), 4
        vals, u, v = smith_form_mod_prime_power(m, p, a)
        divs = smith_normal_form(m).divisors
        divs += [0] * (5 - len(divs))
        expect = []
        for x in divs:
            k = 0
            while x and x % p == 0 and k < a:
                x //= p
                k += 1
            expect.append(a if x == 0 else k)
        assert vals == expect
        q = p ** a
        prod = [[x % q for x in r] for r in matmul(matmul(u, m), v)]
        for i in range(5):
            for j in range(5):
                if i != j:
                    assert prod[i][j] == 0
                else:
                    assert prod[i][i] % q == (0 if vals[i] == a else prod[i][i])
                    if vals[i] < a:
                        assert prod[i][i] == p ** vals[i]


def test_entry_budget():
    big = [[10**30, 1], [1, 10**30 + 7]]
    with pytest.raises(EntryTooLarge):
        bareiss_det(big, max_bits=64)
