"""Certifying that a graph is determined by its generalized (R-) spectrum.

Pipeline for a graph G with adjacency A and walk matrix W = [e, Ae, ...]:

1. rank W < n - 1: inconclusive.
2. Build W_hat: W itself when controllable, otherwise W with its last
   column replaced by the cofactor vector of that column.  Any rational
   orthogonal Q with Q^T A Q = A_H and Q e = e satisfies
   Q^T W_hat_G = W_hat_H D with D = diag(1, ..., 1, +-1), so Q is rational
   and its level l divides the last invariant factor d_n of W_hat.
3. For a prime p | l, the columns of l Q reduced mod p span a nonzero
   A-invariant subspace of ker(W_hat^T mod p) that is totally isotropic
   (p odd), or whose vectors z have z^T A^k z = 0 (mod 4) for all k (p = 2).
   Such a subspace contains a cyclic subspace generated by a vector of
   ker f(A) for an irreducible factor f; if none of those is admissible,
   p does not divide l.  Primes p with a one-dimensional kernel reduce to a
   single vector, so only primes of d_{n-1} and of gcd(d_n, diag(X X^T))
   (X = adj(W_hat) / d_{n-1}) need the search.
4. If every candidate prime is excluded, l = 1, Q is a permutation and G is
   determined by its R-spectrum.  Otherwise look for a mate by
   Godsil-McKay switching; no mate found means the run is terminated.

Small graphs skip steps 2-4 and read the answer from the exhaustive census.
"""

from __future__ import annotations

import enum
import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from sympy import factorint, isprime

from .graph import Graph
from .intlinalg import (
    MAX_BITS,
    EntryTooLarge,
    adjugate_solve,
    bareiss_det,
    SnfResult,
    nullspace_mod,
    rank,
    rational_nullspace,
    smith_form_mod_prime_power,
    smith_normal_form,
    transpose,
)
from .isomorphism import BudgetExceeded, is_isomorphic
from .spectral import are_r_cospectral

__all__ = [
    "Controllability",
    "Outcome",
    "WalkMatrix",
    "CertificationReport",
    "walk_matrix",
    "controllability_class",
    "kernel_final_column",
    "modified_walk_matrix",
    "default_modulus",
    "walk_smith_form",
    "smith_normal_form",
    "prime_excluded",
    "level_candidates",
    "refine_by_support",
    "certify",
    "CertifyBudget",
]


class Controllability(str, enum.Enum):
    CONTROLLABLE = "controllable"
    ALMOST_CONTROLLABLE = "almost-controllable"
    NEITHER = "neither"


class Outcome(str, enum.Enum):
    DETERMINED = "determined"
    MATE_FOUND = "r-cospectral"
    INCONCLUSIVE_RANK = "rank-deficient"
    TERMINATED = "terminated"


@dataclass(frozen=True)
class WalkMatrix:
    entries: tuple[tuple[int, ...], ...]
    rank: int

    @property
    def n(self) -> int:
        return len(self.entries)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


@dataclass
class CertificationReport:
    outcome: Outcome
    core_size: int
    wall_time: float = 0.0
    seed: int | None = None
    mate: Graph | None = None
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CertifyBudget:
    """Limits after which certification reports TERMINATED."""

    max_bits: int = MAX_BITS
    max_points: int = 1 << 12  # projective points tried per kernel
    factor_bits: int = 160  # largest cofactor handed to the general factorer
    gm_limit: int = 50
    gm_sizes: tuple[int, ...] = (2, 3)
    census_max_n: int = 8
    seconds: float | None = None


# -- walk matrices ---------------------------------------------------------


def walk_matrix(g: Graph) -> WalkMatrix:
    """Columns e, Ae, ..., A^{n-1} e in exact integers, with rational rank."""
    n = g.n
    cols = [[1] * n]
    for _ in range(1, n):
        prev = cols[-1]
        cols.append([sum(prev[w] for w in g.adj[v]) for v in range(n)])
    rows = [[cols[j][i] for j in range(n)] for i in range(n)]
    return WalkMatrix(tuple(map(tuple, rows)), rank(rows) if n else 0)


def controllability_class(g: Graph | WalkMatrix) -> Controllability:
    w = g if isinstance(g, WalkMatrix) else walk_matrix(g)
    if w.rank == w.n:
        return Controllability.CONTROLLABLE
    if w.rank == w.n - 1:
        return Controllability.ALMOST_CONTROLLABLE
    return Controllability.NEITHER


def kernel_final_column(w: WalkMatrix | Sequence[Sequence[int]]) -> list[int]:
    """Cofactor vector of the last column, via one kernel vector and one cofactor.

    For a rank n-1 matrix the cofactors ``c_i = (-1)^(i+n) det(W minus row i,
    minus column n)`` form a vector in the kernel of W^T (the last row of
    adj W).  It is the primitive kernel vector scaled by one cofactor.
    """
    rows = w.rows() if isinstance(w, WalkMatrix) else [list(map(int, r)) for r in w]
    n = len(rows)
    if rank(rows) != n - 1:
        raise ValueError("kernel_final_column needs a matrix of rank n - 1")
    (xi,) = rational_nullspace(transpose(rows))
    i = next(k for k, x in enumerate(xi) if x)
    minor = [r[: n - 1] for k, r in enumerate(rows) if k != i]
    cof = (-1) ** (i + n - 1) * bareiss_det(minor)
    if cof % xi[i]:
        raise ArithmeticError("cofactor not a multiple of the kernel vector entry")
    scale = cof // xi[i]
    return [scale * x for x in xi]


def modified_walk_matrix(w: WalkMatrix) -> list[list[int]]:
    """W itself if controllable; otherwise W with the last column replaced by its cofactor vector."""
    rows = w.rows()
    if w.rank == w.n:
        return rows
    if w.rank != w.n - 1:
        raise ValueError("walk matrix has rank below n - 1")
    c = kernel_final_column(w)
    return [r[:-1] + [c[i]] for i, r in enumerate(rows)]


def default_modulus(dn: int) -> int | None:
    """Smallest prime power p^a >= dn^2 with p | dn (None when dn is 1 or 0)."""
    dn = abs(dn)
    if dn <= 1:
        return None
    best = None
    for p in factorint(dn):
        q = p
        while q < dn * dn:
            q *= p
        best = q if best is None else min(best, q)
    return best


def walk_smith_form(g: Graph, modulus: int | str | None = "auto") -> SnfResult:
    """Smith form of the modified walk matrix.

    ``modulus="auto"`` keeps V modulo :func:`default_modulus` of the last
    invariant factor; ``None`` computes V exactly.
    """
    what = modified_walk_matrix(walk_matrix(g))
    if modulus == "auto":
        det, adj = adjugate_solve(what)
        delta = 0
        for row in adj:
            for v in row:
                delta = math.gcd(delta, v)
        modulus = default_modulus(abs(det) // delta) if delta else None
    return smith_normal_form(what, modulus)


# -- factoring ---------------------------------------------------------------


class _FactoringFailed(Exception):
    pass


def _prime_factors(x: int, max_bits: int) -> set[int]:
    x = abs(x)
    if x <= 1:
        return set()
    small = factorint(x, limit=1 << 16)
    out = set()
    for f in small:
        if isprime(f):
            out.add(f)
        elif f.bit_length() > max_bits:
            raise _FactoringFailed(f"cofactor of {f.bit_length()} bits left unfactored")
        else:
            out.update(factorint(f))
    return out


# -- per-prime exclusion -------------------------------------------------------


def _row_reduce_mod(rows: list[list[int]], p: int) -> list[list[int]]:
    """Reduced row echelon basis of the row space over F_p."""
    rows = [[x % p for x in r] for r in rows]
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    return rows[:r]


def _invariant_kernel(g: Graph, what: list[list[int]], p: int) -> list[list[int]]:
    """Basis of the largest A-invariant subspace of ker(W_hat^T mod p).

    For p = 2 the subspace is further cut down to vectors z with
    z^T A^j z even for every j, a necessary condition for the quadratic
    tests below to be well posed.
    """
    n = g.n
    c = transpose(what)
    if p == 2:
        diag = [1] * n  # diag(A^j) mod 2, by j
        walks = [[int(i == k) for k in range(n)] for i in range(n)]
        for _ in range(n):
            c.append([diag[i] for i in range(n)])
            walks = [[sum(walks[w][k] for w in g.adj[i]) % 2 for k in range(n)] for i in range(n)]
            diag = [walks[i][i] for i in range(n)]
    # constraint rows: z in K iff C z = 0; close C under C -> C A
    c = _row_reduce_mod(c, p)
    while True:
        ca = [[sum(r[w] for w in g.adj[v]) % p for v in range(n)] for r in c]
        c2 = _row_reduce_mod(c + ca, p)
        if len(c2) == len(c):
            break
        c = c2
    if not c:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    return nullspace_mod(c, p)


def _solve_mod(rows: list[list[int]], rhs: list[int], p: int) -> list[int] | None:
    """One solution of rows x = rhs over F_p, or None."""
    aug = _row_reduce_mod([r + [b] for r, b in zip(rows, rhs)], p)
    d = len(rows[0]) if rows else 0
    x = [0] * d
    for r in aug:
        lead = next(i for i, v in enumerate(r) if v)
        if lead == d:
            return None
        x[lead] = r[d]
    return x


def _quadratic_data(g: Graph, basis: list[list[int]], p: int):
    """Gram matrices G_j[a][b] = k_a^T A^j k_b (mod 4 when p = 2, else mod p), j < n."""
    return _gram_forms(g, basis, 4 if p == 2 else p)


def _relation_ok(g: Graph, z: list[int], p: int) -> bool:
    """Second-order test on a candidate column z (mod p) of l Q.

    With m the minimal polynomial of z under A over F_p lifted to integers,
    m(A) u = p y for any integer lift u, and u^T h(A) m(A) u is divisible by
    l^2 for every h.  Hence z^T A^i y = 0 (mod p) for all i.
    """
    n = g.n
    krylov = [list(z)]
    red = _row_reduce_mod([z], p)
    while True:
        nxt = [sum(krylov[-1][w] for w in g.adj[v]) % p for v in range(n)]
        trial = _row_reduce_mod(red + [nxt], p)
        if len(trial) == len(red):
            break
        red = trial
        krylov.append(nxt)
    d = len(krylov)
    # A^d z = sum_i a_i A^i z over F_p
    coeffs = _solve_mod([[krylov[i][k] for i in range(d)] for k in range(n)], nxt, p)
    if coeffs is None:
        raise ArithmeticError("Krylov relation not found")
    # exact integers: m(A) z = A^d z - sum a_i A^i z
    powers = [list(z)]
    for _ in range(d):
        powers.append([sum(powers[-1][w] for w in g.adj[v]) for v in range(n)])
    mz = [powers[d][k] - sum(coeffs[i] * powers[i][k] for i in range(d)) for k in range(n)]
    if any(x % p for x in mz):
        raise ArithmeticError("relation does not vanish mod p")
    y = [x // p for x in mz]
    for _ in range(n):
        if sum(a * b for a, b in zip(z, y)) % p:
            return False
        y = [sum(y[w] for w in g.adj[v]) % p for v in range(n)]
    return True


def _two_adic_ok(g: Graph, z: list[int]) -> bool:
    """Extra conditions for a candidate column z (mod 2) of l Q when l is even.

    Write u = z + 2w.  Since Q^T W_G = W_H, W^T u = l r with r a row of W_H,
    and u^T A^k u = l^2 (A_H^k)_jj.  Closed walks of length 2m that are not
    palindromes pair up, so (A_H^{2m})_jj = r_m (mod 2).
    * l = 2 (mod 4): z^T A^{2m} z / 4 + (A^{2m} z) . w = z^T A^m e / 2 (mod 2)
      must be solvable in w.
    * 4 | l: W^T u = 0 (mod 4) must be solvable in w.
    """
    n = g.n

    def step(v, mod):
        return [sum(v[w] for w in g.adj[x]) % mod for x in range(n)]

    # case l = 2 (mod 4)
    rows, rhs = [], []
    half = list(z)  # A^m z mod 8
    full = list(z)  # A^{2m} z mod 2
    for _ in range(n):
        norm = sum(x * x for x in half) % 8
        walk = sum(half) % 4
        if norm % 4 or walk % 2:
            break
        rows.append([x % 2 for x in full])
        rhs.append((norm // 4 + walk // 2) % 2)
        half = step(half, 8)
        full = step(step(full, 2), 2)
    else:
        if _solve_mod(rows, rhs, 2) is not None:
            return True
    # case 4 | l: e^T A^k z + 2 (A^k e) . w = 0 (mod 4)
    rows, rhs = [], []
    ak_z, ak_e = list(z), [1] * n
    for _ in range(n):
        t = sum(ak_z) % 4
        if t % 2:
            return False
        rows.append([x % 2 for x in ak_e])
        rhs.append(t // 2)
        ak_z, ak_e = step(ak_z, 4), step(ak_e, 2)
    return _solve_mod(rows, rhs, 2) is not None


def _form_zeros(g: Graph, kstar: list[list[int]], p: int, limit: int):
    """Nonzero z in span(kstar) (projectively for odd p) with z^T A^j z = 0 for j < n.

    Zeros are taken mod p, and mod 4 when p = 2.
    """
    d = len(kstar)
    grams = _quadratic_data(g, kstar, p)
    count = 0

    def emit(x):
        nonlocal count
        count += 1
        if count > limit:
            raise BudgetExceeded("too many kernel vectors to examine")
        return [sum(c * k[i] for c, k in zip(x, kstar)) % p for i in range(g.n)]

    if p != 2:
        for x in _projective_points([[int(i == j) for j in range(d)] for i in range(d)], p, limit):
            if all(sum(x[a] * int(gm[a][b]) * x[b] for a in range(d) for b in range(d)) % p == 0 for gm in grams):
                yield emit(x)
        return

    # p = 2: Q_j(x) = F_j(x)/2 mod 2 with Q_j(x + y) = Q_j(x) + Q_j(y) + b_j(x, y).
    # On the common radical R of the polar forms b_j each Q_j is additive,
    # so for every s in a complement of R the zeros in s + R form an affine space.
    def q(gm, x):
        return (sum(x[a] * x[b] * int(gm[a][b]) for a in range(d) for b in range(d)) % 4) // 2

    def b(gm, x, y):
        return sum(x[a] * int(gm[a][c]) * y[c] for a in range(d) for c in range(d)) % 2

    polar = [[int(v) % 2 for v in row] for gm in grams for row in gm]
    rad = nullspace_mod(polar, 2)
    comp = _complement(rad, d)
    if len(comp) >= limit.bit_length():
        raise BudgetExceeded("kernel complement too large to enumerate")
    qr = [[q(gm, r) for r in rad] for gm in grams]
    for mask in range(1 << len(comp)):
        s = [0] * d
        for i, v in enumerate(comp):
            if mask >> i & 1:
                s = [(x + y) % 2 for x, y in zip(s, v)]
        if not rad:
            if mask and all(q(gm, s) == 0 for gm in grams):
                yield emit(s)
            continue
        rows = [[(qr[j][i] + b(gm, s, r)) % 2 for i, r in enumerate(rad)] for j, gm in enumerate(grams)]
        base = _solve_mod(rows, [q(gm, s) for gm in grams], 2)
        if base is None:
            continue
        free = nullspace_mod(rows, 2)
        if len(free) >= limit.bit_length():
            raise BudgetExceeded("too many kernel vectors to examine")
        for sub in range(1 << len(free)):
            coef = list(base)
            for i, f in enumerate(free):
                if sub >> i & 1:
                    coef = [(x + y) % 2 for x, y in zip(coef, f)]
            x = list(s)
            for c, r in zip(coef, rad):
                if c:
                    x = [(u + v) % 2 for u, v in zip(x, r)]
            if any(x):
                yield emit(x)


def level_candidates(g: Graph, what: list[list[int]], p: int, max_points: int = 1 << 12) -> list[list[int]]:
    """Vectors that could be a column of l Q reduced mod p, were p to divide l.

    If p | l for M = l Q integral, some column u of M is nonzero mod p and
    lies in the A-invariant kernel K of W_hat^T mod p; u^T A^j u is divisible
    by l^2, so z = u mod p is a common zero of the forms z^T A^j z (mod p,
    or mod 4 for p = 2) and passes the relation test (and the 2-adic test).
    The column space V of M mod p is A-invariant and every nonzero vector of
    V passes the same tests, so a candidate is kept only if its whole cyclic
    span consists of candidates.
    """
    kstar = _invariant_kernel(g, what, p)
    if not kstar:
        return []
    cands = [_normalize(z, p) for z in _form_zeros(g, kstar, p, max_points)
             if _relation_ok(g, z, p) and (p != 2 or _two_adic_ok(g, z))]
    pool = set(cands)
    return [list(z) for z in cands if _span_inside(g, list(z), p, pool)]


def _normalize(z: list[int], p: int) -> tuple[int, ...]:
    lead = next(x for x in z if x % p)
    inv = pow(lead, -1, p)
    return tuple(x * inv % p for x in z)


def _span_inside(g: Graph, z: list[int], p: int, pool: set) -> bool:
    """Every nonzero vector of the cyclic span of z lies in ``pool`` (up to scaling)."""
    basis = [z]
    red = _row_reduce_mod([z], p)
    while True:
        nxt = [sum(basis[-1][w] for w in g.adj[v]) % p for v in range(g.n)]
        trial = _row_reduce_mod(red + [nxt], p)
        if len(trial) == len(red):
            break
        if (p ** len(trial) - 1) // (p - 1) > len(pool):
            return False
        red = trial
        basis.append(nxt)
    for pt in _projective_points(basis, p, len(pool) + 1):
        if _normalize(pt, p) not in pool:
            return False
    return True


def prime_excluded(g: Graph, what: list[list[int]], p: int, max_points: int = 1 << 12) -> bool:
    """True if no vector of the kernel mod p survives the single-prime tests."""
    return not level_candidates(g, what, p, max_points)


def _valuation(x: int, p: int) -> int:
    k = 0
    while x and x % p == 0:
        x //= p
        k += 1
    return k


def _gram_forms(g: Graph, cols: list[list[int]], mod: int) -> list[list[list[int]]]:
    """G_j[a][b] = c_a^T A^j c_b mod ``mod`` for j < n."""
    big = mod > 1 << 20
    dt = object if big else np.int64
    a = np.array(g.adjacency_matrix(), dtype=dt)
    k = np.array(cols, dtype=dt).T % mod
    cur = k.copy()
    out = []
    for _ in range(g.n):
        out.append(((k.T @ cur) % mod).tolist())
        cur = (a @ cur) % mod
    return out


def _level_feasible(g: Graph, what: list[list[int]], p: int, vp: int, pool: set,
                    limit: int) -> dict[int, list[int] | None]:
    """For each exponent 2 <= a <= vp, supports of admissible columns u mod p if p^a | l.

    With U W_hat^T V = diag(p^v_i) over Z/p^(vp+1), the columns u with
    W_hat^T u = 0 (mod p^a) are u = sum_i p^e_i x_i V_i, e_i = max(0, a - v_i).
    Modulo c = a + 1 (p = 2) or c = a (odd p) the forms u^T A^j u only see
    digits of u of weight below a.  Digits of weight a - 1 enter linearly
    (their squares and mutual products vanish mod p^c), so the lower digits
    are enumerated and the top ones solved as a linear system over F_p;
    coordinates with v_i = 0 drop out.  ``None`` marks a level whose
    enumeration ran over budget.
    """
    vals, _, vmat = smith_form_mod_prime_power(transpose(what), p, vp + 1)
    cols = [[vmat[r][i] for r in range(len(vmat))] for i in range(len(vals))]
    n = g.n
    out: dict[int, list[int] | None] = {}
    for a in range(2, vp + 1):
        c = a + 1 if p == 2 else a
        deep = [i for i, v in enumerate(vals) if v >= a]
        mid = [i for i, v in enumerate(vals) if 1 <= v < a]
        if not deep:
            out[a] = []
            continue
        e = {i: max(0, a - vals[i]) for i in deep + mid}
        inner = p ** ((len(deep) - 1) * (a - 2) + sum(vals[i] - 1 for i in mid))
        if inner > limit:
            out[a] = None
            continue
        idx = deep + mid
        grams = _gram_forms(g, [cols[i] for i in idx], p ** c)
        pos = {i: t for t, i in enumerate(idx)}
        basis = [[cols[i][r] % p for i in deep] for r in range(n)]
        sizes: list[int] = []
        count = 0
        for zn in pool:
            xd = _solve_mod(basis, list(zn), p)
            if xd is None:
                continue
            lead = next(k for k, x in enumerate(xd) if x)
            inv = pow(xd[lead], -1, p)
            xd = [x * inv % p for x in xd]
            ranges = []
            for k, (i, x0) in enumerate(zip(deep, xd)):
                ranges.append([1] if k == lead else [x0 + p * t for t in range(p ** (a - 2))])
            for i in mid:
                ranges.append(range(p ** (vals[i] - 1)))
            top = [i for k, i in enumerate(deep) if k != lead] + mid
            for xs in itertools.product(*ranges):
                count += 1
                if count > limit:
                    break
                if _level_system_ok(grams, pos, dict(zip(idx, xs)), e, deep, top, p, a, c):
                    sizes.append(sum(1 for x in zn if x))
                    break
            if count > limit:
                break
        out[a] = None if count > limit else sizes
    return out


def _level_system_ok(grams, pos, xv, e, deep, top, p, a, c) -> bool:
    """Is F_j(u_low + p^(a-1) t) = 0 (mod p^c) for all j solvable in the top digits t?"""
    mod = p ** c
    step = p ** (c - 1)
    rows, rhs = [], []
    keys = list(xv)
    for gm in grams:
        const = 0
        for i in keys:
            for k in keys:
                w = e[i] + e[k]
                if w < c:
                    const += p ** w * xv[i] * xv[k] * gm[pos[i]][pos[k]]
        const %= mod
        if const % step:
            return False
        row = []
        for t in top:
            co = sum(xv[d] * gm[pos[d]][pos[t]] for d in deep)
            if p == 2:
                co += gm[pos[t]][pos[t]] if a == 2 else 0
            else:
                co *= 2
            row.append(co % p)
        rows.append(row)
        rhs.append((-(const // step)) % p)
    if not top:
        return all(r == 0 for r in rhs)
    return _solve_mod(rows, rhs, p) is not None


def refine_by_support(g: Graph, what: list[list[int]], dn: int, survivors: dict[int, list[list[int]]],
                      limit: int = 1 << 12) -> list[int]:
    """Primes that may still divide the level, combining all exponents a.

    A column u of M = l Q has u^T u = l^2, so at most l^2 of its entries are
    nonzero mod p.  For each prime and each exponent a the admissible columns
    mod p are listed together with their supports; the rest of l is bounded
    by the largest still-feasible power of every other prime.
    """
    vps = {p: _valuation(dn, p) for p in survivors}
    levels: dict[int, dict[int, list[int]]] = {}
    for p, zs in survivors.items():
        if not zs:
            continue
        pool = {_normalize(z, p) for z in zs}
        lv = {1: [sum(1 for x in z if x) for z in zs]}
        # p^a | l implies p^(a-1) | l for the same column u, so levels are
        # nested: an empty level ends the list and a level over budget
        # inherits the supports of the level below it
        for a, sizes in sorted(_level_feasible(g, what, p, vps[p], pool, limit).items()):
            if sizes is None:
                sizes = lv[a - 1]
            if not sizes:
                break
            lv[a] = sizes
        levels[p] = lv
    alive = {p: max(levels[p]) for p in levels}
    while True:
        new = {}
        for p in alive:
            other = 1
            for q, aq in alive.items():
                if q != p:
                    other *= q ** aq
            best = 0
            for a, sizes in levels[p].items():
                if any(s <= (p ** a * other) ** 2 for s in sizes):
                    best = max(best, a)
            if best:
                new[p] = best
        if new == alive:
            return sorted(alive)
        alive = new


def _projective_points(basis: list[list[int]], p: int, limit: int):
    d = len(basis)
    if d and (p ** d - 1) // (p - 1) > limit:
        raise BudgetExceeded("too many kernel vectors to examine")
    count = 0
    for lead in range(d):
        for tail in itertools.product(range(p), repeat=d - lead - 1):
            coeffs = [0] * lead + [1] + list(tail)
            count += 1
            if count > limit:
                raise BudgetExceeded("too many kernel vectors to examine")
            yield [sum(c * b[k] for c, b in zip(coeffs, basis)) % p for k in range(len(basis[0]))]


def _complement(sub: list[list[int]], d: int) -> list[list[int]]:
    """Unit vectors completing a basis of ``sub`` to F_2^d."""
    out: list[list[int]] = []
    cur = _row_reduce_mod(sub, 2) if sub else []
    for i in range(d):
        e = [int(i == j) for j in range(d)]
        trial = _row_reduce_mod(cur + [e], 2)
        if len(trial) > len(cur):
            cur = trial
            out.append(e)
    return out


# -- main entry -------------------------------------------------------------


def _gm_mate(g: Graph, budget: CertifyBudget) -> Graph | None:
    from .switching import apply_switch, gm_find_sets

    for k in budget.gm_sizes:
        if 2 * k > g.n:
            continue
        for s in gm_find_sets(g, k, budget.gm_limit, nontrivial=True):
            h = apply_switch(g, s.switch())
            if not is_isomorphic(g, h):
                return h
    return None


def _verified(g: Graph, h: Graph) -> Graph:
    if not are_r_cospectral(g, h) or is_isomorphic(g, h):
        raise AssertionError("candidate mate failed R-cospectral / non-isomorphic verification")
    return h


def certify(g: Graph, budget: CertifyBudget | None = None, seed: int | None = None,
            use_census: bool = True) -> CertificationReport:
    budget = budget or CertifyBudget()
    t0 = time.perf_counter()
    rep = _certify(g, budget, use_census)
    rep.wall_time = time.perf_counter() - t0
    rep.seed = seed
    if rep.outcome is Outcome.MATE_FOUND:
        _verified(g, rep.mate)
    return rep


def _certify(g: Graph, budget: CertifyBudget, use_census: bool) -> CertificationReport:
    n = g.n
    if n <= 1:
        return CertificationReport(Outcome.DETERMINED, n, details={"reason": "at most one vertex"})
    w = walk_matrix(g)
    cls = controllability_class(w)
    details: dict = {"class": cls.value, "rank": w.rank}
    if cls is Controllability.NEITHER:
        return CertificationReport(Outcome.INCONCLUSIVE_RANK, n, details=details)

    if use_census:
        from .census import census_available, lookup

        if n <= budget.census_max_n or census_available(n):
            det, mate = lookup(g)
            details["reason"] = "census"
            if det:
                return CertificationReport(Outcome.DETERMINED, n, details=details)
            return CertificationReport(Outcome.MATE_FOUND, n, mate=mate, details=details)

    try:
        what = modified_walk_matrix(w)
        det, adj = adjugate_solve(what, budget.max_bits)
        delta = 0
        for row in adj:
            for v in row:
                delta = math.gcd(delta, v)
        dn = abs(det) // delta
        details["log2_dn"] = round(math.log2(dn), 2) if dn > 0 else 0
        if dn == 1:
            details["reason"] = "d_n = 1"
            return CertificationReport(Outcome.DETERMINED, n, details=details)
        # diag(X X^T) with X = adj / delta
        gdiag = dn
        for row in adj:
            gdiag = math.gcd(gdiag, sum((v // delta) ** 2 for v in row))
            if gdiag == 1:
                break
        try:
            candidates = _prime_factors(delta, budget.factor_bits) | _prime_factors(gdiag, budget.factor_bits)
        except _FactoringFailed as exc:
            details["reason"] = str(exc)
            return CertificationReport(Outcome.TERMINATED, n, details=details)
        if dn % 2 == 0:
            candidates.add(2)
        candidates = {p for p in candidates if dn % p == 0}
        details["candidate_primes"] = sorted(candidates)
        survivors = {p: level_candidates(g, what, p, budget.max_points) for p in sorted(candidates)}
        remaining = refine_by_support(g, what, dn, survivors, budget.max_points)
        details["remaining_primes"] = remaining
    except (EntryTooLarge, BudgetExceeded) as exc:
        details["reason"] = str(exc)
        return CertificationReport(Outcome.TERMINATED, n, details=details)

    if not remaining:
        details["reason"] = "all candidate primes excluded"
        return CertificationReport(Outcome.DETERMINED, n, details=details)
    try:
        mate = _gm_mate(g, budget)
    except BudgetExceeded as exc:
        details["reason"] = str(exc)
        return CertificationReport(Outcome.TERMINATED, n, details=details)
    if mate is not None:
        return CertificationReport(Outcome.MATE_FOUND, n, mate=mate, details=details)
    details["reason"] = "level primes not excluded and no switching mate found"
    return CertificationReport(Outcome.TERMINATED, n, details=details)
