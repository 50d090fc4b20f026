"""Exact integer and modular linear algebra.

Matrices are lists of rows of Python ints.  Nothing here touches floating
point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

__all__ = [
    "EntryTooLarge",
    "Matrix",
    "identity",
    "transpose",
    "matmul",
    "bareiss_det",
    "rank",
    "adjugate_solve",
    "rational_nullspace",
    "primitive",
    "nullspace_mod",
    "SnfResult",
    "smith_normal_form",
    "smith_form_mod_prime_power",
]

Matrix = list[list[int]]

MAX_BITS = 1 << 20


class EntryTooLarge(ArithmeticError):
    """An intermediate integer exceeded the configured bit budget."""


def _check(x: int, max_bits: int) -> None:
    if x.bit_length() > max_bits:
        raise EntryTooLarge(f"intermediate value has {x.bit_length()} bits (limit {max_bits})")


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(r) for r in zip(*a)] if a else []


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


def _copy(a) -> Matrix:
    return [[int(x) for x in r] for r in a]


def bareiss_det(a: Sequence[Sequence[int]], max_bits: int = MAX_BITS) -> int:
    m = _copy(a)
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            ri, rk = m[i], m[k]
            for j in range(k + 1, n):
                ri[j] = (pk * ri[j] - mik * rk[j]) // prev
            ri[k] = 0
        prev = pk
        _check(pk, max_bits)
    return sign * m[n - 1][n - 1]


def rank(a: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free elimination."""
    m = _copy(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    r, prev = 0, 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pk = m[r][c]
        for i in range(r + 1, rows):
            mic = m[i][c]
            ri, rr = m[i], m[r]
            for j in range(c + 1, cols):
                ri[j] = (pk * ri[j] - mic * rr[j]) // prev
            ri[c] = 0
        prev = pk
        r += 1
        if r == rows:
            break
    return r


def adjugate_solve(a: Sequence[Sequence[int]], max_bits: int = MAX_BITS) -> tuple[int, Matrix]:
    """``(det A, adj A)`` for a square integer matrix, by fraction-free elimination.

    Raises ZeroDivisionError when ``A`` is singular.
    """
    n = len(a)
    m = [list(map(int, r)) + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    w = 2 * n
    sign, prev = 1, 1
    for k in range(n):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                raise ZeroDivisionError("matrix is singular")
        pk = m[k][k]
        _check(pk, max_bits)
        for i in range(k + 1, n):
            mik = m[i][k]
            ri, rk = m[i], m[k]
            for j in range(k + 1, w):
                ri[j] = (pk * ri[j] - mik * rk[j]) // prev
            ri[k] = 0
        prev = pk
    det_u = m[n - 1][n - 1]  # determinant of the row-permuted matrix
    det = sign * det_u
    # back substitution for X = det_u * A^{-1}; every quotient is exact
    x = [[0] * n for _ in range(n)]
    for col in range(n):
        for i in range(n - 1, -1, -1):
            s = det_u * m[i][n + col] - sum(m[i][j] * x[j][col] for j in range(i + 1, n))
            q, r = divmod(s, m[i][i])
            if r:
                raise ArithmeticError("inexact division in adjugate back substitution")
            x[i][col] = q
    if sign < 0:
        x = [[-v for v in r] for r in x]
    return det, x


def primitive(v: Sequence[int]) -> list[int]:
    """Divide an integer vector by the gcd of its entries; first nonzero entry positive."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return [0] * len(v)
    out = [int(x) // g for x in v]
    lead = next(x for x in out if x)
    return [-x for x in out] if lead < 0 else out


def rational_nullspace(a: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of {x : A x = 0} over Q, as primitive integer vectors."""
    rows = [[Fraction(x) for x in r] for r in a]
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * nc
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rows[i][f]
        den = 1
        for x in vec:
            den = den * x.denominator // gcd(den, x.denominator)
        basis.append(primitive([int(x * den) for x in vec]))
    return basis


def nullspace_mod(a: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Basis of {x : A x = 0 (mod p)} for a prime p, entries in [0, p)."""
    rows = [[int(x) % p for x in r] for r in a]
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        vec = [0] * nc
        vec[f] = 1
        for i, c in enumerate(pivots):
            vec[c] = (-rows[i][f]) % p
        basis.append(vec)
    return basis


# -- Smith normal form -----------------------------------------------------


@dataclass
class SnfResult:
    """``U M V = diag(divisors)`` (padded with zeros), exactly or mod ``modulus``."""

    divisors: list[int]
    u: Matrix
    v: Matrix
    modulus: int | None = None

    def diagonal(self, rows: int, cols: int) -> Matrix:
        d = [[0] * cols for _ in range(rows)]
        for i, x in enumerate(self.divisors):
            d[i][i] = x
        return d


def smith_normal_form(m: Sequence[Sequence[int]], modulus: int | None = None,
                      max_bits: int = MAX_BITS) -> SnfResult:
    """Smith normal form with unimodular transforms.

    The elimination always runs on the exact matrix, so the divisors (and
    every pivot choice) are identical with or without ``modulus``.  When a
    modulus is given, ``U`` and ``V`` are only kept modulo it, which keeps
    their entries small; the result then satisfies ``U M V = D (mod modulus)``
    and agrees entrywise, modulo ``modulus``, with the exact transforms.
    """
    a = _copy(m)
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = identity(nr)
    v = identity(nc)

    def red(x):
        return x % modulus if modulus else x

    def row_op(i, k, q):  # R_i -= q R_k
        if q:
            a[i] = [x - q * y for x, y in zip(a[i], a[k])]
            u[i] = [red(x - q * y) for x, y in zip(u[i], u[k])]

    def col_op(j, k, q):  # C_j -= q C_k
        if q:
            for row in a:
                row[j] -= q * row[k]
            for row in v:
                row[j] = red(row[j] - q * row[k])

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    divisors: list[int] = []
    for t in range(min(nr, nc)):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i0, j0 = best
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            changed = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    row_op(i, t, a[i][t] // a[t][t])
            for j in range(t + 1, nc):
                if a[t][j]:
                    col_op(j, t, a[t][j] // a[t][t])
            # move a smaller remainder into the pivot and repeat
            cand = [(abs(a[i][t]), i, "r") for i in range(t + 1, nr) if a[i][t]]
            cand += [(abs(a[t][j]), j, "c") for j in range(t + 1, nc) if a[t][j]]
            if cand:
                _, idx, kind = min(cand)
                if kind == "r":
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            piv = a[t][t]
            for i in range(t + 1, nr):
                bad = next((j for j in range(t + 1, nc) if a[i][j] % piv), None)
                if bad is not None:
                    # R_t += R_i brings a non-multiple into the pivot row
                    row_op(t, i, -1)
                    changed = True
                    break
            if not changed:
                break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [red(-x) for x in u[t]]
        _check(a[t][t], max_bits)
        divisors.append(a[t][t])
    return SnfResult(divisors, u, v, modulus)


def smith_form_mod_prime_power(m: Sequence[Sequence[int]], p: int, a: int = 1) -> tuple[list[int], Matrix, Matrix]:
    """Local Smith form over Z/p^a.

    Returns ``(valuations, U, V)`` with ``U M V = diag(p**valuations)`` times
    units, modulo ``p**a``; valuations are capped at ``a`` (``a`` means the
    entry vanishes modulo ``p**a``).  The matrix itself is reduced modulo
    ``p**a`` from the start, which is what makes this cheap on walk
    matrices with huge entries.
    """
    q = p ** a
    w = [[int(x) % q for x in r] for r in m]
    nr = len(w)
    nc = len(w[0]) if nr else 0
    u = identity(nr)
    v = identity(nc)

    def val(x):
        if x % q == 0:
            return a
        k = 0
        while x % p == 0:
            x //= p
            k += 1
        return k

    vals: list[int] = []
    for t in range(min(nr, nc)):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if w[i][j]:
                    vv = val(w[i][j])
                    if best is None or vv < best[0]:
                        best = (vv, i, j)
                        if vv == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            vals.extend([a] * (min(nr, nc) - t))
            break
        vv, i0, j0 = best
        w[t], w[i0] = w[i0], w[t]
        u[t], u[i0] = u[i0], u[t]
        for row in w:
            row[t], row[j0] = row[j0], row[t]
        for row in v:
            row[t], row[j0] = row[j0], row[t]
        piv = w[t][t]
        unit = piv // p ** vv
        inv = pow(unit, -1, q)
        # scale the pivot row so the pivot becomes p^vv exactly
        w[t] = [x * inv % q for x in w[t]]
        u[t] = [x * inv % q for x in u[t]]
        pv = p ** vv
        for i in range(t + 1, nr):
            x = w[i][t]
            if x:
                f = x // pv  # exact: pivot valuation is minimal
                w[i] = [(y - f * z) % q for y, z in zip(w[i], w[t])]
                u[i] = [(y - f * z) % q for y, z in zip(u[i], u[t])]
        for j in range(t + 1, nc):
            x = w[t][j]
            if x:
                f = x // pv
                for row in w:
                    row[j] = (row[j] - f * row[t]) % q
                for row in v:
                    row[j] = (row[j] - f * row[t]) % q
        vals.append(vv)
    return vals, u, v
