"""Exact characteristic polynomials of graphs.

No eigenvalue is ever computed in floating point: spectra are compared as
integer coefficient vectors.  The default algorithm reduces the adjacency
matrix to Hessenberg form modulo several 31-bit primes and recombines the
coefficients by CRT against an a-priori coefficient bound.
Faddeev-LeVerrier and principal-minor expansion are kept as independent
routes for cross-checking.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from sympy import prevprime

from .graph import Graph, complement

__all__ = [
    "IntPolynomial",
    "SpectralFingerprint",
    "char_poly",
    "char_poly_matrix",
    "char_poly_faddeev_leverrier",
    "char_poly_minors",
    "fingerprint",
    "are_cospectral",
    "are_r_cospectral",
    "path_char_poly",
    "cycle_char_poly",
    "poly_multiply",
]


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial; ``coeffs[i]`` is the coefficient of x**i."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Sequence[int]):
        c = [int(x) for x in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c) if c else (0,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        return poly_multiply(self, other)

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        k = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial([self[i] + other[i] for i in range(k)])

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        k = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial([self[i] - other[i] for i in range(k)])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_json(self) -> str:
        return json.dumps([str(c) for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> "IntPolynomial":
        return cls([int(s) for s in json.loads(text)])

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("x" if i == 1 else f"x^{i}")
            terms.append((c < 0, body))
        if not terms:
            return "0"
        neg, body = terms[0]
        out = ("-" if neg else "") + body
        for neg, body in terms[1:]:
            out += (" - " if neg else " + ") + body
        return out


X = IntPolynomial([0, 1])
ONE = IntPolynomial([1])


def poly_multiply(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                out[i + j] += x * y
    return IntPolynomial(out)


# -- multimodular Hessenberg ------------------------------------------------


@lru_cache(maxsize=None)
def _prime(i: int) -> int:
    return prevprime(2**31 if i == 0 else _prime(i - 1))


def _coefficient_bound(rows: list[list[int]]) -> int:
    """Bound on |coefficients| of det(xI - A) for an integer matrix A.

    The coefficient of x**(n-k) is a signed sum of k x k principal minors,
    each bounded by the product of its row norms (Hadamard), so the k-th
    elementary symmetric function of the ceiling row norms bounds it.
    """
    norms = [math.isqrt(sum(x * x for x in r)) + 1 for r in rows]
    e = [1] + [0] * len(norms)
    for r in norms:
        for k in range(len(e) - 1, 0, -1):
            e[k] += e[k - 1] * r
    return max(e)


def _charpoly_mod(a: np.ndarray, p: int) -> list[int]:
    """Coefficients (low degree first) of det(xI - A) mod p."""
    n = a.shape[0]
    h = a % p
    for m in range(1, n - 1):
        col = h[m:, m - 1]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        piv = m + int(nz[0])
        if piv != m:
            h[[piv, m], :] = h[[m, piv], :]
            h[:, [piv, m]] = h[:, [m, piv]]
        inv = pow(int(h[m, m - 1]), p - 2, p)
        u = (h[m + 1:, m - 1] * inv) % p
        if not u.any():
            continue
        # rows i > m: R_i -= u_i R_m ; then column m: C_m += sum_i u_i C_i
        h[m + 1:, :] = (h[m + 1:, :] - (u[:, None] * h[m, :][None, :]) % p) % p
        h[:, m] = (h[:, m] + ((h[:, m + 1:] * u[None, :]) % p).sum(axis=1)) % p
    # characteristic polynomial of an upper Hessenberg matrix by recurrence
    polys = [np.zeros(n + 1, dtype=np.int64)]
    polys[0][0] = 1
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = np.zeros(n + 1, dtype=np.int64)
        cur[1:] = prev[:-1]
        cur = (cur - (int(h[m - 1, m - 1]) * prev) % p) % p
        prod = 1
        for i in range(1, m):
            prod = prod * int(h[m - i, m - i - 1]) % p
            if prod == 0:
                break
            coef = prod * int(h[m - i - 1, m - 1]) % p
            if coef:
                cur = (cur - (coef * polys[m - i - 1]) % p) % p
        polys.append(cur)
    return [int(x) for x in polys[n]]


def char_poly_matrix(rows: Sequence[Sequence[int]]) -> IntPolynomial:
    """det(xI - A) for a square integer matrix, exactly."""
    rows = [[int(x) for x in r] for r in rows]
    n = len(rows)
    if n == 0:
        return ONE
    bound = 2 * _coefficient_bound(rows) + 1
    residues, moduli, modulus, i = [], [], 1, 0
    a_big = rows
    while modulus < bound:
        p = _prime(i)
        a = np.array([[x % p for x in r] for r in a_big], dtype=np.int64)
        residues.append(_charpoly_mod(a, p))
        moduli.append(p)
        modulus *= p
        i += 1
    coeffs = []
    for k in range(n + 1):
        x, m = 0, 1
        for r, p in zip(residues, moduli):
            # incremental CRT: x = x + m * ((r - x) / m mod p)
            t = ((r[k] - x) * pow(m, -1, p)) % p
            x += m * t
            m *= p
        if x > modulus // 2:
            x -= modulus
        coeffs.append(x)
    return IntPolynomial(coeffs)


def char_poly(g: Graph) -> IntPolynomial:
    return char_poly_matrix(g.adjacency_rows())


def char_poly_faddeev_leverrier(rows: Sequence[Sequence[int]]) -> IntPolynomial:
    """Faddeev-LeVerrier in exact integer arithmetic (O(n^4))."""
    a = [[int(x) for x in r] for r in rows]
    n = len(a)
    c = [0] * (n + 1)
    c[n] = 1
    m = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        am = [[sum(a[i][t] * m[t][j] for t in range(n) if a[i][t]) for j in range(n)] for i in range(n)]
        for i in range(n):
            am[i][i] += c[n - k + 1]
        m = am
        tr = sum(a[i][t] * m[t][i] for i in range(n) for t in range(n) if a[i][t])
        q, r = divmod(-tr, k)
        assert r == 0, "Faddeev-LeVerrier trace not divisible; non-integer input?"
        c[n - k] = q
    return IntPolynomial(c)


def _det_permutations(a: list[list[int]]) -> int:
    k = len(a)
    total = 0
    for perm in itertools.permutations(range(k)):
        prod = 1
        for i, j in enumerate(perm):
            prod *= a[i][j]
            if prod == 0:
                break
        if prod:
            inv = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
            total += -prod if inv & 1 else prod
    return total


def char_poly_minors(rows: Sequence[Sequence[int]]) -> IntPolynomial:
    """Sum of principal minors by permutation expansion; only for n <= 8."""
    a = [[int(x) for x in r] for r in rows]
    n = len(a)
    if n > 8:
        raise ValueError("principal-minor expansion is limited to n <= 8")
    c = [0] * (n + 1)
    c[n] = 1
    for k in range(1, n + 1):
        s = 0
        for sub in itertools.combinations(range(n), k):
            s += _det_permutations([[a[i][j] for j in sub] for i in sub])
        c[n - k] = (-1) ** k * s
    return IntPolynomial(c)


# -- predicates ---------------------------------------------------------


@dataclass(frozen=True)
class SpectralFingerprint:
    char_poly: IntPolynomial
    complement_char_poly: IntPolynomial


def fingerprint(g: Graph) -> SpectralFingerprint:
    return SpectralFingerprint(char_poly(g), char_poly(complement(g)))


def are_cospectral(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m:
        return False
    return char_poly(g) == char_poly(h)


def are_r_cospectral(g: Graph, h: Graph) -> bool:
    return are_cospectral(g, h) and char_poly(complement(g)) == char_poly(complement(h))


@lru_cache(maxsize=None)
def path_char_poly(n: int) -> IntPolynomial:
    """phi(P_n) from phi(P_n) = x phi(P_{n-1}) - phi(P_{n-2}), phi(P_0) = 1."""
    if n < 0:
        raise ValueError("path length must be non-negative")
    if n == 0:
        return ONE
    if n == 1:
        return X
    return X * path_char_poly(n - 1) - path_char_poly(n - 2)


def cycle_char_poly(n: int) -> IntPolynomial:
    """phi(C_n) = phi(P_n) - phi(P_{n-2}) - 2."""
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return path_char_poly(n) - path_char_poly(n - 2) - IntPolynomial([2])
