"""Integral LLL reduction (exact; no floating point).

The Gram-Schmidt data is kept as the integers d_i (leading Gram minors) and
lambda_ij = d_j * mu_ij, following the classical all-integer formulation, so
the Lovasz test is evaluated exactly for any rational delta.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..exact.intmat import hnf, nonzero_rows, rank_q


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)) -> list[list[int]]:
    """delta-LLL-reduce the rows of an integer matrix.

    Dependent rows are allowed: they are first replaced by an HNF basis of the
    lattice they generate, so the output has rank-many rows.
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError("delta must lie in (1/4, 1)")
    b = [list(map(int, r)) for r in basis if any(r)]
    if not b:
        return []
    if rank_q(b) < len(b):
        b = nonzero_rows(hnf(b))
    n = len(b)
    dn, dd = delta.numerator, delta.denominator
    d = [0] * (n + 1)  # d[0] = 1, d[i+1] = Gram det of first i+1 vectors
    lam = [[0] * n for _ in range(n)]
    d[0] = 1

    def gram_row(k: int) -> None:
        for j in range(k + 1):
            u = _dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                d[k + 1] = u

    def red(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k: int, kmax: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        mu = lam[k][k - 1]
        big = (d[k - 1] * d[k + 1] + mu * mu) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - mu * t) // d[k]
            lam[i][k - 1] = (big * t + mu * lam[i][k]) // d[k + 1]
        d[k] = big

    gram_row(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            gram_row(k)
        red(k, k - 1)
        # Lovasz: d_{k+1} d_{k-1} >= (delta d_k^2 - lam^2)  (all scaled by dd)
        if dd * d[k + 1] * d[k - 1] < dn * d[k] * d[k] - dd * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return b


def gram_schmidt_q(basis: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Exact rational Gram-Schmidt: returns (b_star, mu)."""
    n = len(basis)
    bstar: list[list[Fraction]] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    norms: list[Fraction] = []
    for i in range(n):
        v = [Fraction(x) for x in basis[i]]
        for j in range(i):
            mu[i][j] = sum(Fraction(x) * y for x, y in zip(basis[i], bstar[j])) / norms[j]
            v = [a - mu[i][j] * c for a, c in zip(v, bstar[j])]
        bstar.append(v)
        norms.append(sum(x * x for x in v))
    return bstar, mu


def is_lll_reduced(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)) -> bool:
    """Check size reduction and the Lovasz condition exactly."""
    if not basis:
        return True
    bstar, mu = gram_schmidt_q(basis)
    norms = [sum(x * x for x in v) for v in bstar]
    n = len(basis)
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if norms[k] < (Fraction(delta) - mu[k][k - 1] ** 2) * norms[k - 1]:
            return False
    return True


def gs_min_norm_sq(basis: Sequence[Sequence[int]]) -> Fraction:
    """min_i |b_i*|^2, a lower bound for the squared length of every nonzero lattice vector."""
    bstar, _ = gram_schmidt_q(basis)
    return min(sum(x * x for x in v) for v in bstar)
