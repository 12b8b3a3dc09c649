"""Exact multiplicative relations among tuples of nonzero rationals.

A tuple x = (x_1..x_d) in (Q^x)^d is encoded by its sign vector in F_2^d and
its prime-exponent vector indexed by (coordinate, prime). Relations modulo
{+-1} are the integer kernel of the exponent matrix; the parity layer then
decides which of those products are exactly +1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .factor import RHO_BUDGET, factor_int
from .intmat import IntegerLattice, hnf, left_kernel, matmul, nonzero_rows, rank_q, saturate


def rat_factor(q: Fraction, budget: int = RHO_BUDGET) -> tuple[int, dict[int, int]]:
    """(sign, {p: e}) with e possibly negative."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("zero has no multiplicative factorization")
    sign, num = factor_int(q.numerator, budget)
    _, den = factor_int(q.denominator, budget)
    exps = dict(num)
    for p, e in den.items():
        exps[p] = exps.get(p, 0) - e
    return sign, {p: e for p, e in exps.items() if e}


def _as_tuples(xs: Sequence) -> list[tuple[Fraction, ...]]:
    out = []
    for x in xs:
        t = tuple(Fraction(v) for v in (x if isinstance(x, (tuple, list)) else (x,)))
        if any(v == 0 for v in t):
            raise ValueError("coordinates must be nonzero")
        out.append(t)
    if out and len({len(t) for t in out}) != 1:
        raise ValueError("all tuples must have the same length")
    return out


@dataclass(frozen=True)
class ExponentData:
    """Sign bits and prime exponents of m tuples in (Q^x)^d."""

    primes: tuple[int, ...]
    dim: int
    exponents: tuple[tuple[int, ...], ...]  # m x (d * len(primes)), coordinate-major
    signs: tuple[tuple[int, ...], ...]      # m x d in {0, 1}

    def coordinate_block(self, i: int, j: int) -> list[int]:
        k = len(self.primes)
        return list(self.exponents[i][j * k:(j + 1) * k])


def exponent_data(xs: Sequence, budget: int = RHO_BUDGET) -> ExponentData:
    tuples = _as_tuples(xs)
    d = len(tuples[0]) if tuples else 0
    facts = [[rat_factor(v, budget) for v in t] for t in tuples]
    primes = sorted({p for row in facts for _, e in row for p in e})
    exps, signs = [], []
    for row in facts:
        vec = []
        for _, e in row:
            vec.extend(e.get(p, 0) for p in primes)
        exps.append(tuple(vec))
        signs.append(tuple(0 if s > 0 else 1 for s, _ in row))
    return ExponentData(tuple(primes), d, tuple(exps), tuple(signs))


def mult_relation_lattice(xs: Sequence, budget: int = RHO_BUDGET) -> IntegerLattice:
    """All c in Z^m with prod x_i^c_i in {+-1}^d (coordinatewise)."""
    data = exponent_data(xs, budget)
    m = len(data.exponents)
    if m == 0:
        return IntegerLattice(0, ())
    mat = [list(r) for r in data.exponents]
    if not mat[0]:
        return IntegerLattice.from_generators([[int(i == j) for j in range(m)] for i in range(m)], m)
    return IntegerLattice.from_generators(left_kernel(mat), m)


def trivial_relation_lattice(xs: Sequence, budget: int = RHO_BUDGET) -> IntegerLattice:
    """All c in Z^m with prod x_i^c_i exactly (1, ..., 1); finite index in the torsion lattice."""
    data = exponent_data(xs, budget)
    tors = mult_relation_lattice(xs, budget)
    if tors.rank == 0:
        return tors
    k, d = tors.rank, data.dim
    # y in Z^k with (y K) S = 0 mod 2: left kernel of [[K S], [2 I_d]] restricted to y
    ks = matmul([list(r) for r in tors.basis], [list(s) for s in data.signs])
    aug = [list(r) for r in ks] + [[2 * int(i == j) for j in range(d)] for i in range(d)]
    ker = left_kernel(aug) if d else [[int(i == j) for j in range(k)] for i in range(k)]
    ys = [row[:k] for row in ker]
    gens = matmul(ys, [list(r) for r in tors.basis]) if ys else []
    return IntegerLattice.from_generators(nonzero_rows(gens), tors.ambient_rank)


def torsion_subgroup_order(xs: Sequence, budget: int = RHO_BUDGET) -> int:
    """Order of the torsion subgroup (inside {+-1}^d) of the group generated by xs."""
    data = exponent_data(xs, budget)
    tors = mult_relation_lattice(xs, budget)
    if tors.rank == 0:
        return 1
    images = matmul([list(r) for r in tors.basis], [list(s) for s in data.signs])
    return 2 ** _rank_f2([[v % 2 for v in row] for row in images])


def _rank_f2(rows: list[list[int]]) -> int:
    masks = [int("".join(map(str, r)), 2) if r else 0 for r in rows]
    rank = 0
    while masks:
        pivot = masks.pop()
        if not pivot:
            continue
        rank += 1
        top = pivot.bit_length() - 1
        masks = [m ^ pivot if (m >> top) & 1 else m for m in masks]
    return rank


def smallest_subtorus(generators: Sequence, budget: int = RHO_BUDGET) -> IntegerLattice:
    """Saturated lattice of characters (m_1..m_d) trivial on every generator up to sign.

    The smallest connected algebraic subgroup containing the generators (up to
    finite index) has dimension ``d - rank``.
    """
    data = exponent_data(generators, budget)
    d = data.dim
    k = len(data.primes)
    if not data.exponents:
        return IntegerLattice(d, ())
    # rows indexed by coordinate j, columns by (generator, prime)
    rows = []
    for j in range(d):
        row = []
        for i in range(len(data.exponents)):
            row.extend(data.coordinate_block(i, j))
        rows.append(row)
    if k == 0:
        chars = [[int(i == j) for j in range(d)] for i in range(d)]
    else:
        chars = left_kernel(rows)
    sat = saturate(chars, d) if chars else []
    return IntegerLattice.from_generators(sat, d)


def closure_rational_generators(vs: Sequence[Sequence]) -> tuple[list[list[Fraction]], str]:
    """Z-span of rational vectors: an HNF basis (scaled back to Q) and the verdict.

    Finitely generated subgroups of Q^n are always discrete in R^n.
    """
    rows = [[Fraction(v) for v in vec] for vec in vs]
    if not rows:
        return [], "discrete"
    n = len(rows[0])
    den = 1
    for r in rows:
        for v in r:
            den = lcm(den, v.denominator)
    ints = [[int(v * den) for v in r] for r in rows]
    basis = nonzero_rows(hnf(ints))
    assert len(basis) <= n
    return [[Fraction(v, den) for v in r] for r in basis], "discrete"


def evaluate_relation(xs: Sequence, c: Sequence[int]) -> tuple[Fraction, ...]:
    """prod x_i^c_i computed exactly, coordinatewise."""
    tuples = _as_tuples(xs)
    d = len(tuples[0])
    out = [Fraction(1)] * d
    for t, e in zip(tuples, c):
        for j in range(d):
            out[j] *= t[j] ** e
    return tuple(out)


def group_rank(xs: Sequence, budget: int = RHO_BUDGET) -> int:
    """Rank of the group generated by xs modulo torsion."""
    data = exponent_data(xs, budget)
    if not data.exponents or not data.exponents[0]:
        return 0
    return rank_q([list(r) for r in data.exponents])


def complement_basis(lattice: IntegerLattice) -> list[list[int]]:
    """Integer vectors completing a saturated lattice basis to a basis of Z^m.

    Used to pick generators of the torsion-free quotient Z^m / L.
    """
    m = lattice.ambient_rank
    if lattice.rank == 0:
        return [[int(i == j) for j in range(m)] for i in range(m)]
    from .intmat import snf

    _, factors, _, _, vinv = snf([list(r) for r in lattice.basis], transforms=True)
    if any(f != 1 for f in factors if f):
        raise ValueError("lattice is not saturated")
    k = lattice.rank
    return [list(r) for r in vinv[k:]]
