"""Structural rank of matrices of logarithms.

A matrix M = sum_i lambda_i B_i with Q-independent lambda_i and rational B_i
has structural rank s = generic rank of the pencil sum_i t_i B_i. The numeric
rank r of M satisfies r <= s <= 2r.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm, log2
from typing import Sequence

from .confidence import Confidence
from .errors import WaldschmidtViolation
from .exact.intmat import bareiss_rank, det_q, rref_q, transpose
from .exact.relations import rat_factor
from .real.ball import DEFAULT_PREC, Ball, ln_fraction
from .real.rank import NumericRank, certified_numeric_rank
from .real.relations import search_relations

BOX_EXPONENTS = (4, 8, 16)
SAMPLES_PER_BOX = 32
GRID_BUDGET = 20_000

RatMatrix = list[list[Fraction]]


@dataclass
class PencilDecomposition:
    lambda_basis: list[Ball]
    B_matrices: list[RatMatrix]
    confidence: Confidence
    labels: list[str] = field(default_factory=list)

    def reconstruct(self, i: int, j: int) -> Ball:
        prec = max((b.prec for b in self.lambda_basis), default=DEFAULT_PREC)
        acc = Ball(0, 0, prec)
        for lam, b in zip(self.lambda_basis, self.B_matrices):
            if b[i][j]:
                acc = acc + lam * b[i][j]
        return acc

    def to_json(self) -> dict:
        return {
            "lambda_basis": self.labels or [b.to_decimal(30) for b in self.lambda_basis],
            "B_matrices": [[[str(v) for v in row] for row in b] for b in self.B_matrices],
            "confidence": self.confidence.to_json(),
            "minimality": "minimal relative to detected relations" if not self.confidence.is_exact else "exact",
        }


def _shape(m: Sequence[Sequence]) -> tuple[int, int]:
    return len(m), len(m[0]) if m else 0


def decompose_logs(q: Sequence[Sequence], prec: int = DEFAULT_PREC) -> PencilDecomposition:
    """Exact decomposition of M_ij = ln|q_ij| over lambda_p = ln p.

    Logarithms of distinct primes are Q-independent by unique factorization,
    so the decomposition is exact and minimal.
    """
    rows, cols = _shape(q)
    facts = [[rat_factor(Fraction(v))[1] for v in row] for row in q]
    primes = sorted({p for row in facts for f in row for p in f})
    lams = [ln_fraction(Fraction(p), prec) for p in primes]
    bs = [[[Fraction(facts[i][j].get(p, 0)) for j in range(cols)] for i in range(rows)] for p in primes]
    return PencilDecomposition(lams, bs, Confidence.exact(), [f"ln {p}" for p in primes])


def _is_exact_zero(b: Ball) -> bool:
    return b.center == 0 and b.radius == 0


def decompose(m: Sequence[Sequence[Ball]], accept_bits: int | None = None) -> PencilDecomposition:
    """Decompose a ball matrix over a detected Q-basis of its entries.

    One relation search over all nonzero entries gives the relation lattice;
    row reduction then expresses every entry in terms of a subset of entries
    (earlier entries preferred as basis elements).
    """
    rows, cols = _shape(m)
    prec = min(b.prec for row in m for b in row)
    positions = [(i, j) for i in range(rows) for j in range(cols) if not _is_exact_zero(m[i][j])]
    zero = [[Fraction(0)] * cols for _ in range(rows)]
    if not positions:
        return PencilDecomposition([], [], Confidence.exact())
    entries = [m[i][j] for i, j in positions]
    n = len(entries)
    found = search_relations(entries, accept_bits=accept_bits)
    rels = [list(r) for r in found.lattice.basis]
    if not rels:
        basis_idx = list(range(n))
        expr = {t: {t: Fraction(1)} for t in range(n)}
    else:
        # reversed column order: pivots land on late entries, early entries stay free
        rev = [[r[n - 1 - t] for t in range(n)] for r in rels]
        red, piv = rref_q(rev)
        pivots = {n - 1 - c for c in piv}
        basis_idx = [t for t in range(n) if t not in pivots]
        expr = {t: {t: Fraction(1)} for t in basis_idx}
        for row, c in zip(red, piv):
            t = n - 1 - c
            expr[t] = {n - 1 - cc: -row[cc] for cc in range(n) if cc != c and row[cc] and (n - 1 - cc) not in pivots}
    lams = [entries[t] for t in basis_idx]
    bs = []
    for t in basis_idx:
        b = [r[:] for r in zero]
        for s, (i, j) in enumerate(positions):
            coeff = expr[s].get(t, Fraction(0))
            if coeff:
                b[i][j] = coeff
        bs.append(b)
    conf = Confidence.conjectural(prec)
    return PencilDecomposition(lams, bs, conf)


def _integerize(b: RatMatrix) -> list[list[int]]:
    den = 1
    for row in b:
        for v in row:
            den = lcm(den, Fraction(v).denominator)
    return [[int(Fraction(v) * den) for v in row] for row in b]


def _evaluate(pencil: list[list[list[int]]], t: Sequence[int]) -> list[list[int]]:
    rows, cols = _shape(pencil[0])
    return [[sum(ti * b[i][j] for ti, b in zip(t, pencil)) for j in range(cols)] for i in range(rows)]


def _witness_minor(mat: list[list[int]]) -> tuple[tuple[int, ...], tuple[int, ...], Fraction]:
    _, pcols = rref_q(mat)
    sub = [[row[c] for c in pcols] for row in mat]
    _, prows = rref_q(transpose(sub, len(pcols)))
    minor = [[mat[r][c] for c in pcols] for r in prows]
    return tuple(prows), tuple(pcols), det_q(minor) if minor else Fraction(1)


@dataclass
class GenericRank:
    s: int
    witness_point: tuple[int, ...]
    witness_rows: tuple[int, ...]
    witness_cols: tuple[int, ...]
    witness_minor: Fraction
    samples: int
    failure_bound_log2: float
    exact: bool
    method: str
    seed: int

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "witness_point": list(self.witness_point),
            "witness_rows": list(self.witness_rows),
            "witness_cols": list(self.witness_cols),
            "witness_minor": str(self.witness_minor),
            "samples": self.samples,
            "failure_bound_log2": self.failure_bound_log2,
            "exact": self.exact,
            "method": self.method,
            "seed": self.seed,
        }


def generic_rank(pencil: Sequence[RatMatrix], seed: int = 0, exact: bool | None = None) -> GenericRank:
    """Generic rank of sum_i t_i B_i.

    The lower bound is certified by an exactly nonzero minor at a witness
    point. The upper bound is either exact (all (s+1)-minors vanish on the grid
    {0..s+1}^k, which forces the minor polynomials, of degree <= s+1 in each
    variable, to vanish identically) or probabilistic with a Schwartz-Zippel
    bound on the chance of having missed a higher rank.
    """
    if not pencil:
        raise ValueError("empty pencil")
    ints = [_integerize(b) for b in pencil]
    rows, cols = _shape(ints[0])
    if any(_shape(b) != (rows, cols) for b in ints):
        raise ValueError("pencil matrices must share a shape")
    k = len(ints)
    full = min(rows, cols)
    rng = random.Random(seed)
    best, best_t, samples = -1, None, 0
    log_fail = 0.0
    for j in BOX_EXPONENTS:
        width = 2 ** (j + 1) + 1
        for _ in range(SAMPLES_PER_BOX):
            t = tuple(rng.randint(-(2**j), 2**j) for _ in range(k))
            r = bareiss_rank(_evaluate(ints, t))
            samples += 1
            if r > best:
                best, best_t = r, t
            if best == full:
                break
        if best == full:
            break
        log_fail += SAMPLES_PER_BOX * min(0.0, log2((best + 1) / width))
    rws, cls, minor = _witness_minor(_evaluate(ints, best_t)) if best > 0 else ((), (), Fraction(1))
    if best == full:
        return GenericRank(best, best_t, rws, cls, minor, samples, float("-inf"), True, "full_rank", seed)
    grid = (best + 2) ** k
    if exact is None:
        exact = grid <= GRID_BUDGET
    if exact:
        for t in product(range(best + 2), repeat=k):
            if bareiss_rank(_evaluate(ints, t)) > best:
                raise AssertionError("grid found a rank above the sampled maximum")
        return GenericRank(best, best_t, rws, cls, minor, samples, float("-inf"), True, "grid", seed)
    return GenericRank(best, best_t, rws, cls, minor, samples, log_fail, False, "random", seed)


@dataclass
class StructuralRankResult:
    s: int
    r_numeric: NumericRank
    generic: GenericRank
    decomposition: PencilDecomposition
    confidence: Confidence

    @property
    def waldschmidt_holds(self) -> bool:
        r = self.r_numeric.conjectural
        return r <= self.s <= 2 * r

    @property
    def r_equals_s(self) -> bool:
        return self.r_numeric.conjectural == self.s

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "r_numeric": self.r_numeric.to_json(),
            "generic_rank": self.generic.to_json(),
            "decomposition": self.decomposition.to_json(),
            "confidence": self.confidence.to_json(),
            "waldschmidt_holds": self.waldschmidt_holds,
            "r_equals_s": self.r_equals_s,
        }


def _finish(m: Sequence[Sequence[Ball]], dec: PencilDecomposition, seed: int, exact: bool | None) -> StructuralRankResult:
    rows, cols = _shape(m)
    if dec.B_matrices:
        gen = generic_rank(dec.B_matrices, seed, exact)
    else:
        gen = GenericRank(0, (), (), (), Fraction(1), 0, float("-inf"), True, "zero_matrix", seed)
    nr = certified_numeric_rank(m)
    conf = dec.confidence if gen.exact else Confidence.conjectural(dec.confidence.bits or min(b.prec for row in m for b in row))
    res = StructuralRankResult(gen.s, nr, gen, dec, conf)
    if not res.waldschmidt_holds:
        raise WaldschmidtViolation(f"r={nr.conjectural}, s={gen.s} violates r <= s <= 2r")
    return res


def structural_rank(m: Sequence[Sequence[Ball]], seed: int = 0, exact: bool | None = None) -> StructuralRankResult:
    """Structural rank of a ball matrix via detected relations among its entries."""
    return _finish(m, decompose(m), seed, exact)


def structural_rank_of_logs(
    q: Sequence[Sequence], prec: int = DEFAULT_PREC, seed: int = 0, exact: bool | None = None
) -> StructuralRankResult:
    """Structural rank of (ln|q_ij|) with the exact prime-log decomposition."""
    dec = decompose_logs(q, prec)
    m = [[ln_fraction(abs(Fraction(v)), prec) for v in row] for row in q]
    return _finish(m, dec, seed, exact)


def structural_rank_of_spec(spec, prec: int = DEFAULT_PREC, seed: int = 0) -> StructuralRankResult:
    """Structural rank of the real log matrix of a torus subgroup."""
    from .groups import SplitTorus
    from .real.closure import log_matrix

    if isinstance(spec.ambient, SplitTorus):
        return structural_rank_of_logs([list(g) for g in spec.generators], prec, seed)
    return structural_rank(log_matrix(spec, prec), seed)
