"""Integer relation detection by LLL on the lattice [ I | N*x ].

Detected relations are only heuristic: a candidate is accepted when its
residual enclosure contains zero and is narrower than 2^-accept_bits. When
nothing is found the reduced basis can sometimes certify that no relation with
bounded coefficients exists (via a Gram-Schmidt lower bound on lattice minima).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Sequence

from ..errors import PrecisionExhausted
from ..exact.intmat import IntegerLattice, saturate
from .ball import Ball
from .lll import gs_min_norm_sq, lll_reduce

DEFAULT_COEFF_BOUND = 10**10
GUARD_BITS = 16


class RelationStatus(str, enum.Enum):
    CERTIFIED_NONRELATION = "certified_nonrelation"
    HEURISTIC_RELATION = "heuristic_relation"
    EXACT_RELATION = "exact_relation"


@dataclass(frozen=True)
class RelationCandidate:
    coefficients: tuple[int, ...]
    residual_bound: tuple[Ball, ...]
    status: RelationStatus

    def to_json(self) -> dict:
        return {
            "coefficients": list(self.coefficients),
            "residual_radius_log2": [b.rad_log2() for b in self.residual_bound],
            "status": self.status.value,
        }


@dataclass
class RelationSearch:
    """Everything learned from one reduction: accepted relations and certificates."""

    lattice: IntegerLattice
    accepted: list[RelationCandidate] = field(default_factory=list)
    accept_bits: int = 0
    # no relation outside ``lattice``-free inputs with |c|_inf <= this bound (0 = no claim)
    certified_free_bound: int = 0


def default_accept_bits(prec: int) -> int:
    return ceil(0.6 * prec)


def _as_vectors(xs: Sequence) -> list[list[Ball]]:
    vecs = [list(x) if isinstance(x, (list, tuple)) else [x] for x in xs]
    if not vecs:
        raise ValueError("need at least one input")
    if len({len(v) for v in vecs}) != 1:
        raise ValueError("inputs must share a dimension")
    return vecs


def _normalize_sign(c: Sequence[int]) -> tuple[int, ...]:
    for v in c:
        if v:
            return tuple(c) if v > 0 else tuple(-x for x in c)
    return tuple(c)


def residual(vecs: Sequence[Sequence[Ball]], c: Sequence[int]) -> tuple[Ball, ...]:
    dim = len(vecs[0])
    prec = max(b.prec for v in vecs for b in v)
    out = []
    for j in range(dim):
        acc = Ball(0, 0, prec)
        for ci, v in zip(c, vecs):
            if ci:
                acc = acc + v[j] * ci
        out.append(acc)
    return tuple(out)


def search_relations(
    xs: Sequence,
    coeff_bound: int = DEFAULT_COEFF_BOUND,
    accept_bits: int | None = None,
) -> RelationSearch:
    """Run one LLL reduction and collect every acceptable relation.

    ``xs`` holds Balls, or equal-length vectors of Balls (vector relations
    sum c_i x_i = 0 in every coordinate).
    """
    vecs = _as_vectors(xs)
    n, dim = len(vecs), len(vecs[0])
    prec = min(b.prec for v in vecs for b in v)
    if accept_bits is None:
        accept_bits = default_accept_bits(prec)
    limit = Fraction(1, 1 << (accept_bits + GUARD_BITS))
    worst = max(b.radius for v in vecs for b in v)
    if worst >= limit:
        raise PrecisionExhausted(
            f"input radius 2^{max(b.rad_log2() for v in vecs for b in v)} too wide for accept_bits={accept_bits}",
            prec,
        )
    scale = 1 << accept_bits
    scaled = [[round(b.center * scale) for b in v] for v in vecs]
    rows = [[int(i == j) for j in range(n)] + scaled[i] for i in range(n)]
    reduced = lll_reduce(rows)
    threshold = Fraction(1, 1 << accept_bits)
    accepted: list[RelationCandidate] = []
    for row in reduced:
        c = row[:n]
        if not any(c) or max(abs(x) for x in c) > coeff_bound:
            continue
        res = residual(vecs, c)
        if all(r.contains_zero() and r.radius < threshold for r in res):
            accepted.append(RelationCandidate(_normalize_sign(c), res, RelationStatus.HEURISTIC_RELATION))
    accepted.sort(key=lambda r: (max(abs(x) for x in r.coefficients), r.coefficients))
    sat = saturate([list(r.coefficients) for r in accepted], n) if accepted else []
    lattice = IntegerLattice.from_generators(sat, n)
    search = RelationSearch(lattice, accepted, accept_bits)
    if not accepted:
        search.certified_free_bound = _certified_bound(reduced, n, dim, coeff_bound, scale, worst)
    return search


def _certified_bound(reduced, n: int, dim: int, coeff_bound: int, scale: int, worst: Fraction) -> int:
    """Largest B <= coeff_bound (by halving) such that no relation |c| <= B can exist."""
    floor_sq = gs_min_norm_sq(reduced)
    b = coeff_bound
    while b >= 1:
        # lattice image of a relation: (c, sum c_i X_i) with |sum c_i X_i| <= 1 + n B (1/2 + N r)
        tail = 1 + n * b * (Fraction(1, 2) + scale * worst)
        if n * b * b + dim * tail * tail < floor_sq:
            return b
        b //= 2
    return 0


def find_integer_relation(
    xs: Sequence,
    coeff_bound: int = DEFAULT_COEFF_BOUND,
    accept_bits: int | None = None,
) -> RelationCandidate | None:
    """Shortest accepted relation, or a certified non-relation, or None (inconclusive)."""
    search = search_relations(xs, coeff_bound, accept_bits)
    if search.accepted:
        return search.accepted[0]
    if search.certified_free_bound >= coeff_bound:
        return RelationCandidate((), (), RelationStatus.CERTIFIED_NONRELATION)
    return None
