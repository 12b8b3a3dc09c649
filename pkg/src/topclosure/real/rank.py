"""Certified numeric rank of ball matrices via enclosures of minors."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from ..errors import PrecisionExhausted
from .ball import Ball
from .relations import default_accept_bits

MinorOracle = Callable[[tuple[int, ...], tuple[int, ...]], "bool | None"]


def ball_det(m: Sequence[Sequence[Ball]]) -> Ball:
    """Determinant enclosure by cofactor expansion with memoised column subsets.

    Exact expansion (no pivoting) so no division by an enclosure of zero can
    occur; cost is O(2^k k) ball operations.
    """
    k = len(m)
    if k == 0:
        return Ball(1)
    prec = max(b.prec for row in m for b in row)
    memo: dict[int, Ball] = {}

    def sub(row: int, cols: int) -> Ball:
        # determinant of rows row..k-1 restricted to the column bitmask ``cols``
        if row == k:
            return Ball(1, 0, prec)
        hit = memo.get(cols)
        if hit is not None:
            return hit
        acc = Ball(0, 0, prec)
        sign = 1
        for j in range(k):
            if cols >> j & 1:
                entry = m[row][j]
                if not (entry.center == 0 and entry.radius == 0):
                    term = entry * sub(row + 1, cols & ~(1 << j))
                    acc = acc + term if sign > 0 else acc - term
                sign = -sign
        memo[cols] = acc
        return acc

    return sub(0, (1 << k) - 1)


@dataclass(frozen=True)
class NumericRank:
    lower: int
    conjectural: int
    precision: int
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None
    witness_det: Ball | None

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "conjectural": self.conjectural,
            "precision": self.precision,
            "witness_rows": list(self.witness[0]) if self.witness else [],
            "witness_cols": list(self.witness[1]) if self.witness else [],
        }


def _scale(m: Sequence[Sequence[Ball]], rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    s = Fraction(1)
    for i in rows:
        s *= max(Fraction(1), max(m[i][j].abs_upper() for j in cols))
    return s


def certified_numeric_rank(
    m: Sequence[Sequence[Ball]],
    relation_oracle: MinorOracle | None = None,
    accept_bits: int | None = None,
) -> NumericRank:
    """(certified lower bound, conjectural rank) of a ball matrix.

    ``lower`` is the largest k with a k x k minor whose enclosure excludes 0.
    ``conjectural`` is the largest k with a k x k minor that is not
    numerically zero, where numerically zero means the enclosure contains 0
    and has radius below 2^-accept_bits (scaled by the row magnitudes).
    ``relation_oracle(rows, cols)`` may declare a minor exactly zero (True)
    or exactly nonzero (False) from structure known to the caller.
    A minor that is neither certified nor numerically zero at the level that
    decides the answer raises PrecisionExhausted.
    """
    nr = len(m)
    nc = len(m[0]) if nr else 0
    if nr == 0 or nc == 0:
        return NumericRank(0, 0, 0, None, None)
    prec = min(b.prec for row in m for b in row)
    if accept_bits is None:
        accept_bits = default_accept_bits(prec)
    for k in range(min(nr, nc), 0, -1):
        undecided = False
        for rows in combinations(range(nr), k):
            for cols in combinations(range(nc), k):
                verdict = relation_oracle(rows, cols) if relation_oracle else None
                if verdict is True:
                    continue
                det = ball_det([[m[i][j] for j in cols] for i in rows])
                if det.excludes_zero():
                    return NumericRank(k, k, prec, (rows, cols), det)
                if verdict is False:
                    raise PrecisionExhausted(f"minor {rows}x{cols} known nonzero but not certified", prec)
                if det.radius >= _scale(m, rows, cols) / (1 << accept_bits):
                    undecided = True
        if undecided:
            raise PrecisionExhausted(f"{k}x{k} minors neither certified nor numerically zero", prec)
    return NumericRank(0, 0, prec, None, None)
