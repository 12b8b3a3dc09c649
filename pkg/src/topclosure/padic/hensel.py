"""Hensel lifting of the roots of a totally split polynomial, and p-adic embeddings."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

from ..errors import Refusal
from ..exact import poly
from ..exact.factor import is_prime
from ..exact.factor import valuation as int_valuation
from ..exact.numfield import NfElement, NumberField
from .padic import PadicInt


@dataclass(frozen=True)
class SplitEmbeddingSet:
    defining_poly: tuple[int, ...]
    p: int
    N: int
    roots: tuple[PadicInt, ...]

    def to_json(self) -> dict:
        return {"p": self.p, "N": self.N, "roots": [str(r.residue) for r in self.roots]}


def _eval_mod(f: Sequence[int], x: int, m: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % m
    return acc


@lru_cache(maxsize=1024)
def _lift(f: tuple[int, ...], p: int, N: int) -> tuple[int, ...]:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    n = len(f) - 1
    if poly.discriminant(list(f)) % p == 0:
        raise Refusal(f"p={p} divides the discriminant (ramified or index divisor)")
    base = poly.roots_mod_p(list(f), p)
    if len(base) < n:
        raise Refusal(f"p={p} is not totally split ({len(base)} of {n} roots mod p)")
    df = poly.derivative(list(f))
    dfi = [int(c) for c in df]
    out = []
    for r in base:
        k, x = 1, r
        while k < N:
            k = min(2 * k, N)
            m = p**k
            x = (x - _eval_mod(f, x, m) * pow(_eval_mod(dfi, x, m), -1, m)) % m
        out.append(x % p**N)
    return tuple(out)


def hensel_lift_roots(f: Sequence[int], p: int, N: int) -> SplitEmbeddingSet:
    """All roots of f in Z_p to precision N by quadratic Newton lifting.

    Raises Refusal unless f has deg f distinct roots mod p and p does not divide
    its discriminant.
    """
    ft = tuple(int(c) for c in poly.trim(f))
    if ft[-1] != 1:
        raise ValueError("polynomial must be monic")
    roots = _lift(ft, p, N)
    return SplitEmbeddingSet(ft, p, N, tuple(PadicInt(p, N, r) for r in roots))


@dataclass(frozen=True)
class SplitValue:
    """A nonzero element of Q_p as p^valuation * unit."""

    valuation: int
    unit: PadicInt


def split_rational(q, p: int, N: int) -> SplitValue:
    q = Fraction(q)
    if q == 0:
        raise ValueError("zero has no unit part")
    v = int_valuation(q.numerator, p) - int_valuation(q.denominator, p)
    rest = q / Fraction(p) ** v
    return SplitValue(v, PadicInt.from_fraction(p, N, rest))


def embed_padic(a: NfElement, emb: SplitEmbeddingSet, which: int) -> SplitValue:
    """Image of ``a`` under the ``which``-th p-adic embedding, split as p^v * unit.

    The unit part is known to precision N minus the valuation of the integral
    numerator; a numerator indistinguishable from zero raises ValueError.
    """
    p, N = emb.p, emb.N
    den = 1
    for c in a.coords:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in a.coords]
    r = emb.roots[which].residue
    val = _eval_mod(ints, r, p**N)
    x = PadicInt(p, N, val)
    v = x.valuation()
    if v >= N:
        raise ValueError("embedding indistinguishable from zero at this precision")
    num = x.shift_down(v)
    dv = int_valuation(den, p)
    dunit = PadicInt.from_fraction(p, N, Fraction(den, p**dv))
    return SplitValue(v - dv, num / dunit)


def field_embeddings(field: NumberField, p: int, N: int) -> SplitEmbeddingSet:
    return hensel_lift_roots(list(field.defining_poly), p, N)
