"""Real root isolation by Sturm sequences, and real embeddings of number fields."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from ..errors import TopClosureError
from ..exact import poly
from ..exact.numfield import NfElement, NumberField
from .ball import Ball


def sturm_sequence(f: Sequence[int]) -> list[list[Fraction]]:
    seq = [[Fraction(c) for c in f], [Fraction(c) for c in poly.derivative(f)]]
    while poly.deg(seq[-1]) > 0:
        r = poly.pmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq: Sequence[Sequence[Fraction]], x: Fraction) -> int:
    signs = []
    for g in seq:
        v = poly.peval(g, x)
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _root_bound(f: Sequence[int]) -> Fraction:
    lc = abs(Fraction(f[-1]))
    return 1 + max(abs(Fraction(c)) / lc for c in f[:-1]) if len(f) > 1 else Fraction(1)


def sturm_isolate(f: Sequence[int]) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals ``(lo, hi]`` each holding exactly one real root.

    ``f`` is reduced to its squarefree part first. Intervals come back in
    increasing order; an exact rational root r is reported as ``(r, r)``.
    """
    f = poly.trim(f)
    if not f:
        raise ValueError("zero polynomial has no isolated roots")
    g = poly.squarefree_part(f)
    if poly.deg(g) < 1:
        return []
    seq = sturm_sequence(g)
    bound = _root_bound(g)
    lo, hi = -bound, bound

    def count(a: Fraction, b: Fraction) -> int:
        return _sign_changes(seq, a) - _sign_changes(seq, b)

    out: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = count(a, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        if poly.peval(g, mid) == 0:
            eps = (b - a) / 4
            while count(mid - eps, mid + eps) != 1 or poly.peval(g, mid - eps) == 0:
                eps /= 2
            out.append((mid, mid))
            stack.append((a, mid - eps))
            stack.append((mid + eps, b))
        else:
            stack.append((a, mid))
            stack.append((mid, b))
    out.sort()
    return out


def refine_root(f: Sequence[int], interval: tuple[Fraction, Fraction], width: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of a squarefree f until its width is below ``width``."""
    a, b = interval
    if a == b:
        return a, b
    g = poly.squarefree_part(f)
    fa = poly.peval(g, a)
    if poly.peval(g, b) == 0:
        return b, b
    while b - a > width:
        mid = (a + b) / 2
        fm = poly.peval(g, mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return a, b


@lru_cache(maxsize=256)
def _real_roots(defining_poly: tuple[int, ...]) -> tuple[tuple[Fraction, Fraction], ...]:
    # largest root first: embedding 0 of x^2 - 2 is +sqrt(2)
    return tuple(reversed(sturm_isolate(list(defining_poly))))


def real_embedding_count(field: NumberField) -> int:
    return len(_real_roots(field.defining_poly))


def root_ball(field: NumberField, which: int, prec: int) -> Ball:
    roots = _real_roots(field.defining_poly)
    if not 0 <= which < len(roots):
        raise IndexError(f"embedding index {which} out of range ({len(roots)} real embeddings)")
    a, b = refine_root(list(field.defining_poly), roots[which], Fraction(1, 1 << (prec + 8)))
    return Ball.from_interval(a, b, prec + 8)


def embed_nf(a: NfElement, which: int, prec: int) -> Ball:
    """Image of ``a`` under a real embedding, with radius at most 2^-prec * max(1, |a|)."""
    extra = 16
    while extra < 4096:
        x = root_ball(a.field, which, prec + extra)
        acc = Ball(0, 0, prec + extra)
        for c in reversed(a.coords):
            acc = acc * x + c
        scale = max(Fraction(1), abs(acc.center))
        if acc.radius <= scale / (1 << prec):
            return Ball(acc.center, acc.radius, prec + extra)
        extra *= 2
    raise TopClosureError("embedding did not reach the requested precision")
