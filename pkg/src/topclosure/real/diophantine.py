"""Kronecker density verdicts, orbit samples and continued-fraction convergents."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..errors import PrecisionExhausted
from ..exact.numfield import NfElement
from .ball import DEFAULT_PREC, Ball
from .roots import embed_nf

MAX_PREC = 1 << 14


@dataclass(frozen=True)
class RealNumber:
    """A real given exactly: a rational, or a number-field element at a chosen real place."""

    value: Union[Fraction, NfElement]
    embedding: int = 0

    @classmethod
    def of(cls, x, embedding: int = 0) -> "RealNumber":
        if isinstance(x, RealNumber):
            return x
        if isinstance(x, NfElement):
            if x.is_rational():
                return cls(x.coords[0])
            return cls(x, embedding)
        return cls(Fraction(x))

    @property
    def is_rational(self) -> bool:
        return isinstance(self.value, Fraction)

    def ball(self, prec: int) -> Ball:
        if self.is_rational:
            return Ball(self.value, 0, prec)
        return embed_nf(self.value, self.embedding, prec)

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.value)
        return f"{self.value} @ embedding {self.embedding}"


def kronecker_verdict(theta) -> str:
    """``dense`` when {i theta mod 1} is dense in [0, 1), else ``not_dense``.

    Exact: an element of a number field given by an irreducible polynomial is
    rational exactly when its non-constant coordinates vanish.
    """
    return "not_dense" if RealNumber.of(theta).is_rational else "dense"


def _frac(b: Ball) -> Ball | None:
    f = b.floor_certified()
    if f is None:
        return None
    return b - f


def orbit_sample(theta, count: int, prec: int = DEFAULT_PREC) -> list[Ball]:
    """Enclosures of i*theta mod 1 for i = 0..count-1."""
    x = RealNumber.of(theta)
    if x.is_rational:
        q = x.value
        return [Ball(i * q - (i * q).numerator // (i * q).denominator, 0, max(prec, 64)) for i in range(count)]
    work = prec
    while work <= MAX_PREC:
        t = x.ball(work + count.bit_length() + 8)
        out = []
        for i in range(count):
            fr = _frac(t * i)
            if fr is None:
                break
            out.append(fr)
        else:
            return out
        work *= 2
    raise PrecisionExhausted("fractional part of the orbit could not be certified", work)


def max_gap(points: list[Ball]) -> Fraction:
    """Largest circular gap between consecutive centres of an orbit sample."""
    xs = sorted(p.center for p in points)
    if not xs:
        return Fraction(1)
    gaps = [b - a for a, b in zip(xs, xs[1:])]
    gaps.append(1 - xs[-1] + xs[0])
    return max(gaps)


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    error: Ball  # theta - p/q

    def certified_dirichlet(self) -> bool:
        """|theta - p/q| < 1/q^2, decided from the enclosure."""
        return self.error.abs_upper() < Fraction(1, self.q * self.q)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "error": self.error.to_json(),
            "dirichlet_certified": self.certified_dirichlet(),
        }


@dataclass(frozen=True)
class ConvergentList:
    theta: str
    convergents: tuple[Convergent, ...]
    partial_quotients: tuple[int, ...]
    terminated: bool  # theta is rational and its expansion ended
    precision: int

    def to_json(self) -> dict:
        return {
            "theta": self.theta,
            "partial_quotients": list(self.partial_quotients),
            "convergents": [c.to_json() for c in self.convergents],
            "terminated": self.terminated,
            "precision": self.precision,
        }


def _expand_exact(q: Fraction, count: int) -> tuple[list[int], bool]:
    quots = []
    x = q
    while len(quots) < count:
        a = x.numerator // x.denominator
        quots.append(a)
        if x == a:
            return quots, True
        x = 1 / (x - a)
    return quots, False


def _expand_ball(t: Ball, count: int) -> list[int] | None:
    quots = []
    x = t
    for i in range(count):
        a = x.floor_certified()
        if a is None:
            return None
        quots.append(a)
        if i == count - 1:
            break
        rest = x - a
        if rest.contains_zero():
            return None
        x = rest.inverse()
    return quots


def _convergents(quots: list[int]) -> list[tuple[int, int]]:
    out = []
    p0, q0, p1, q1 = 1, 0, quots[0], 1
    out.append((p1, q1))
    for a in quots[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def dirichlet_convergents(theta, count: int, prec: int = DEFAULT_PREC) -> ConvergentList:
    """First ``count`` continued-fraction convergents with certified errors.

    ``theta`` may be a rational, a number-field element (with embedding via
    RealNumber), or a Ball. Ball input has fixed precision; exact inputs are
    re-evaluated at doubled precision until every partial quotient is certified.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if isinstance(theta, Ball):
        quots = _expand_ball(theta, count)
        if quots is None:
            raise PrecisionExhausted("partial quotient not certified", theta.prec)
        t, label, terminated, work = theta, repr(theta), False, theta.prec
    else:
        x = RealNumber.of(theta)
        label = str(x)
        if x.is_rational:
            theta_q = x.value
            quots, terminated = _expand_exact(theta_q, count)
            work = prec
            t = None
        else:
            terminated = False
            work = prec
            while True:
                t = x.ball(work)
                quots = _expand_ball(t, count)
                if quots is not None:
                    break
                work *= 2
                if work > MAX_PREC:
                    raise PrecisionExhausted("partial quotient not certified", work)
    convs = []
    for p, q in _convergents(quots):
        err = Ball(theta_q - Fraction(p, q), 0, work) if t is None else t - Fraction(p, q)
        convs.append(Convergent(p, q, err))
    return ConvergentList(label, tuple(convs), tuple(quots), terminated, work)
