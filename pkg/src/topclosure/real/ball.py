"""Ball arithmetic: a dyadic center with a rigorous radius.

Every operation returns a ball containing all results of applying the exact
operation to points of the input balls. Centers are rounded to ``prec``
significant bits after each operation and the rounding bound is added to the
radius; radii are kept with a 32-bit mantissa, always rounded up.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt

DEFAULT_PREC = 256
_RAD_BITS = 32


def _up(q: Fraction) -> Fraction:
    """Smallest dyadic >= q with a _RAD_BITS mantissa."""
    if q <= 0:
        return Fraction(0)
    n, d = q.numerator, q.denominator
    s = _RAD_BITS - (n.bit_length() - d.bit_length())
    if s >= 0:
        m = -((-n << s) // d)
        return Fraction(m, 1 << s)
    m = -((-n) // (d << -s))
    return Fraction(m << -s)


def _round(q: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    """Round q to ``prec`` significant bits; returns (center, error bound)."""
    if q == 0:
        return Fraction(0), Fraction(0)
    n, d = q.numerator, q.denominator
    s = prec - (n.bit_length() - d.bit_length())
    if s >= 0:
        num, rem = divmod(n << s, d)
        if rem == 0:
            return q, Fraction(0)
        if 2 * rem >= d:
            num += 1
        return Fraction(num, 1 << s), Fraction(1, 1 << (s + 1))
    num, rem = divmod(n, d << -s)
    if rem == 0:
        return q, Fraction(0)
    if 2 * rem >= (d << -s):
        num += 1
    return Fraction(num << -s), Fraction(1 << (-s - 1))


class Ball:
    """Closed interval [center - radius, center + radius] with dyadic endpoints."""

    __slots__ = ("center", "radius", "prec")

    def __init__(self, center, radius=0, prec: int = DEFAULT_PREC):
        c, err = _round(Fraction(center), prec)
        r = Fraction(radius)
        if r < 0:
            raise ValueError("negative radius")
        self.center = c
        self.radius = _up(r + err)
        self.prec = prec

    @classmethod
    def from_interval(cls, lo, hi, prec: int = DEFAULT_PREC) -> "Ball":
        lo, hi = Fraction(lo), Fraction(hi)
        if hi < lo:
            raise ValueError("empty interval")
        return cls((lo + hi) / 2, (hi - lo) / 2, prec)

    # -- queries ----------------------------------------------------------
    def lower(self) -> Fraction:
        return self.center - self.radius

    def upper(self) -> Fraction:
        return self.center + self.radius

    def contains(self, q) -> bool:
        return abs(Fraction(q) - self.center) <= self.radius

    def contains_ball(self, other: "Ball") -> bool:
        return self.lower() <= other.lower() and other.upper() <= self.upper()

    def contains_zero(self) -> bool:
        return abs(self.center) <= self.radius

    def excludes_zero(self) -> bool:
        return not self.contains_zero()

    def sign(self) -> int:
        """+1 or -1 when certified, 0 when the ball straddles zero."""
        if self.lower() > 0:
            return 1
        if self.upper() < 0:
            return -1
        return 0

    def abs_upper(self) -> Fraction:
        return abs(self.center) + self.radius

    def rad_log2(self) -> float:
        """log2 of the radius (-inf for exact balls); handy for reports."""
        if self.radius == 0:
            return float("-inf")
        return (self.radius.numerator.bit_length() - self.radius.denominator.bit_length())

    def with_prec(self, prec: int) -> "Ball":
        return Ball(self.center, self.radius, prec)

    # -- arithmetic -------------------------------------------------------
    def _lift(self, other) -> "Ball":
        if isinstance(other, Ball):
            return other
        return Ball(Fraction(other), 0, self.prec)

    def __add__(self, other):
        o = self._lift(other)
        return Ball(self.center + o.center, self.radius + o.radius, max(self.prec, o.prec))

    __radd__ = __add__

    def __neg__(self):
        return Ball(-self.center, self.radius, self.prec)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        r = abs(self.center) * o.radius + abs(o.center) * self.radius + self.radius * o.radius
        return Ball(self.center * o.center, r, max(self.prec, o.prec))

    __rmul__ = __mul__

    def inverse(self) -> "Ball":
        if self.contains_zero():
            raise ZeroDivisionError("ball contains zero")
        a = abs(self.center)
        r = self.radius / (a * (a - self.radius))
        return Ball(1 / self.center, r, self.prec)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = Ball(1, 0, self.prec)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def floor_certified(self) -> int | None:
        """floor(x) if it is the same for every point of the ball, else None."""
        lo, hi = self.lower(), self.upper()
        f = lo.numerator // lo.denominator
        if hi < f + 1:
            return f
        return None

    # -- display ----------------------------------------------------------
    def to_decimal(self, digits: int = 20) -> str:
        c = self.center
        sign = "-" if c < 0 else ""
        c = abs(c)
        scaled = (c.numerator * 10**digits) // c.denominator
        s = str(scaled).rjust(digits + 1, "0")
        return f"{sign}{s[:-digits]}.{s[-digits:]}"

    def __float__(self) -> float:
        return float(self.center)

    def __repr__(self) -> str:
        return f"Ball({float(self.center)!r} +/- {float(self.radius):.3g}, prec={self.prec})"

    def to_json(self, digits: int = 30) -> dict:
        return {"center": self.to_decimal(digits), "radius_log2": self.rad_log2()}


def ball(x, prec: int = DEFAULT_PREC) -> Ball:
    if isinstance(x, Ball):
        return x
    return Ball(Fraction(x), 0, prec)


# --- logarithm ------------------------------------------------------------

def _atanh_fixed(a: int, b: int, w: int) -> tuple[int, int]:
    """atanh(a/b) * 2^w as an integer with an error bound in ulps; needs |a/b| <= 1/3."""
    x = (a << w) // b
    x2 = (x * x) >> w
    total = 0
    p = x
    k = 1
    terms = 0
    # tail after the last term is below |z|^k / (k (1 - z^2)) <= 2 ulps once p is tiny
    while p != 0 and p != -1:
        total += p // k
        p = (p * x2) >> w
        k += 2
        terms += 1
    return total, 4 * (terms + 3)


@lru_cache(maxsize=64)
def _ln2_fixed(w: int) -> tuple[int, int]:
    v, err = _atanh_fixed(1, 3, w)
    return 2 * v, 2 * err


def ln_fraction(q: Fraction, prec: int = DEFAULT_PREC) -> Ball:
    """Natural log of a positive rational, as a ball."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("log of a non-positive number")
    if q == 1:
        return Ball(0, 0, prec)
    n, d = q.numerator, q.denominator
    k = n.bit_length() - d.bit_length()
    # t = q / 2^k in (1/2, 2); shift into [2/3, 4/3]
    tn, td = (n, d << k) if k >= 0 else (n << -k, d)
    if 3 * tn > 4 * td:
        k += 1
        td *= 2
    elif 3 * tn < 2 * td:
        k -= 1
        tn *= 2
    w = prec + 40 + abs(k).bit_length()
    v, err = _atanh_fixed(tn - td, tn + td, w)
    v, err = 2 * v, 2 * err
    if k:
        l2, l2err = _ln2_fixed(w)
        v += k * l2
        err += abs(k) * l2err
    return Ball(Fraction(v, 1 << w), Fraction(err + 1, 1 << w), prec)


def ball_ln(x: Ball) -> Ball:
    """Enclosure of ln over a ball with positive lower bound."""
    x = ball(x)
    if x.lower() <= 0:
        raise ValueError("ball_ln needs a ball entirely above zero")
    core = ln_fraction(x.center, x.prec)
    if x.radius == 0:
        return core
    spread = x.radius / x.lower()
    return Ball(core.center, core.radius + spread, x.prec)


def ln_abs(q, prec: int = DEFAULT_PREC) -> Ball:
    """ln |q| for a nonzero rational (positive-component convention)."""
    return ln_fraction(abs(Fraction(q)), prec)


def ball_sqrt(x: Ball) -> Ball:
    """Square root of a ball with non-negative lower bound (used by demos)."""
    lo, hi = x.lower(), x.upper()
    if lo < 0:
        raise ValueError("sqrt of a ball reaching below zero")
    w = x.prec + 8

    def isqrt_frac(q: Fraction, up: bool) -> Fraction:
        s = isqrt((q.numerator << (2 * w)) // q.denominator)
        if up:
            s += 1
        return Fraction(s, 1 << w)

    return Ball.from_interval(isqrt_frac(lo, False), isqrt_frac(hi, True), x.prec)
