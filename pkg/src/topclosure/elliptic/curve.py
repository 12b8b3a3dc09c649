"""Elliptic curves over Q in long Weierstrass form, with exact and mod-p group laws.

    y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import isqrt
from typing import Optional

from ..errors import Refusal
from ..exact.factor import is_prime

COUNT_BOUND = 10**5

FpPoint = Optional[tuple[int, int]]  # None is the point at infinity


@dataclass(frozen=True)
class EllipticCurve:
    a1: int = 0
    a2: int = 0
    a3: int = 0
    a4: int = 0
    a6: int = 0

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            v = Fraction(getattr(self, name))
            if v.denominator != 1:
                raise ValueError("Weierstrass coefficients must be integers")
            object.__setattr__(self, name, int(v))
        if self.discriminant == 0:
            raise ValueError("singular curve (discriminant 0)")

    @property
    def coeffs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def discriminant(self) -> int:
        a1, a2, a3, a4, a6 = self.coeffs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def contains(self, x, y) -> bool:
        a1, a2, a3, a4, a6 = self.coeffs
        return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6

    def point(self, x, y) -> "ECPoint":
        return ECPoint(self, Fraction(x), Fraction(y))

    @property
    def infinity(self) -> "ECPoint":
        return ECPoint(self, None, None)

    def is_good_prime(self, p: int) -> bool:
        return self.discriminant % p != 0

    def to_json(self) -> dict:
        return {"a1": self.a1, "a2": self.a2, "a3": self.a3, "a4": self.a4, "a6": self.a6}

    def __str__(self) -> str:
        a1, a2, a3, a4, a6 = self.coeffs
        return f"[{a1},{a2},{a3},{a4},{a6}]"


@dataclass(frozen=True)
class ECPoint:
    curve: EllipticCurve
    x: Optional[Fraction]
    y: Optional[Fraction]

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("both coordinates or neither")
        if self.x is not None and not self.curve.contains(self.x, self.y):
            raise ValueError(f"({self.x}, {self.y}) is not on y^2+{self.curve}")

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def _check(self, other: "ECPoint") -> None:
        if self.curve != other.curve:
            raise ValueError("points lie on different curves")

    def __neg__(self) -> "ECPoint":
        if self.is_infinity:
            return self
        c = self.curve
        return ECPoint(c, self.x, -self.y - c.a1 * self.x - c.a3)

    def __add__(self, other: "ECPoint") -> "ECPoint":
        self._check(other)
        if self.is_infinity:
            return other
        if other.is_infinity:
            return self
        c = self.curve
        a1, a2, a3, a4, a6 = c.coeffs
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return c.infinity
            den = 2 * y1 + a1 * x1 + a3
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
            nu = (-x1**3 + a4 * x1 + 2 * a6 - a3 * y1) / den
        else:
            lam = (y2 - y1) / (x2 - x1)
            nu = (y1 * x2 - y2 * x1) / (x2 - x1)
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return ECPoint(c, x3, y3)

    def __sub__(self, other: "ECPoint") -> "ECPoint":
        return self + (-other)

    def __mul__(self, n: int) -> "ECPoint":
        return ec_mul(n, self)

    __rmul__ = __mul__

    def to_json(self):
        if self.is_infinity:
            return "O"
        return [str(self.x), str(self.y)]

    def __repr__(self) -> str:
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


def ec_add(P: ECPoint, Q: ECPoint) -> ECPoint:
    return P + Q


def ec_neg(P: ECPoint) -> ECPoint:
    return -P


def ec_mul(n: int, P: ECPoint) -> ECPoint:
    """n * P by double-and-add."""
    if n < 0:
        return ec_mul(-n, -P)
    out = P.curve.infinity
    base = P
    while n:
        if n & 1:
            out = out + base
        base = base + base
        n >>= 1
    return out


# --- reduction modulo p -------------------------------------------------------

def _check_good(curve: EllipticCurve, p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not curve.is_good_prime(p):
        raise Refusal(f"bad reduction at p={p}")


def ec_reduce_mod_p(P: ECPoint, p: int) -> FpPoint:
    """Image in E(F_p); points with p in the denominators reduce to infinity."""
    _check_good(P.curve, p)
    if P.is_infinity:
        return None
    if P.x.denominator % p == 0:
        return None
    return (P.x.numerator * pow(P.x.denominator, -1, p) % p, P.y.numerator * pow(P.y.denominator, -1, p) % p)


def fp_neg(curve: EllipticCurve, P: FpPoint, p: int) -> FpPoint:
    if P is None:
        return None
    x, y = P
    return (x, (-y - curve.a1 * x - curve.a3) % p)


def fp_add(curve: EllipticCurve, P: FpPoint, Q: FpPoint, p: int) -> FpPoint:
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, a6 = curve.coeffs
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2 + a1 * x2 + a3) % p == 0:
            return None
        den = (2 * y1 + a1 * x1 + a3) % p
        inv = pow(den, -1, p)
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * inv % p
        nu = (-x1**3 + a4 * x1 + 2 * a6 - a3 * y1) * inv % p
    else:
        inv = pow(x2 - x1, -1, p)
        lam = (y2 - y1) * inv % p
        nu = (y1 * x2 - y2 * x1) * inv % p
    x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % p
    y3 = (-(lam + a1) * x3 - nu - a3) % p
    return (x3, y3)


def fp_mul(curve: EllipticCurve, n: int, P: FpPoint, p: int) -> FpPoint:
    if n < 0:
        return fp_mul(curve, -n, fp_neg(curve, P, p), p)
    out: FpPoint = None
    while n:
        if n & 1:
            out = fp_add(curve, out, P, p)
        P = fp_add(curve, P, P, p)
        n >>= 1
    return out


def fp_order(curve: EllipticCurve, P: FpPoint, p: int, group_order: int | None = None) -> int:
    """Order of a point of E(F_p), found among the divisors of |E(F_p)|."""
    if P is None:
        return 1
    n = group_order or ec_count_points(curve, p)
    divisors = sorted(d for i in range(1, isqrt(n) + 1) if n % i == 0 for d in {i, n // i})
    for d in divisors:
        if fp_mul(curve, d, P, p) is None:
            return d
    raise AssertionError("point order does not divide the group order")


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=4096)
def ec_count_points(curve: EllipticCurve, p: int, bound: int = COUNT_BOUND) -> int:
    """|E(F_p)| including infinity, by naive enumeration over x."""
    _check_good(curve, p)
    if p > bound:
        raise ValueError(f"p={p} exceeds the naive counting bound {bound}")
    a1, a2, a3, a4, a6 = curve.coeffs
    total = 1
    for x in range(p):
        rhs = (x**3 + a2 * x * x + a4 * x + a6) % p
        b = (a1 * x + a3) % p
        if p == 2:
            total += sum(1 for y in range(2) if (y * y + b * y - rhs) % 2 == 0)
        else:
            total += 1 + _legendre(b * b + 4 * rhs, p)
    assert (total - p - 1) ** 2 <= 4 * p, "Hasse bound violated"
    return total
