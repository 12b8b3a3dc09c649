"""Number fields Q[x]/(f) with elements in the power basis."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import poly
from .intmat import det_q


@dataclass(frozen=True)
class NumberField:
    """K = Q[x]/(f) for a monic irreducible integer polynomial f."""

    defining_poly: tuple[int, ...]
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        f = poly.trim(self.defining_poly)
        if not f or len(f) < 2:
            raise ValueError("defining polynomial must have degree >= 1")
        if any(Fraction(c).denominator != 1 for c in f):
            raise ValueError("defining polynomial must have integer coefficients")
        f = tuple(int(c) for c in f)
        if f[-1] != 1:
            raise ValueError("defining polynomial must be monic")
        object.__setattr__(self, "defining_poly", f)
        if self.check and not poly.is_irreducible(list(f)):
            raise ValueError(f"{poly.format_poly(f)} is reducible over Q")

    @classmethod
    def parse(cls, text: str) -> "NumberField":
        coeffs = poly.parse_poly(text)
        return cls(tuple(int(c) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.defining_poly) - 1

    @cached_property
    def discriminant(self) -> int:
        return poly.discriminant(list(self.defining_poly))

    def element(self, coords: Sequence) -> "NfElement":
        c = [Fraction(v) for v in coords]
        if len(c) > self.degree:
            c = poly.pmod(c, self.defining_poly)
        c = c + [Fraction(0)] * (self.degree - len(c))
        return NfElement(self, tuple(c))

    def parse_element(self, text: str) -> "NfElement":
        return self.element(poly.pmod(poly.parse_poly(text), self.defining_poly))

    def gen(self) -> "NfElement":
        return self.element([0, 1])

    def __str__(self) -> str:
        return f"Q[x]/({poly.format_poly(self.defining_poly)})"


@dataclass(frozen=True)
class NfElement:
    field: NumberField
    coords: tuple[Fraction, ...]

    def _check(self, other: "NfElement") -> None:
        if self.field != other.field:
            raise ValueError("elements belong to different number fields")

    def _coerce(self, other) -> "NfElement":
        if isinstance(other, NfElement):
            self._check(other)
            return other
        return self.field.element([other])

    def __add__(self, other):
        o = self._coerce(other)
        return NfElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return NfElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        prod = poly.pmul(list(self.coords), list(o.coords))
        return self.field.element(poly.pmod(prod, self.field.defining_poly))

    __rmul__ = __mul__

    def inverse(self) -> "NfElement":
        """Inverse via the extended Euclidean algorithm in Q[x]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        r0, r1 = list(self.field.defining_poly), poly.trim(list(self.coords))
        s0, s1 = [], [Fraction(1)]
        while poly.deg(r1) > 0:
            q, r = poly.pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, poly.psub(s0, poly.pmul(q, s1))
        c = Fraction(r1[0])
        return self.field.element([v / c for v in poly.pmod(s1, self.field.defining_poly)])

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.element([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def multiplication_matrix(self) -> list[list[Fraction]]:
        """Matrix of y -> self*y in the power basis (rows = images of x^i)."""
        rows = []
        basis = self
        x = self.field.gen()
        for _ in range(self.field.degree):
            rows.append(list(basis.coords))
            basis = basis * x
        return rows

    def norm(self) -> Fraction:
        return det_q(self.multiplication_matrix())

    def trace(self) -> Fraction:
        m = self.multiplication_matrix()
        return sum((m[i][i] for i in range(len(m))), Fraction(0))

    def is_integral_in_monogenic_order(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def is_unit(self) -> bool:
        """Unit of Z[x]/(f): integral coordinates and norm +-1.

        Sufficient but not necessary for being a unit of the maximal order.
        """
        return self.is_integral_in_monogenic_order() and abs(self.norm()) == 1

    def __str__(self) -> str:
        return poly.format_poly(self.coords)


def nf_arith(a: NfElement, b: NfElement, op: str) -> NfElement:
    ops = {"+": a.__add__, "-": a.__sub__, "*": a.__mul__, "/": a.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    a._check(b)
    return ops[op](b)


def nf_norm(a: NfElement) -> Fraction:
    return a.norm()


def nf_is_unit(a: NfElement) -> bool:
    return a.is_unit()
