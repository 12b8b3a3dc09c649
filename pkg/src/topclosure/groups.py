"""Finitely generated subgroups of tori and of products of an elliptic curve."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from .exact.numfield import NfElement, NumberField


@dataclass(frozen=True)
class SplitTorus:
    """G_m^d over Q; rational points are d-tuples of nonzero rationals."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("torus dimension must be positive")

    def describe(self) -> dict:
        return {"type": "split_torus", "dim": self.dim}


@dataclass(frozen=True)
class WeilRestriction:
    """R_{K/Q} G_m; rational points are the nonzero elements of K."""

    field: NumberField

    @property
    def dim(self) -> int:
        return self.field.degree

    def describe(self) -> dict:
        return {"type": "weil_restriction", "defining_poly": list(self.field.defining_poly)}


@dataclass(frozen=True)
class EllipticProduct:
    """E^k for an elliptic curve E over Q; rational points are k-tuples of points."""

    curve: Any
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need at least one factor")

    @property
    def dim(self) -> int:
        return self.k

    def describe(self) -> dict:
        return {"type": "elliptic_product", "curve": self.curve.to_json(), "k": self.k}


Ambient = Union[SplitTorus, WeilRestriction, EllipticProduct]


@dataclass(frozen=True)
class GroupSpec:
    ambient: Ambient
    generators: tuple
    label: str = ""

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a group needs at least one generator")
        gens = tuple(_check_generator(self.ambient, g) for g in self.generators)
        object.__setattr__(self, "generators", gens)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def describe(self) -> dict:
        return {"ambient": self.ambient.describe(), "label": self.label, "generators": [_gen_json(g) for g in self.generators]}


def _check_generator(ambient: Ambient, g):
    if isinstance(ambient, SplitTorus):
        t = tuple(Fraction(v) for v in (g if isinstance(g, (tuple, list)) else (g,)))
        if len(t) != ambient.dim:
            raise ValueError(f"generator {g!r} has {len(t)} coordinates, torus has dimension {ambient.dim}")
        if any(v == 0 for v in t):
            raise ValueError(f"generator {g!r} has a zero coordinate")
        return t
    if isinstance(ambient, WeilRestriction):
        a = g if isinstance(g, NfElement) else ambient.field.element([g])
        if a.field != ambient.field:
            raise ValueError("generator lies in a different number field")
        if a.is_zero():
            raise ValueError("zero is not in K^x")
        return a
    if isinstance(ambient, EllipticProduct):
        t = tuple(g)
        if len(t) != ambient.k:
            raise ValueError(f"generator has {len(t)} components, expected {ambient.k}")
        for pt in t:
            if pt.curve != ambient.curve:
                raise ValueError("point lies on a different curve")
        return t
    raise TypeError(f"unknown ambient {ambient!r}")


def _gen_json(g):
    if isinstance(g, NfElement):
        return str(g)
    if isinstance(g, tuple):
        return [str(v) if isinstance(v, Fraction) else v.to_json() for v in g]
    return str(g)
