"""Curve data used by demos and tests.

The coefficients and points are externally sourced inputs (standard tables of
elliptic curves over Q), not derived here; loading re-verifies that each
point lies on its curve and has infinite order.
"""
from __future__ import annotations

from dataclasses import dataclass

from .closure import is_torsion_free_up_to_mazur
from .curve import ECPoint, EllipticCurve


@dataclass(frozen=True)
class CurveFixture:
    name: str
    curve: EllipticCurve
    points: tuple[ECPoint, ...]
    provenance: str


_DATA = {
    "37a": ((0, 0, 1, -1, 0), [(0, 0)], "conductor 37, rank 1; generator (0, 0)"),
    "5077a": ((0, 0, 1, -7, 6), [(1, 0), (2, 0), (0, 2)], "conductor 5077, rank 3; three points of infinite order"),
}


def load_fixture(name: str) -> CurveFixture:
    coeffs, pts, note = _DATA[name]
    curve = EllipticCurve(*coeffs)
    points = tuple(curve.point(x, y) for x, y in pts)
    for pt in points:
        if not is_torsion_free_up_to_mazur(pt):
            raise ValueError(f"fixture point {pt} is torsion")
    return CurveFixture(name, curve, points, note)


def fixture_names() -> list[str]:
    return sorted(_DATA)
