"""Topological rank of closed-form abelian groups.

The topological rank is the minimal rank of a free abelian subgroup whose
closure is open of finite index. Supported shapes are products of
Z^a, Z_p^d, (S^1)^t, R^k and a finite group.
"""
from __future__ import annotations

import re
from dataclasses import dataclass


@dataclass(frozen=True)
class GroupShape:
    lattice: int = 0   # a: copies of Z
    padic: int = 0     # d: copies of Z_p
    circle: int = 0    # t: copies of S^1
    real: int = 0      # k: copies of R
    finite: int = 1    # order of the finite factor

    def __post_init__(self):
        if min(self.lattice, self.padic, self.circle, self.real) < 0 or self.finite < 1:
            raise ValueError("shape exponents must be non-negative")

    @classmethod
    def parse(cls, text: str) -> "GroupShape":
        """Parse products such as ``Z x Z_p^2 x F``, ``R^1 x Z/2`` or ``(S1)^3``."""
        counts = {"lattice": 0, "padic": 0, "circle": 0, "real": 0}
        finite = 1
        for part in re.split(r"\s*(?:x|\*|×)\s*", text.strip()):
            if not part:
                continue
            m = re.fullmatch(r"\(?\s*(Z_p|Zp|Z|S\^?1|S|R)\s*\)?(?:\^(\d+))?", part)
            if m:
                base, exp = m.group(1), int(m.group(2) or 1)
                key = {"Z": "lattice", "Z_p": "padic", "Zp": "padic", "R": "real"}.get(base, "circle")
                counts[key] += exp
                continue
            m = re.fullmatch(r"Z/(\d+)", part)
            if m:
                finite *= int(m.group(1))
                continue
            if part == "F":
                continue
            raise ValueError(f"unsupported factor {part!r}")
        return cls(finite=finite, **counts)


def topological_rank(shape: GroupShape | str) -> int:
    """a + d for Z^a x Z_p^d x F; a + c for real shapes, where c counts what the
    connected part needs: 0 if trivial, 1 for a torus alone, k + 1 when R^k occurs.
    """
    if isinstance(shape, str):
        shape = GroupShape.parse(shape)
    if shape.padic and (shape.circle or shape.real):
        raise ValueError("unsupported shape: mixes p-adic and archimedean factors")
    if shape.padic:
        return shape.lattice + shape.padic
    if shape.real:
        return shape.lattice + shape.real + 1
    return shape.lattice + (1 if shape.circle else 0)
