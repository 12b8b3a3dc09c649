"""Confidence labels attached to every verdict."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Confidence:
    """``exact`` or ``conjectural_at_precision`` (with the bits used)."""

    kind: str
    bits: int = 0

    @classmethod
    def exact(cls) -> "Confidence":
        return cls("exact")

    @classmethod
    def conjectural(cls, bits: int) -> "Confidence":
        return cls("conjectural_at_precision", bits)

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def to_json(self) -> dict:
        if self.is_exact:
            return {"kind": self.kind}
        return {"kind": self.kind, "bits": self.bits}

    def __str__(self) -> str:
        return self.kind if self.is_exact else f"{self.kind}({self.bits})"
