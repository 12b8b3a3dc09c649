"""Real-side closure verdicts for subgroups of tori.

Work happens in the identity component: a torus point x maps to the vector
log|x| in R^n (one coordinate per real place), so the group becomes a finitely
generated subgroup Lambda of R^n, and sign data is finite-index bookkeeping.
The closure of Lambda is V + D with V a subspace and D discrete. If A is the
m x n log matrix of a torsion-free generating set and k = rank A, then the
rank j of D equals the rank of Z^m intersected with the column space of A, and
dim V = k - j.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from ..confidence import Confidence
from ..errors import Refusal
from ..exact.intmat import IntegerLattice
from ..exact.numfield import NfElement
from ..exact.relations import (
    complement_basis,
    mult_relation_lattice,
    smallest_subtorus,
    torsion_subgroup_order,
)
from ..groups import GroupSpec, SplitTorus, WeilRestriction
from .ball import DEFAULT_PREC, Ball, ball_ln, ln_abs
from .rank import NumericRank, ball_det, certified_numeric_rank
from .relations import search_relations
from .roots import embed_nf, real_embedding_count


class Verdict(str, enum.Enum):
    DISCRETE = "discrete"
    DENSE = "dense"
    DENSE_IN_SUBTORUS = "dense_in_subtorus"
    # closure neither discrete nor of finite index in B(R): the trichotomy fails
    NOT_ALGEBRAIC = "not_algebraic"
    UNDECIDED = "undecided"


@dataclass
class RealClosureReport:
    ambient_dim: int
    generator_rank: int
    identity_component_dim: int
    discrete_rank: int
    verdict: Verdict
    confidence: Confidence
    subtorus_dim: int
    character_lattice: IntegerLattice
    subtorus_exact: bool
    relation_lattice: IntegerLattice
    relations_exact: bool
    numeric_rank: NumericRank | None
    torsion_order: int | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "generator_rank": self.generator_rank,
            "identity_component_dim": self.identity_component_dim,
            "discrete_rank": self.discrete_rank,
            "verdict": self.verdict.value,
            "confidence": self.confidence.to_json(),
            "subtorus_dim": self.subtorus_dim,
            "character_lattice": self.character_lattice.to_json(),
            "subtorus_exact": self.subtorus_exact,
            "relation_lattice": self.relation_lattice.to_json(),
            "relations_exact": self.relations_exact,
            "numeric_rank": self.numeric_rank.to_json() if self.numeric_rank else None,
            "torsion_order": self.torsion_order,
            "notes": list(self.notes),
        }


def _abs_ball(b: Ball) -> Ball:
    s = b.sign()
    if s == 0:
        raise ValueError("embedding enclosure straddles zero")
    return b if s > 0 else -b


def log_matrix(spec: GroupSpec, prec: int = DEFAULT_PREC) -> list[list[Ball]]:
    """Rows: generators; columns: real places; entries ln|x| as balls."""
    amb = spec.ambient
    if isinstance(amb, SplitTorus):
        return [[ln_abs(v, prec) for v in g] for g in spec.generators]
    if isinstance(amb, WeilRestriction):
        n = amb.field.degree
        if real_embedding_count(amb.field) != n:
            raise Refusal("only totally real fields are supported on the real side")
        return [[ball_ln(_abs_ball(embed_nf(a, i, prec + 16))).with_prec(prec) for i in range(n)] for a in spec.generators]
    raise Refusal(f"real closure needs a torus ambient, got {type(amb).__name__}")


def _combine(coeffs: Sequence[Sequence[int]], rows: Sequence[Sequence[Ball]], prec: int) -> list[list[Ball]]:
    n = len(rows[0]) if rows else 0
    out = []
    for c in coeffs:
        acc = [Ball(0, 0, prec) for _ in range(n)]
        for ci, row in zip(c, rows):
            if ci:
                acc = [a + b * ci for a, b in zip(acc, row)]
        out.append(acc)
    return out


def _nf_product(gens: Sequence[NfElement], c: Sequence[int]) -> NfElement:
    out = gens[0].field.element([1])
    for g, e in zip(gens, c):
        if e:
            out = out * g**e
    return out


def _weil_relations(spec: GroupSpec, logs: list[list[Ball]]) -> tuple[IntegerLattice, bool]:
    """Relations modulo torsion among number-field generators (detected, then verified)."""
    m = spec.ngens
    found = search_relations(logs)
    exact = True
    for c in found.lattice.basis:
        prod = _nf_product(spec.generators, c)
        if not (prod.is_rational() and abs(prod.coords[0]) == 1):
            exact = False
    return IntegerLattice.from_generators(list(found.lattice.basis), m), exact


def _weil_subtorus(logs: list[list[Ball]], n: int) -> IntegerLattice:
    cols = [[logs[i][j] for i in range(len(logs))] for j in range(n)]
    return search_relations(cols).lattice


def _discrete_rank(a: list[list[Ball]], nr: NumericRank) -> int:
    """Rank of Z^m meet colspace(A), found as integer relations among dependency coefficients."""
    m, k = len(a), nr.lower
    if k == m:
        return k
    rows, cols = nr.witness
    sub = [[a[i][j] for j in cols] for i in rows]
    det = nr.witness_det
    # inverse of the witness minor by the adjugate
    inv = [[None] * k for _ in range(k)]
    for r in range(k):
        for c in range(k):
            minor = [[sub[i][j] for j in range(k) if j != r] for i in range(k) if i != c]
            cof = ball_det(minor) if minor else Ball(1, 0, det.prec)
            inv[r][c] = (cof if (r + c) % 2 == 0 else -cof) / det
    others = [i for i in range(m) if i not in rows]
    coeff = []
    for i in others:
        v = [a[i][j] for j in cols]
        coeff.append([sum((v[s] * inv[s][t] for s in range(k)), Ball(0, 0, det.prec)) for t in range(k)])
    prec = det.prec
    vecs = [[coeff[o][t] for o in range(len(others))] for t in range(k)]
    vecs += [[Ball(int(o == q), 0, prec) for o in range(len(others))] for q in range(len(others))]
    return search_relations(vecs).lattice.rank


def real_closure_verdict(spec: GroupSpec, precision: int = DEFAULT_PREC) -> RealClosureReport:
    amb = spec.ambient
    logs = log_matrix(spec, precision)
    n = amb.dim
    m = spec.ngens
    notes: list[str] = []
    rational = isinstance(amb, SplitTorus)
    if rational:
        rel = mult_relation_lattice(spec.generators)
        rel_exact = True
        chars = smallest_subtorus(spec.generators)
        sub_exact = True
        tors = torsion_subgroup_order(spec.generators)
    else:
        rel, rel_exact = _weil_relations(spec, logs)
        chars = _weil_subtorus(logs, n)
        sub_exact = False
        tors = None
        notes.append("subtorus from detected relations among conjugates")
        if not rel_exact:
            notes.append("a detected generator relation failed exact verification")
    quotient = complement_basis(rel) if rel.rank < m else []
    mq = len(quotient)
    a = _combine(quotient, logs, precision)
    dim_b = n - chars.rank
    if mq == 0:
        nr = None
        k = lower = j = 0
    else:
        nr = certified_numeric_rank(a)
        k, lower = nr.conjectural, nr.lower
        if rational and n == 1:
            # two multiplicatively independent rationals have an irrational log ratio
            j = 1 if mq == 1 else 0
        else:
            j = _discrete_rank(a, nr)
    ident = k - j
    if ident == 0:
        verdict = Verdict.DISCRETE
    elif ident == dim_b:
        verdict = Verdict.DENSE if dim_b == n else Verdict.DENSE_IN_SUBTORUS
    elif ident < dim_b:
        verdict = Verdict.NOT_ALGEBRAIC
    else:
        verdict = Verdict.UNDECIDED
        notes.append("identity component larger than the detected subtorus")
    # independent logs of the quotient generators certify both the relations and discreteness
    if lower == mq and rel_exact:
        conf = Confidence.exact()
    elif rational and n == 1:
        conf = Confidence.exact()
    else:
        conf = Confidence.conjectural(precision)
    return RealClosureReport(
        ambient_dim=n,
        generator_rank=mq,
        identity_component_dim=ident,
        discrete_rank=j,
        verdict=verdict,
        confidence=conf,
        subtorus_dim=dim_b,
        character_lattice=chars,
        subtorus_exact=sub_exact,
        relation_lattice=rel,
        relations_exact=rel_exact,
        numeric_rank=nr,
        torsion_order=tors,
        notes=notes,
    )
