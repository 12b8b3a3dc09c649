"""p-adic closure invariants of subgroups of tori: r_v, d(p), l(p), and prime scans."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import lcm
from typing import Iterable, Sequence

from ..errors import PrecisionExhausted, Refusal, TopClosureError
from ..exact.factor import is_prime
from ..exact.intmat import left_kernel, rank_q
from ..exact.relations import mult_relation_lattice
from ..groups import GroupSpec, SplitTorus, WeilRestriction
from .hensel import SplitValue, embed_padic, field_embeddings, split_rational
from .padic import PadicInt, padic_log_unit

DEFAULT_N = 64
DEFAULT_CAP = 512


@dataclass(frozen=True)
class ZpRank:
    """Certified lower bound for the Z_p-rank of a matrix known modulo p^N."""

    lower: int
    pivot_valuations: tuple[int, ...]
    residual_precision: int  # precision of the undecided block (-1 when nothing is left)


def zp_rank(m: Sequence[Sequence[PadicInt]]) -> ZpRank:
    """Gaussian elimination with minimal-valuation pivots.

    Before each step the remaining block is truncated to its smallest
    precision, so every pivot has valuation below the precision of every entry
    and all multipliers are p-adic integers. A pivot is counted only when it is
    certified nonzero.
    """
    rows = [list(r) for r in m if r]
    pivots: list[int] = []
    while rows and rows[0]:
        prec = min(x.N for r in rows for x in r)
        rows = [[x.with_prec(prec) for x in r] for r in rows]
        best = None
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                if not x.is_zero():
                    v = x.valuation()
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            return ZpRank(len(pivots), tuple(pivots), prec)
        v, i, j = best
        piv_row = rows[i]
        piv = piv_row[j]
        nxt = []
        for k, r in enumerate(rows):
            if k == i:
                continue
            f = r[j] / piv
            nxt.append([r[c] - f * piv_row[c] for c in range(len(r)) if c != j])
        rows = nxt
        pivots.append(v)
    return ZpRank(len(pivots), tuple(pivots), -1)


@dataclass
class PadicClosureReport:
    p: int
    d_p: int
    r_v: int
    torsion_exponent: int
    ell_p: int
    precision_used: int
    status: str  # certified | needs_more_precision
    d_upper: int
    pivot_valuations: tuple[int, ...] = ()
    notes: list[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "d_p": self.d_p,
            "r_v": self.r_v,
            "ell_p": self.ell_p,
            "torsion_exponent": self.torsion_exponent,
            "precision_used": self.precision_used,
            "status": self.status,
            "d_upper": self.d_upper,
            "pivot_valuations": list(self.pivot_valuations),
            "notes": list(self.notes),
        }


def local_data(spec: GroupSpec, p: int, N: int) -> list[list[SplitValue]]:
    """Each generator at each p-adic coordinate, split as p^v * unit."""
    amb = spec.ambient
    if isinstance(amb, SplitTorus):
        return [[split_rational(v, p, N) for v in g] for g in spec.generators]
    if isinstance(amb, WeilRestriction):
        emb = field_embeddings(amb.field, p, N)
        try:
            return [[embed_padic(a, emb, i) for i in range(amb.dim)] for a in spec.generators]
        except ValueError as exc:
            raise PrecisionExhausted(str(exc), N) from exc
    raise Refusal(f"dp_rank needs a torus ambient, got {type(amb).__name__}")


def _unit_order(u: PadicInt) -> int:
    """Order of the Teichmuller component of u (of u mod 4 when p = 2)."""
    p = u.p
    if p == 2:
        return 1 if u.residue % 4 == 1 else 2
    r = u.residue % p
    order, x = 1, r
    while x != 1:
        x = x * r % p
        order += 1
    return order


def _known_relation_rank(spec: GroupSpec) -> tuple[int, str]:
    """Rank of an exactly verified sublattice of multiplicative relations."""
    amb = spec.ambient
    if isinstance(amb, SplitTorus):
        return mult_relation_lattice(spec.generators).rank, "exact relation lattice"
    try:
        from ..real.closure import _weil_relations, log_matrix

        lat, exact = _weil_relations(spec, log_matrix(spec))
    except TopClosureError:
        return 0, "no relation information"
    if not exact:
        return 0, "detected relations failed verification"
    return lat.rank, "verified detected relations"


def _dp_once(spec: GroupSpec, p: int, N: int, relation_rank: int) -> PadicClosureReport:
    data = local_data(spec, p, N)
    m, n = len(data), len(data[0])
    vals = [[x.valuation for x in row] for row in data]
    r_v = rank_q(vals)
    if any(any(r) for r in vals):
        kernel = left_kernel(vals)
    else:
        kernel = [[int(i == j) for j in range(m)] for i in range(m)]
    logs = [[padic_log_unit(x.unit) for x in row] for row in data]
    combos = []
    for c in kernel:
        acc = None
        for ci, row in zip(c, logs):
            if ci:
                scaled = [x * ci for x in row]
                acc = scaled if acc is None else [a + b for a, b in zip(acc, scaled)]
        if acc is not None:
            combos.append(acc)
    rk = zp_rank(combos) if combos else ZpRank(0, (), -1)
    upper = min(n, len(kernel) - relation_rank)
    tors = 1
    for row in data:
        for x in row:
            tors = lcm(tors, _unit_order(x.unit))
    status = "certified" if rk.lower == upper else "needs_more_precision"
    return PadicClosureReport(
        p=p,
        d_p=rk.lower,
        r_v=r_v,
        torsion_exponent=tors,
        ell_p=r_v + rk.lower,
        precision_used=N,
        status=status,
        d_upper=upper,
        pivot_valuations=rk.pivot_valuations,
    )


def dp_rank(
    spec: GroupSpec,
    p: int,
    N: int = DEFAULT_N,
    auto_retry: bool = True,
    cap: int = DEFAULT_CAP,
    relation_rank: int | None = None,
) -> PadicClosureReport:
    """d(p), r_v and l(p) = r_v + d(p) for a subgroup of a torus.

    The valuation part is split off exactly; d(p) is the Z_p-rank of the
    Iwasawa logarithms of the valuation-free subgroup. A rank is certified only
    when the certified lower bound meets the exact upper bound
    min(dim, rank of the valuation-free subgroup modulo torsion); otherwise the
    precision is doubled up to ``cap`` (when ``auto_retry``).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if relation_rank is None:
        relation_rank, how = _known_relation_rank(spec)
    else:
        how = "supplied"
    while True:
        try:
            rep = _dp_once(spec, p, N, relation_rank)
        except PrecisionExhausted:
            rep = None
        if rep is not None and (rep.certified or not auto_retry or 2 * N > cap):
            rep.notes.append(f"upper bound from {how}")
            return rep
        if not auto_retry or 2 * N > cap:
            raise PrecisionExhausted("embedding indistinguishable from zero", N)
        N *= 2


@dataclass
class NoriScanReport:
    rows: list[PadicClosureReport]
    skipped: list[tuple[int, str]]
    verdict: str  # constant | non_constant | inconclusive | no_data
    d_values: list[int]
    structural_rank: int | None = None
    matches_structural: bool | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "rows": [r.to_json() for r in self.rows],
            "skipped": [{"p": p, "reason": why} for p, why in self.skipped],
            "verdict": self.verdict,
            "d_values": list(self.d_values),
            "structural_rank": self.structural_rank,
            "matches_structural": self.matches_structural,
            "notes": list(self.notes),
        }


def _scan_one(args):
    spec, p, N, cap, rel = args
    try:
        return p, dp_rank(spec, p, N, True, cap, rel), None
    except Refusal as exc:
        return p, None, exc.reason
    except TopClosureError as exc:
        return p, None, str(exc)


def nori_scan(
    spec: GroupSpec,
    primes: Iterable[int],
    N: int = DEFAULT_N,
    workers: int = 1,
    cap: int = DEFAULT_CAP,
    compare_structural: bool = True,
) -> NoriScanReport:
    """d(p) over a list of primes with a constancy verdict.

    Per-prime work is independent; results are sorted by p so the report does
    not depend on the number of workers.
    """
    plist = sorted({int(p) for p in primes if p >= 2 and is_prime(int(p))})
    rel, _ = _known_relation_rank(spec)
    jobs = [(spec, p, N, cap, rel) for p in plist]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_one, jobs))
    else:
        results = [_scan_one(j) for j in jobs]
    results.sort(key=lambda t: t[0])
    rows = [r for _, r, _ in results if r is not None]
    skipped = [(p, why) for p, r, why in results if r is None]
    d_values = [r.d_p for r in rows]
    if not rows:
        verdict = "no_data"
    elif any(not r.certified for r in rows):
        verdict = "inconclusive"
    elif len(set(d_values)) == 1:
        verdict = "constant"
    else:
        verdict = "non_constant"
    report = NoriScanReport(rows, skipped, verdict, d_values)
    if compare_structural:
        try:
            from ..structural import structural_rank_of_spec

            s = structural_rank_of_spec(spec).s
            report.structural_rank = s
            if verdict == "constant":
                report.matches_structural = d_values[0] == s
        except TopClosureError as exc:
            report.notes.append(f"structural rank unavailable: {exc}")
    return report
