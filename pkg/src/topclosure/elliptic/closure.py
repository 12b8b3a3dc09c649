"""p-adic elliptic logarithms, closure ranks in E^k, and bounded dependence search."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from ..errors import Refusal
from ..exact.factor import valuation as int_valuation
from ..exact.intmat import IntegerLattice
from ..groups import EllipticProduct, GroupSpec
from ..padic.closure import PadicClosureReport, zp_rank
from ..padic.padic import PadicInt
from .curve import ECPoint, EllipticCurve, ec_count_points, ec_reduce_mod_p, fp_add, fp_mul, fp_neg, fp_order
from .formal import formal_log

DEFAULT_N = 32
DEFAULT_CAP = 256
MAZUR_TORSION_BOUND = 12


def _vp_frac(q: Fraction, p: int) -> int:
    return int_valuation(q.numerator, p) - int_valuation(q.denominator, p)


def _terms_needed(v: int, p: int, N: int) -> int:
    """Largest k whose term c_k t^k may be nonzero mod p^N when v(t) = v."""
    k, logk, nxt = 1, 0, p
    while k * v - logk < N:
        k += 1
        if k == nxt:
            logk += 1
            nxt *= p
    return max(k - 1, 2)


def formal_log_at(curve: EllipticCurve, t: Fraction, p: int, N: int) -> PadicInt:
    """L(t) mod p^N for rational t with v_p(t) >= 1, with a certified truncation.

    Uses v_p(c_k) >= -v_p(k): the invariant differential has integral coefficients.
    """
    if t == 0:
        return PadicInt(p, N, 0)
    v = _vp_frac(t, p)
    if v < 1:
        raise ValueError("the parameter must lie in p Z_p")
    T = _terms_needed(v, p, N)
    series = formal_log(curve, T)
    mod = p**N
    unit = t / Fraction(p) ** v
    w = unit.numerator * pow(unit.denominator, -1, mod) % mod
    total = 0
    wk = 1
    for k, c in enumerate(series.coefficients, start=1):
        wk = wk * w % mod
        if c == 0:
            continue
        s = int_valuation(c.denominator, p)
        e = k * v - s + int_valuation(c.numerator, p)
        if e >= N:
            continue
        num = c.numerator // p ** int_valuation(c.numerator, p)
        den = c.denominator // p**s
        total += num * pow(den, -1, mod) * p**e * wk
    return PadicInt(p, N, total)


def _kernel_parameter(P: ECPoint) -> Fraction | None:
    """t = -x/y for a point in the kernel of reduction; None for infinity."""
    if P.is_infinity:
        return None
    return -P.x / P.y


def elliptic_log_scaled(P: ECPoint, p: int, N: int, n: int) -> PadicInt:
    """L(t(nP)) mod p^N, which is n * log_p(P), for n a multiple of the reduction order."""
    Q = n * P
    t = _kernel_parameter(Q)
    if t is None:
        return PadicInt(p, N, 0)
    return formal_log_at(P.curve, t, p, N)


def elliptic_padic_log(P: ECPoint, p: int, N: int) -> PadicInt:
    """The p-adic elliptic logarithm of P to precision N.

    P is pushed into the kernel of reduction by the order m of its reduction;
    log(P) = L(t(mP)) / m. Torsion points map to 0.
    """
    curve = P.curve
    red = ec_reduce_mod_p(P, p)
    m = fp_order(curve, red, p)
    sm = int_valuation(m, p)
    val = elliptic_log_scaled(P, p, N + sm, m)
    if val.is_zero():
        return PadicInt(p, N, 0)
    if val.valuation() < sm:
        raise Refusal(f"log at p={p} is not p-integral")
    return val / m


def _as_tuples(points: Sequence) -> list[tuple[ECPoint, ...]]:
    return [tuple(x) if isinstance(x, (tuple, list)) else (x,) for x in points]


def _good_primes(curve: EllipticCurve, count: int = 6) -> list[int]:
    out, q = [], 5
    while len(out) < count:
        if all(q % d for d in range(2, int(q**0.5) + 1)) and curve.is_good_prime(q):
            out.append(q)
        q += 2
    return out


def _exact_sum(tuples: list[tuple[ECPoint, ...]], c: Sequence[int]) -> tuple[ECPoint, ...]:
    k = len(tuples[0])
    out = [tuples[0][j].curve.infinity for j in range(k)]
    for ci, t in zip(c, tuples):
        if ci:
            out = [a + ci * b for a, b in zip(out, t)]
    return tuple(out)


def _normalize(c: Sequence[int]) -> tuple[int, ...]:
    for v in c:
        if v:
            return tuple(c) if v > 0 else tuple(-x for x in c)
    return tuple(c)


def dependence_relations(points: Sequence, bound: int, primes: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """Every relation sum c_i S_i = 0 with |c_i| <= bound (up to sign), verified exactly.

    Candidates come from a meet-in-the-middle match of reductions modulo
    several good primes; only matches are checked in exact arithmetic.
    """
    tuples = _as_tuples(points)
    m = len(tuples)
    if m == 0:
        return []
    curves = {pt.curve for t in tuples for pt in t}
    qs = list(primes) if primes else sorted(set.intersection(*(set(_good_primes(c)) for c in curves)))
    k = len(tuples[0])
    # multiples[i][c] = key of c * S_i over all (prime, component)
    reds = [[[ec_reduce_mod_p(t[j], q) for j in range(k)] for q in qs] for t in tuples]

    def combine(keys_a, keys_b):
        return tuple(
            tuple(fp_add(tuples[0][j].curve, keys_a[qi][j], keys_b[qi][j], q) for j in range(k)) for qi, q in enumerate(qs)
        )

    rng = range(-bound, bound + 1)
    mult = []
    for i in range(m):
        table = {}
        for c in rng:
            table[c] = tuple(
                tuple(fp_mul(tuples[i][j].curve, c, reds[i][qi][j], q) for j in range(k)) for qi, q in enumerate(qs)
            )
        mult.append(table)
    zero = tuple(tuple(None for _ in range(k)) for _ in qs)
    h = m // 2

    def sums(idx: range):
        out = {}
        for cs in product(rng, repeat=len(idx)):
            acc = zero
            for i, c in zip(idx, cs):
                acc = combine(acc, mult[i][c])
            out.setdefault(acc, []).append(cs)
        return out

    left = sums(range(h))
    right = sums(range(h, m))
    found = set()
    for key, rcs in right.items():
        neg = tuple(tuple(fp_neg(tuples[0][j].curve, key[qi][j], q) for j in range(k)) for qi, q in enumerate(qs))
        for lc in left.get(neg, []):
            for rc in rcs:
                c = tuple(lc) + tuple(rc)
                if not any(c):
                    continue
                c = _normalize(c)
                if c in found:
                    continue
                if all(pt.is_infinity for pt in _exact_sum(tuples, c)):
                    found.add(c)
    return sorted(found, key=lambda c: (max(abs(x) for x in c), c))


def dependence_search(points: Sequence, bound: int, primes: Sequence[int] | None = None) -> tuple[int, ...] | None:
    """Smallest exact relation with coefficients bounded by ``bound``, or None up to the bound."""
    rels = dependence_relations(points, bound, primes)
    return rels[0] if rels else None


def is_torsion_free_up_to_mazur(P: ECPoint) -> bool:
    """True when nP != O for n <= 12, which proves P has infinite order."""
    Q = P
    for _ in range(MAZUR_TORSION_BOUND):
        if Q.is_infinity:
            return False
        Q = Q + P
    return not Q.is_infinity


def _skew_odd(tuples: list[tuple[ECPoint, ...]]) -> bool:
    m = len(tuples)
    if m != len(tuples[0]) or m % 2 == 0:
        return False
    return all(tuples[i][i].is_infinity for i in range(m)) and all(
        tuples[i][j] == -tuples[j][i] for i in range(m) for j in range(i + 1, m)
    )


def _log_matrix(tuples, p: int, N: int) -> list[list[PadicInt]]:
    curve = tuples[0][0].curve
    n = ec_count_points(curve, p)
    return [[elliptic_log_scaled(pt, p, N, n) for pt in t] for t in tuples]


def ec_dp_rank(
    spec: GroupSpec,
    p: int,
    N: int = DEFAULT_N,
    auto_retry: bool = True,
    cap: int = DEFAULT_CAP,
    relation_bound: int = 3,
) -> PadicClosureReport:
    """d(p) for a subgroup of E^k: the certified Z_p-rank of the elliptic log matrix.

    Rows are scaled by |E(F_p)|, which does not change the rank. The exact
    upper bound combines relations found by bounded search, exact torsion
    detection and odd skew-symmetry of the point matrix.
    """
    amb = spec.ambient
    if not isinstance(amb, EllipticProduct):
        raise Refusal("ec_dp_rank needs an elliptic product ambient")
    curve = amb.curve
    if not curve.is_good_prime(p):
        raise Refusal(f"bad reduction at p={p}")
    tuples = list(spec.generators)
    m, k = len(tuples), amb.k
    notes = []
    rels = dependence_relations(tuples, relation_bound) if m <= 6 else []
    rel_rank = IntegerLattice.from_generators([list(r) for r in rels], m).rank if rels else 0
    upper = min(k, m - rel_rank)
    if rel_rank:
        notes.append(f"{rel_rank} independent relation(s) with coefficients <= {relation_bound}")
    if _skew_odd(tuples):
        upper = min(upper, k - 1)
        notes.append("odd skew-symmetric point matrix: determinant vanishes identically")
    while True:
        logs = _log_matrix(tuples, p, N)
        rk = zp_rank(logs)
        status = "certified" if rk.lower == upper else "needs_more_precision"
        if status == "certified" or not auto_retry or 2 * N > cap:
            return PadicClosureReport(
                p=p,
                d_p=rk.lower,
                r_v=0,
                torsion_exponent=0,
                ell_p=rk.lower,
                precision_used=N,
                status=status,
                d_upper=upper,
                pivot_valuations=rk.pivot_valuations,
                notes=notes,
            )
        N *= 2


@dataclass
class MazurReport:
    p: int
    precision: int
    log_matrix: list[list[PadicInt]]
    skew_symmetric: bool
    determinant_exact_zero: bool
    determinant_padic_zero: bool
    dp: PadicClosureReport
    bound: int
    relation: tuple[int, ...] | None
    notes: list[str] = field(default_factory=list)

    @property
    def reproduces(self) -> bool:
        return self.skew_symmetric and self.determinant_exact_zero and self.dp.d_p <= 2 and self.relation is None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "precision": self.precision,
            "log_matrix": [[str(x.residue) for x in row] for row in self.log_matrix],
            "skew_symmetric": self.skew_symmetric,
            "determinant_exact_zero": self.determinant_exact_zero,
            "determinant_padic_zero": self.determinant_padic_zero,
            "dp": self.dp.to_json(),
            "dependence_bound": self.bound,
            "relation": list(self.relation) if self.relation else None,
            "reproduces": self.reproduces,
            "notes": list(self.notes),
        }


def _det3(m: list[list[PadicInt]]) -> PadicInt:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def mazur_counterexample_check(
    curve: EllipticCurve,
    P: ECPoint,
    Q: ECPoint,
    R: ECPoint,
    p: int,
    N: int = DEFAULT_N,
    bound: int = 20,
) -> MazurReport:
    """Check S1 = (0, P, Q), S2 = (-P, 0, R), S3 = (-Q, -R, 0) in E^3.

    Each log entry is computed from its own point, so skew-symmetry of the
    matrix is a genuine numerical check of the homomorphism property.
    """
    O = curve.infinity
    S = [(O, P, Q), (-P, O, R), (-Q, -R, O)]
    spec = GroupSpec(EllipticProduct(curve, 3), tuple(S), "S1,S2,S3")
    logs = _log_matrix(S, p, N)
    skew = all((logs[i][j] + logs[j][i]).is_zero() for i in range(3) for j in range(3))
    dp = ec_dp_rank(spec, p, N)
    rel = dependence_search(S, bound)
    return MazurReport(
        p=p,
        precision=N,
        log_matrix=logs,
        skew_symmetric=skew,
        determinant_exact_zero=_skew_odd(S),
        determinant_padic_zero=_det3(logs).is_zero(),
        dp=dp,
        bound=bound,
        relation=rel,
    )
