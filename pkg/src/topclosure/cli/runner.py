"""Dispatch a validated scenario to the owning module and assemble the report.

Per-prime and per-instance work is independent; results are collected and
sorted before the report is assembled, so the JSON does not depend on the
number of workers.
"""
from __future__ import annotations

import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Sequence

from .. import __version__
from ..errors import PrecisionExhausted, Refusal, TopClosureError, WaldschmidtViolation
from ..exact.relations import mult_relation_lattice
from .config import ScenarioConfig

SCHEMA_VERSION = 1

CERTIFIED = "certified"
CONJECTURAL = "conjectural"
UNDECIDED = "undecided"
REFUSED = "refused"
VIOLATION = "violation"
ERROR = "error"

FOUR_EXP_LABEL = "numerically nonzero; unproven in general"


def pmap(fn: Callable, jobs: Sequence, workers: int) -> list:
    """Order-preserving map, in worker processes when ``workers > 1``."""
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


def _item(id_: str, status: str, summary: str, result=None, error: str | None = None) -> dict:
    out = {"id": id_, "status": status, "summary": summary, "result": result}
    if error is not None:
        out["error"] = error
    return out


def _status_of(conf) -> str:
    return CERTIFIED if conf.is_exact else CONJECTURAL


def _frac_str(v: Fraction) -> str:
    return str(Fraction(v))


# --- kronecker / dirichlet ----------------------------------------------------

def run_kronecker(cfg: ScenarioConfig, workers: int) -> tuple[list, dict | None]:
    from ..real.diophantine import kronecker_verdict, max_gap, orbit_sample

    items = []
    for text, theta in cfg.thetas:
        verdict = kronecker_verdict(theta)
        pts = orbit_sample(theta, cfg.orbit_points, cfg.precision)
        gap = max_gap(pts)
        res = {
            "theta": text,
            "value": str(theta),
            "verdict": verdict,
            "confidence": {"kind": "exact"},
            "orbit_points": cfg.orbit_points,
            "orbit_max_gap": f"{float(gap):.6e}",
        }
        items.append(_item(text, CERTIFIED, f"{verdict}; max gap of {cfg.orbit_points} points {float(gap):.3e}", res))
    return items, None


def run_dirichlet(cfg: ScenarioConfig, workers: int) -> tuple[list, dict | None]:
    from ..real.diophantine import dirichlet_convergents

    items = []
    for text, theta in cfg.thetas:
        try:
            cl = dirichlet_convergents(theta, cfg.count, cfg.precision)
        except PrecisionExhausted as exc:
            items.append(_item(text, UNDECIDED, "precision exhausted", None, str(exc)))
            continue
        ok = all(c.certified_dirichlet() for c in cl.convergents)
        res = cl.to_json()
        res["theta"] = text
        res["all_dirichlet_certified"] = ok
        fracs = ", ".join(f"{c.p}/{c.q}" for c in cl.convergents)
        items.append(_item(text, CERTIFIED if ok else UNDECIDED, fracs, res))
    return items, None


# --- log matrices -------------------------------------------------------------

def _log_balls(rows: Sequence[Sequence[Fraction]], prec: int):
    from ..real.ball import ln_fraction

    return [[ln_fraction(abs(Fraction(v)), prec) for v in r] for r in rows]


def random_independent_matrix(rng: random.Random, shape: tuple[int, int], height: int = 30) -> list[list[Fraction]]:
    """A matrix of positive rationals whose entries are multiplicatively independent.

    Independence is certified by exact factorization (trivial relation lattice).
    """
    n = shape[0] * shape[1]
    while True:
        vals = []
        while len(vals) < n:
            q = Fraction(rng.randint(1, height), rng.randint(1, height))
            if q != 1 and q not in vals:
                vals.append(q)
        if mult_relation_lattice([(q,) for q in vals]).rank == 0:
            return [vals[i * shape[1] : (i + 1) * shape[1]] for i in range(shape[0])]


def _six_exp_one(job) -> dict:
    from ..real.rank import certified_numeric_rank

    idx, rows, prec = job
    indep = mult_relation_lattice([(q,) for r in rows for q in r]).rank == 0
    res = {
        "matrix": [[_frac_str(v) for v in r] for r in rows],
        "entries_multiplicatively_independent": indep,
    }
    try:
        nr = certified_numeric_rank(_log_balls(rows, prec))
    except PrecisionExhausted as exc:
        return _item(f"instance {idx}", UNDECIDED, "precision exhausted", res, str(exc))
    res["numeric_rank"] = nr.to_json()
    if nr.lower >= 2:
        return _item(f"instance {idx}", CERTIFIED, f"certified rank >= {nr.lower}", res)
    return _item(f"instance {idx}", UNDECIDED, f"only rank >= {nr.lower} certified at {prec} bits", res)


def run_six_exp(cfg: ScenarioConfig, workers: int) -> tuple[list, dict | None]:
    if cfg.rows:
        mats = [cfg.rows]
    else:
        rng = random.Random(cfg.seed)
        mats = [random_independent_matrix(rng, (3, 2)) for _ in range(cfg.instances)]
    items = pmap(_six_exp_one, [(i, m, cfg.precision) for i, m in enumerate(mats)], workers)
    lowers = [it["result"]["numeric_rank"]["lower"] for it in items if it["result"] and "numeric_rank" in it["result"]]
    agg = {"instances": len(items), "min_certified_rank": min(lowers) if lowers else None}
    return items, agg


def _exact_det2_zero(dec) -> bool:
    """Is det(sum_k lambda_k B_k) the zero polynomial in the lambda_k?"""
    bs = dec.B_matrices
    coeff: dict[tuple[int, int], Fraction] = {}
    for k, b in enumerate(bs):
        for l, c in enumerate(bs):
            key = (min(k, l), max(k, l))
            coeff[key] = coeff.get(key, Fraction(0)) + b[0][0] * c[1][1] - b[0][1] * c[1][0]
    return all(v == 0 for v in coeff.values())


def run_four_exp(cfg: ScenarioConfig, workers: int) -> tuple[list, dict | None]:
    from ..real.rank import ball_det
    from ..structural import decompose_logs

    rows = cfg.rows
    m = _log_balls(rows, cfg.precision)
    det = ball_det(m)
    dec = decompose_logs(rows, cfg.precision)
    res = {
        "matrix": [[f"ln {_frac_str(abs(v))}" for v in r] for r in rows],
        "determinant": det.to_json(),
        "determinant_excludes_zero": det.sign() != 0,
        "decomposition": dec.to_json(),
    }
    if _exact_det2_zero(dec):
        res["label"] = "determinant is identically zero (exact)"
        return [_item("matrix", CERTIFIED, "det = 0 exactly", res)], None
    if det.sign() != 0:
        res["label"] = FOUR_EXP_LABEL
        return [_item("matrix", CERTIFIED, f"det = {det.to_decimal(12)}; {FOUR_EXP_LABEL}", res)], None
    res["label"] = "enclosure contains zero"
    return [_item("matrix", UNDECIDED, "enclosure contains zero", res)], None


# --- tori ---------------------------------------------------------------------

def run_torus_closure(cfg: ScenarioConfig, workers: int) -> tuple[list, dict | None]:
    from ..real.closure import Verdict, real_closure_verdict
    from ..structural import structural_rank_of_spec

    spec = cfg.group_spec()
    try:
        rep = real_closure_verdict(spec, cfg.precision)
    except Refusal as exc:
        return [_item("closure", REFUSED, exc.reason, None, exc.reason)], None
    except PrecisionExhausted as exc:
        return [_item("closure", UNDECIDED, "precision exhausted", None, str(exc))], None
    res = rep.to_json()
    status = UNDECIDED if rep.verdict == Verdict.UNDECIDED else _status_of(rep.confidence)
    items = [_item("closure", status, f"{rep.verdict.value}; dim B = {rep.subtorus_dim}; identity dim {rep.identity_component_dim}", res)]
    try:
        sr = structural_rank_of_spec(spec, cfg.precision, cfg.seed)
        items.append(_item("structural_rank", _status_of(sr.confidence), f"s = {sr.s} ({sr.generic.method})", sr.to_json()))
    except WaldschmidtViolation as exc:
        items.append(_item("structural_rank", VIOLATION, "Waldschmidt inequality violated", None, str(exc)))
    except TopClosureError as exc:
        items.append(_item("structural_rank", REFUSED, str(exc), None, str(exc)))
    return items, None


def _scan_verdict(rows: list[dict]) -> str:
    if not rows:
        return "no_data"
    if any(r["status"] != CERTIFIED for r in rows):
        return "inconclusive"
    ds = {r["result"]["d_p"] for r in rows}
    return "constant" if len(ds) == 1 else "non_constant"


def run_nori_scan(cfg: ScenarioConfig, workers: int) -> tuple[list, dict | None]:
    from ..padic.closure import nori_scan

    rep = nori_scan(cfg.group_spec(), cfg.primes, cfg.padic_n, workers, cfg.padic_cap)
    items = []
    for r in rep.rows:
        st = CERTIFIED if r.certified else UNDECIDED
        items.append(_item(f"p={r.p}", st, f"d={r.d_p} r_v={r.r_v} l={r.ell_p} N={r.precision_used}", r.to_json()))
    agg = rep.to_json()
    agg.pop("rows")
    return items, agg


# --- elliptic -----------------------------------------------------------------

def _ec_scan_one(job) -> tuple[int, dict | None, str | None]:
    from ..elliptic.closure import ec_dp_rank
    from ..elliptic.curve import ec_count_points

    spec, p, N, cap = job
    curve = spec.ambient.curve
    if not curve.is_good_prime(p):
        return p, None, f"bad reduction at p={p}"
    try:
        rep = ec_dp_rank(spec, p, N, True, cap)
    except Refusal as exc:
        return p, None, exc.reason
    except TopClosureError as exc:
        return p, None, str(exc)
    res = rep.to_json()
    res["group_order"] = ec_count_points(curve, p)
    st = CERTIFIED if rep.certified else UNDECIDED
    return p, _item(f"p={p}", st, f"|E(F_p)|={res['group_order']} d={rep.d_p} (upper {rep.d_upper})", res), None


def run_elliptic_scan(cfg: ScenarioConfig, workers: int) -> tuple[list, dict | None]:
    from ..groups import EllipticProduct, GroupSpec

    spec = GroupSpec(EllipticProduct(cfg.curve, 1), tuple((P,) for P in cfg.points), cfg.label)
    out = pmap(_ec_scan_one, [(spec, p, cfg.padic_n, cfg.padic_cap) for p in cfg.primes], workers)
    out.sort(key=lambda t: t[0])
    items = [it for _, it, _ in out if it is not None]
    agg = {
        "curve": cfg.curve.to_json(),
        "fixture": cfg.curve_name,
        "points": [P.to_json() for P in cfg.points],
        "skipped": [{"p": p, "reason": why} for p, it, why in out if it is None],
        "verdict": _scan_verdict(items),
        "d_values": [it["result"]["d_p"] for it in items],
    }
    return items, agg


def _mazur_one(job) -> tuple[int, dict | None, str | None]:
    from ..elliptic.closure import mazur_counterexample_check

    curve, pts, p, N, bound = job
    if not curve.is_good_prime(p):
        return p, None, f"bad reduction at p={p}"
    try:
        rep = mazur_counterexample_check(curve, *pts, p, N, bound)
    except Refusal as exc:
        return p, None, exc.reason
    except TopClosureError as exc:
        return p, None, str(exc)
    st = CERTIFIED if rep.reproduces and rep.dp.certified else UNDECIDED
    summary = (
        f"skew={rep.skew_symmetric} det_exact_zero={rep.determinant_exact_zero} "
        f"d={rep.dp.d_p} relation={'none' if rep.relation is None else list(rep.relation)}"
    )
    return p, _item(f"p={p}", st, summary, rep.to_json()), None


def run_mazur_check(cfg: ScenarioConfig, workers: int) -> tuple[list, dict | None]:
    jobs = [(cfg.curve, tuple(cfg.points), p, cfg.padic_n, cfg.bound) for p in cfg.primes]
    out = sorted(pmap(_mazur_one, jobs, workers), key=lambda t: t[0])
    items = [it for _, it, _ in out if it is not None]
    agg = {
        "curve": cfg.curve.to_json(),
        "fixture": cfg.curve_name,
        "points": [P.to_json() for P in cfg.points],
        "skipped": [{"p": p, "reason": why} for p, it, why in out if it is None],
        "all_reproduce": bool(items) and all(it["status"] == CERTIFIED for it in items),
    }
    return items, agg


# --- structural rank ----------------------------------------------------------

def random_log_matrix(rng: random.Random, shape: tuple[int, int], primes=(2, 3, 5), span: int = 2) -> list[list[Fraction]]:
    """Rationals built from a few primes, so that the log matrix has relations."""
    def entry():
        while True:
            q = Fraction(1)
            for p in primes:
                q *= Fraction(p) ** rng.randint(-span, span)
            if q != 1:
                return q

    return [[entry() for _ in range(shape[1])] for _ in range(shape[0])]


def _structural_one(job) -> dict:
    from ..structural import structural_rank_of_logs

    idx, rows, prec, seed, exact = job
    res_base = {"matrix": [[_frac_str(v) for v in r] for r in rows]}
    try:
        sr = structural_rank_of_logs(rows, prec, seed, exact)
    except WaldschmidtViolation as exc:
        return _item(f"instance {idx}", VIOLATION, "Waldschmidt inequality violated", res_base, str(exc))
    except PrecisionExhausted as exc:
        return _item(f"instance {idx}", UNDECIDED, "precision exhausted", res_base, str(exc))
    res = {**res_base, **sr.to_json()}
    summary = f"s={sr.s} r={sr.r_numeric.conjectural} ({sr.generic.method})"
    return _item(f"instance {idx}", _status_of(sr.confidence), summary, res)


def run_structural_rank(cfg: ScenarioConfig, workers: int) -> tuple[list, dict | None]:
    exact = {"auto": None, "exact": True, "random": False}[cfg.mode]
    if cfg.rows:
        mats = [cfg.rows]
    else:
        rng = random.Random(cfg.seed)
        mats = [random_log_matrix(rng, cfg.shape) for _ in range(cfg.instances)]
    jobs = [(i, m, cfg.precision, cfg.seed, exact) for i, m in enumerate(mats)]
    items = pmap(_structural_one, jobs, workers)
    agg = {
        "instances": len(items),
        "waldschmidt_holds_all": all(it["status"] != VIOLATION for it in items),
    }
    return items, agg


RUNNERS = {
    "kronecker": run_kronecker,
    "dirichlet": run_dirichlet,
    "six_exp": run_six_exp,
    "four_exp_matrix": run_four_exp,
    "torus_closure": run_torus_closure,
    "nori_scan": run_nori_scan,
    "elliptic_scan": run_elliptic_scan,
    "structural_rank": run_structural_rank,
    "mazur_check": run_mazur_check,
}


# --- report -------------------------------------------------------------------

def overall_status(items: list[dict]) -> tuple[str, int]:
    """(status, exit code): 0 all certified, 2 something short of that, 1 hard failure."""
    sts = {it["status"] for it in items}
    if sts & {VIOLATION, ERROR}:
        return "failure", 1
    if not items:
        return "no_data", 2
    if sts == {CERTIFIED}:
        return CERTIFIED, 0
    return CONJECTURAL, 2


def run(cfg: ScenarioConfig, workers: int = 1, timings: bool = False) -> dict:
    """Run a scenario; module errors are embedded per item, never raised."""
    start = time.perf_counter()
    try:
        items, agg = RUNNERS[cfg.kind](cfg, workers)
    except Refusal as exc:
        items, agg = [_item(cfg.kind, REFUSED, exc.reason, None, exc.reason)], None
    except TopClosureError as exc:
        items, agg = [_item(cfg.kind, UNDECIDED, type(exc).__name__, None, str(exc))], None
    except Exception as exc:  # hard failure inside a module
        items, agg = [_item(cfg.kind, ERROR, type(exc).__name__, None, f"{type(exc).__name__}: {exc}")], None
    status, code = overall_status(items)
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "topclosure", "version": __version__},
        "kind": cfg.kind,
        "label": cfg.label,
        "seed": cfg.seed,
        "parameters": {
            "precision": cfg.precision,
            "padic_n": cfg.padic_n,
            "padic_cap": cfg.padic_cap,
            "seed": cfg.seed,
        },
        "config": cfg.echo,
        "items": items,
        "aggregate": agg,
        "status": status,
        "exit_code": code,
    }
    if timings:
        report["timings"] = {"total_seconds": round(time.perf_counter() - start, 3)}
    return report


def _canonical(obj):
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
        return float(f"{obj:.12g}")
    if hasattr(obj, "value") and hasattr(obj, "name"):  # enums
        return obj.value
    return obj


def to_json(report: dict) -> str:
    """Canonical JSON: sorted keys, two-space indent, fixed float formatting."""
    return json.dumps(_canonical(report), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def to_table(report: dict) -> str:
    lines = [
        f"{report['label']} [{report['kind']}]  status: {report['status']} (exit {report['exit_code']})",
        f"precision {report['parameters']['precision']} bits, p-adic N {report['parameters']['padic_n']}, seed {report['seed']}",
    ]
    items = report["items"]
    if items:
        w_id = max(len("item"), *(len(it["id"]) for it in items))
        w_st = max(len("status"), *(len(it["status"]) for it in items))
        lines.append(f"{'item':<{w_id}}  {'status':<{w_st}}  summary")
        lines.append(f"{'-' * w_id}  {'-' * w_st}  {'-' * 7}")
        for it in items:
            lines.append(f"{it['id']:<{w_id}}  {it['status']:<{w_st}}  {it['summary']}")
    agg = report.get("aggregate") or {}
    for key in ("verdict", "structural_rank", "matches_structural", "d_values", "all_reproduce", "min_certified_rank", "waldschmidt_holds_all"):
        if key in agg:
            lines.append(f"{key}: {agg[key]}")
    for s in agg.get("skipped", []):
        lines.append(f"skipped p={s['p']}: {s['reason']}")
    if "timings" in report:
        lines.append(f"elapsed: {report['timings']['total_seconds']} s")
    return "\n".join(lines) + "\n"
