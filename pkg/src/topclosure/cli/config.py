"""Scenario configuration: a strict line-oriented ``key = value`` format, or JSON.

Every line is blank, a ``#`` comment, or ``key = value``. Keys that may repeat
(``theta``, ``generator``, ``row``, ``point``) accumulate into lists in file
order; any other repeated key is an error. Values are validated per key and per
kind, and all problems are collected before anything is reported.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Any, Optional

from ..errors import TopClosureError
from ..exact.factor import is_prime
from ..exact.numfield import NumberField
from ..exact.poly import parse_poly
from ..real.diophantine import RealNumber

KINDS = (
    "kronecker",
    "dirichlet",
    "six_exp",
    "four_exp_matrix",
    "torus_closure",
    "nori_scan",
    "elliptic_scan",
    "structural_rank",
    "mazur_check",
)

REPEATABLE = {"theta", "generator", "row", "point"}

COMMON_KEYS = {"kind", "label", "precision", "padic_n", "padic_cap", "seed"}
KIND_KEYS = {
    "kronecker": {"theta", "orbit_points"},
    "dirichlet": {"theta", "count"},
    "six_exp": {"row", "instances"},
    "four_exp_matrix": {"primes", "row"},
    "torus_closure": {"ambient", "generator"},
    "nori_scan": {"ambient", "generator", "primes"},
    "elliptic_scan": {"curve", "point", "primes"},
    "structural_rank": {"row", "instances", "shape", "mode"},
    "mazur_check": {"curve", "point", "primes", "bound"},
}
REQUIRED = {
    "kronecker": {"theta"},
    "dirichlet": {"theta"},
    "torus_closure": {"ambient", "generator"},
    "nori_scan": {"ambient", "generator", "primes"},
    "elliptic_scan": {"curve", "primes"},
    "mazur_check": {"curve", "primes"},
}

DEFAULTS = {
    "precision": 256,
    "padic_n": 64,
    "padic_cap": 512,
    "seed": 0,
    "count": 10,
    "orbit_points": 64,
    "instances": 0,
    "bound": 20,
    "mode": "auto",
}

_KEY = re.compile(r"[a-z][a-z0-9_]*")
_SEP = re.compile(r"[\s,]+")
_SQRT = re.compile(r"sqrt\(\s*(-?\d+)\s*\)")
_ROOT = re.compile(r"root\((.+),\s*(\d+)\s*\)")
_RANGE = re.compile(r"(\d+)\s*\.\.\s*(\d+)")


@dataclass(frozen=True)
class ConfigIssue:
    path: str
    message: str
    line: Optional[int] = None
    column: Optional[int] = None

    def __str__(self) -> str:
        where = f"line {self.line}, column {self.column}: " if self.line is not None else ""
        return f"{where}{self.path}: {self.message}" if self.path else f"{where}{self.message}"


class ConfigError(TopClosureError):
    """All problems found in a configuration, in source order."""

    def __init__(self, issues: list[ConfigIssue]):
        self.issues = issues
        super().__init__("\n".join(str(i) for i in issues))


@dataclass
class Entry:
    key: str
    value: str
    line: Optional[int] = None
    column: Optional[int] = None  # column where the value starts


@dataclass
class ScenarioConfig:
    kind: str
    label: str
    precision: int
    padic_n: int
    padic_cap: int
    seed: int
    thetas: list[tuple[str, RealNumber]] = field(default_factory=list)
    count: int = 10
    orbit_points: int = 64
    ambient: Any = None          # SplitTorus | WeilRestriction
    generators: list = field(default_factory=list)
    primes: list[int] = field(default_factory=list)
    rows: list[list[Fraction]] = field(default_factory=list)
    instances: int = 0
    shape: tuple[int, int] = (3, 3)
    mode: str = "auto"
    curve: Any = None            # EllipticCurve
    curve_name: Optional[str] = None
    points: list = field(default_factory=list)
    bound: int = 20
    echo: dict = field(default_factory=dict)

    def group_spec(self):
        from ..groups import GroupSpec

        return GroupSpec(self.ambient, tuple(self.generators), self.label)


# --- tokenizing ---------------------------------------------------------------

def _strip_comment(text: str) -> str:
    out, quoted = [], False
    for ch in text:
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            break
        out.append(ch)
    return "".join(out)


def _unquote(raw: str, line: int, col: int, issues: list[ConfigIssue]) -> str:
    if not raw.startswith('"'):
        if '"' in raw:
            issues.append(ConfigIssue("", "stray quote in value", line, col + raw.index('"')))
        return raw
    out, i = [], 1
    while i < len(raw):
        ch = raw[i]
        if ch == "\\" and i + 1 < len(raw):
            out.append(raw[i + 1])
            i += 2
            continue
        if ch == '"':
            if raw[i + 1 :].strip():
                issues.append(ConfigIssue("", "text after closing quote", line, col + i + 1))
            return "".join(out)
        out.append(ch)
        i += 1
    issues.append(ConfigIssue("", "unterminated string", line, col))
    return "".join(out)


def tokenize(text: str) -> tuple[list[Entry], list[ConfigIssue]]:
    entries, issues = [], []
    for ln, line in enumerate(text.splitlines(), start=1):
        body = _strip_comment(line)
        if not body.strip():
            continue
        if "=" not in body:
            col = len(body) - len(body.lstrip()) + 1
            issues.append(ConfigIssue("", "expected 'key = value'", ln, col))
            continue
        lhs, rhs = body.split("=", 1)
        key = lhs.strip()
        kcol = len(lhs) - len(lhs.lstrip()) + 1
        if not _KEY.fullmatch(key):
            msg = "missing key before '='" if not key else f"invalid key {key!r}"
            issues.append(ConfigIssue("", msg, ln, kcol))
            continue
        vcol = len(lhs) + 2 + (len(rhs) - len(rhs.lstrip()))
        raw = rhs.strip()
        if not raw:
            issues.append(ConfigIssue(key, "missing value", ln, vcol))
            continue
        entries.append(Entry(key, _unquote(raw, ln, vcol, issues), ln, vcol))
    return entries, issues


def _json_scalar(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (list, tuple)):
        return " ".join(_json_scalar(x) for x in v)
    return str(v)


def json_entries(text: str) -> tuple[list[Entry], list[ConfigIssue]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        return [], [ConfigIssue("", exc.msg, exc.lineno, exc.colno)]
    if not isinstance(data, dict):
        return [], [ConfigIssue("", "top level must be an object", 1, 1)]
    entries, issues = [], []
    for key, val in data.items():
        if not _KEY.fullmatch(key):
            issues.append(ConfigIssue(key, "invalid key"))
            continue
        if key in REPEATABLE and isinstance(val, list) and all(isinstance(v, (list, str)) for v in val):
            entries.extend(Entry(key, _json_scalar(v)) for v in val)
        else:
            entries.append(Entry(key, _json_scalar(val)))
    return entries, issues


# --- value parsers ------------------------------------------------------------

def _int(text: str, lo: int | None = None) -> int:
    try:
        v = int(text)
    except ValueError:
        raise ValueError(f"expected an integer, got {text!r}") from None
    if lo is not None and v < lo:
        raise ValueError(f"must be >= {lo}, got {v}")
    return v


def _vector(text: str) -> list[Fraction]:
    parts = [p for p in _SEP.split(text.strip()) if p]
    try:
        return [Fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"expected rational numbers, got {text!r}") from None


def _mode(text: str) -> str:
    if text not in ("auto", "exact", "random"):
        raise ValueError(f"expected auto, exact or random, got {text!r}")
    return text


def parse_real(text: str) -> RealNumber:
    """``22/7``, ``sqrt(2)``, or ``root(x^2 - x - 1, 0)`` (real embedding index)."""
    s = text.strip()
    m = _SQRT.fullmatch(s)
    if m:
        n = int(m.group(1))
        if n < 0:
            raise ValueError("sqrt of a negative integer is not real")
        r = isqrt(n)
        if r * r == n:
            return RealNumber.of(r)
        return RealNumber.of(NumberField((-n, 0, 1)).gen(), 0)
    m = _ROOT.fullmatch(s)
    if m:
        from ..real.roots import real_embedding_count

        f = parse_poly(m.group(1))
        field_ = NumberField(tuple(int(c) for c in f))
        which = int(m.group(2))
        if which >= real_embedding_count(field_):
            raise ValueError(f"embedding {which} out of range (field has {real_embedding_count(field_)} real places)")
        return RealNumber.of(field_.gen(), which) if field_.degree > 1 else RealNumber.of(-f[0])
    try:
        return RealNumber.of(Fraction(s))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot read a real number from {text!r}") from None


def parse_ambient(text: str):
    from ..groups import SplitTorus, WeilRestriction

    head, _, rest = text.strip().partition(" ")
    if head == "split_torus":
        return SplitTorus(_int(rest.strip(), 1))
    if head == "weil":
        if not rest.strip():
            raise ValueError("weil needs a defining polynomial")
        return WeilRestriction(NumberField.parse(rest.strip()))
    raise ValueError(f"expected 'split_torus <dim>' or 'weil <polynomial>', got {text!r}")


def parse_primes(text: str) -> list[int]:
    """``a..b`` (inclusive) or an explicit list; non-primes are rejected in lists."""
    s = text.strip()
    m = _RANGE.fullmatch(s)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        if a > b:
            raise ValueError(f"empty range {s!r}")
        return [p for p in range(max(a, 2), b + 1) if is_prime(p)]
    out = []
    for part in (p for p in _SEP.split(s) if p):
        v = _int(part, 2)
        if not is_prime(v):
            raise ValueError(f"{v} is not prime")
        out.append(v)
    return out


def parse_curve(text: str):
    from ..elliptic.curve import EllipticCurve
    from ..elliptic.fixtures import fixture_names, load_fixture

    s = text.strip()
    if s in fixture_names():
        fx = load_fixture(s)
        return fx.curve, s, list(fx.points)
    coeffs = [p for p in _SEP.split(s) if p]
    if len(coeffs) != 5:
        raise ValueError(f"expected a fixture name {fixture_names()} or five integers a1 a2 a3 a4 a6")
    return EllipticCurve(*(_int(c) for c in coeffs)), None, []


# --- validation ---------------------------------------------------------------

def _collect(entries: list[Entry], issues: list[ConfigIssue]) -> dict[str, list[Entry]]:
    seen: dict[str, list[Entry]] = {}
    for e in entries:
        if e.key in seen and e.key not in REPEATABLE:
            issues.append(ConfigIssue(e.key, "repeated key", e.line, e.column))
            continue
        seen.setdefault(e.key, []).append(e)
    return seen


def validate(entries: list[Entry], issues: list[ConfigIssue] | None = None) -> ScenarioConfig:
    issues = list(issues or [])
    seen = _collect(entries, issues)

    def fail(path: str, msg: str, e: Entry | None = None):
        issues.append(ConfigIssue(path, msg, e.line if e else None, e.column if e else None))

    kind = None
    if "kind" not in seen:
        fail("kind", f"required; one of {', '.join(KINDS)}")
    else:
        e = seen["kind"][0]
        if e.value not in KINDS:
            fail("kind", f"unknown kind {e.value!r}; expected one of {', '.join(KINDS)}", e)
        else:
            kind = e.value
    allowed = COMMON_KEYS | (KIND_KEYS[kind] if kind else set().union(*KIND_KEYS.values()))
    for key, es in seen.items():
        if key not in allowed:
            fail(key, f"unknown key for kind {kind!r}" if kind else "unknown key", es[0])
    if kind:
        for key in sorted(REQUIRED.get(kind, set()) - set(seen)):
            fail(key, "required")

    vals: dict[str, Any] = dict(DEFAULTS)

    def one(key, parse):
        if key in seen and key in allowed:
            e = seen[key][0]
            try:
                vals[key] = parse(e.value)
            except (ValueError, ZeroDivisionError, TopClosureError) as exc:
                fail(key, str(exc), e)

    def many(key, parse):
        out = []
        if key in seen and key in allowed:
            for i, e in enumerate(seen[key]):
                try:
                    out.append(parse(e.value))
                except (ValueError, ZeroDivisionError, TopClosureError) as exc:
                    fail(f"{key}[{i}]", str(exc), e)
        return out

    for key in ("precision", "padic_n", "padic_cap", "count", "orbit_points", "bound"):
        one(key, lambda t: _int(t, 1))
    one("seed", lambda t: _int(t, 0))
    one("instances", lambda t: _int(t, 0))
    one("mode", _mode)
    one("shape", lambda t: tuple(_int(x, 1) for x in _SEP.split(t.strip())))
    one("label", str)
    one("ambient", parse_ambient)
    one("primes", parse_primes)
    one("curve", parse_curve)

    thetas = []
    if "theta" in seen and "theta" in allowed:
        for i, e in enumerate(seen["theta"]):
            try:
                thetas.append((e.value, parse_real(e.value)))
            except (ValueError, TopClosureError) as exc:
                fail(f"theta[{i}]", str(exc), e)
    rows = many("row", _vector)
    raw_gens = many("generator", _vector)
    raw_points = many("point", _vector)

    cfg = ScenarioConfig(
        kind=kind or "",
        label=vals.get("label") or (kind or ""),
        precision=vals["precision"],
        padic_n=vals["padic_n"],
        padic_cap=vals["padic_cap"],
        seed=vals["seed"],
        thetas=thetas,
        count=vals["count"],
        orbit_points=vals["orbit_points"],
        primes=vals.get("primes", []),
        rows=rows,
        instances=vals["instances"],
        mode=vals["mode"],
        bound=vals["bound"],
    )
    if isinstance(vals.get("shape"), tuple):
        if len(vals["shape"]) != 2:
            fail("shape", "expected two integers: rows cols", seen["shape"][0])
        else:
            cfg.shape = vals["shape"]

    if kind and not issues:
        _check_kind(cfg, kind, vals, raw_gens, raw_points, seen, fail)
    if issues:
        issues.sort(key=lambda i: (i.line is None, i.line or 0, i.column or 0, i.path))
        raise ConfigError(issues)
    cfg.echo = {k: [e.value for e in es] if k in REPEATABLE else es[0].value for k, es in sorted(seen.items())}
    return cfg


def _check_kind(cfg, kind, vals, raw_gens, raw_points, seen, fail) -> None:
    if cfg.padic_cap < cfg.padic_n:
        fail("padic_cap", f"must be >= padic_n ({cfg.padic_n})", seen.get("padic_cap", [None])[0])
    if kind in ("torus_closure", "nori_scan"):
        amb = vals["ambient"]
        cfg.ambient = amb
        for i, g in enumerate(raw_gens):
            path = f"generator[{i}]"
            e = seen["generator"][i]
            if len(g) != amb.dim:
                fail(path, f"expected {amb.dim} coordinates, got {len(g)}", e)
                continue
            if hasattr(amb, "field"):
                x = amb.field.element(g)
                if x.is_zero():
                    fail(path, "zero is not in the multiplicative group", e)
                cfg.generators.append(x)
            else:
                if any(v == 0 for v in g):
                    fail(path, "coordinates must be nonzero", e)
                cfg.generators.append(tuple(g))
    if kind in ("six_exp", "structural_rank") and not cfg.rows and not cfg.instances:
        fail("row", "give matrix rows or a positive 'instances' count")
    if cfg.rows:
        width = len(cfg.rows[0])
        for i, r in enumerate(cfg.rows):
            if len(r) != width:
                fail(f"row[{i}]", f"expected {width} entries, got {len(r)}", seen["row"][i])
            if any(v == 0 for v in r):
                fail(f"row[{i}]", "entries must be nonzero (their logarithms are taken)", seen["row"][i])
    if kind == "six_exp" and cfg.rows and (len(cfg.rows), len(cfg.rows[0])) not in ((3, 2), (2, 3)):
        fail("row", "six exponentials matrices are 3x2 or 2x3")
    if kind == "four_exp_matrix":
        if cfg.rows and cfg.primes:
            fail("primes", "give either primes or rows, not both", seen["primes"][0])
        elif cfg.primes:
            if len(cfg.primes) != 4:
                fail("primes", f"expected 4 values, got {len(cfg.primes)}", seen["primes"][0])
            else:
                p = [Fraction(v) for v in cfg.primes]
                cfg.rows = [p[:2], p[2:]]
        elif not cfg.rows:
            fail("primes", "give four primes or two rows")
        if cfg.rows and (len(cfg.rows), len(cfg.rows[0])) != (2, 2):
            fail("row", "four exponentials matrices are 2x2")
    if kind in ("elliptic_scan", "mazur_check"):
        curve, name, fixture_points = vals["curve"]
        cfg.curve, cfg.curve_name = curve, name
        pts = []
        for i, v in enumerate(raw_points):
            if len(v) != 2:
                fail(f"point[{i}]", "expected two coordinates x y", seen["point"][i])
                continue
            try:
                pts.append(curve.point(*v))
            except ValueError as exc:
                fail(f"point[{i}]", str(exc), seen["point"][i])
        cfg.points = pts or fixture_points
        if not cfg.points:
            fail("point", "no points given and the curve is not a fixture")
        if kind == "mazur_check" and len(cfg.points) != 3:
            fail("point", f"mazur_check needs exactly three points, got {len(cfg.points)}")


def parse_config(text: str, fmt: str | None = None) -> ScenarioConfig:
    """Parse and validate; raises ConfigError listing every problem found."""
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "text"
    entries, issues = json_entries(text) if fmt == "json" else tokenize(text)
    return validate(entries, issues)


def override(cfg_text_entries: list[Entry], **values) -> list[Entry]:
    """Replace or add scalar keys (command-line overrides)."""
    out = [e for e in cfg_text_entries if e.key not in values or values[e.key] is None]
    for k, v in values.items():
        if v is not None:
            out.append(Entry(k, str(v)))
    return out


def load_config(text: str, fmt: str | None = None, **overrides) -> ScenarioConfig:
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "text"
    entries, issues = json_entries(text) if fmt == "json" else tokenize(text)
    return validate(override(entries, **overrides), issues)
