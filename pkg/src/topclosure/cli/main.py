"""Command-line entry point: ``topclosure demo|run|scan``."""
from __future__ import annotations

import argparse
import os
import sys
from importlib import resources
from pathlib import Path

from .config import ConfigError, load_config
from .runner import run, to_json, to_table

WORKERS_ENV = "TOPCLOSURE_WORKERS"
SCAN_KINDS = ("nori_scan", "elliptic_scan", "mazur_check")


def demo_names() -> list[str]:
    root = resources.files(__package__) / "fixtures"
    return sorted(p.name[: -len(".cfg")] for p in root.iterdir() if p.name.endswith(".cfg"))


def demo_text(name: str) -> str:
    path = resources.files(__package__) / "fixtures" / f"{name}.cfg"
    if not path.is_file():
        raise KeyError(name)
    return path.read_text(encoding="utf-8")


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_positive, help="real precision in bits")
    common.add_argument("--padic-N", dest="padic_n", type=_positive, help="starting p-adic precision")
    common.add_argument("--seed", type=int, help="seed for randomized evaluations")
    common.add_argument("--workers", type=_positive, default=None, help=f"worker processes (default ${WORKERS_ENV} or 1)")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--timings", action="store_true", help="add wall-clock timings (output is then not reproducible)")

    parser = argparse.ArgumentParser(prog="topclosure", description="Closures of finitely generated groups of algebraic points.")
    sub = parser.add_subparsers(dest="command", required=True)
    d = sub.add_parser("demo", parents=[common], help="run a packaged demo scenario")
    d.add_argument("name", nargs="?", help="demo name; omit to list demos")
    r = sub.add_parser("run", parents=[common], help="run a scenario config file (text or JSON)")
    r.add_argument("config", type=Path)
    s = sub.add_parser("scan", parents=[common], help="prime scan of a demo or config with an overridden prime range")
    s.add_argument("target", nargs="?", default="nori_sqrt2", help="demo name or config path (default nori_sqrt2)")
    s.add_argument("--primes", required=True, help="range a..b or a list such as 3,5,7")
    return parser


def _read_target(target: str) -> str:
    if target in demo_names():
        return demo_text(target)
    return Path(target).read_text(encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "demo" and not args.name:
        print("\n".join(demo_names()))
        return 0
    try:
        if args.command == "demo":
            if args.name not in demo_names():
                print(f"unknown demo {args.name!r}; available: {', '.join(demo_names())}", file=sys.stderr)
                return 1
            text = demo_text(args.name)
        elif args.command == "run":
            text = args.config.read_text(encoding="utf-8")
        else:
            text = _read_target(args.target)
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 1
    overrides = {"precision": args.precision, "padic_n": args.padic_n, "seed": args.seed}
    if args.command == "scan":
        overrides["primes"] = args.primes
    try:
        cfg = load_config(text, **overrides)
    except ConfigError as exc:
        for issue in exc.issues:
            print(f"config error: {issue}", file=sys.stderr)
        return 1
    if args.command == "scan" and cfg.kind not in SCAN_KINDS:
        print(f"scan needs a config of kind {', '.join(SCAN_KINDS)}, got {cfg.kind}", file=sys.stderr)
        return 1
    workers = args.workers or _default_workers()
    report = run(cfg, workers=workers, timings=args.timings)
    out = to_json(report) if args.format == "json" else to_table(report)
    if args.out:
        args.out.write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return report["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
