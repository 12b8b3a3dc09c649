"""Elliptic curves over Q: group law, reduction, formal logarithm and p-adic closure ranks."""
from .closure import (
    MazurReport,
    dependence_search,
    ec_dp_rank,
    elliptic_padic_log,
    mazur_counterexample_check,
)
from .curve import ECPoint, EllipticCurve, ec_add, ec_count_points, ec_mul, ec_neg, ec_reduce_mod_p
from .fixtures import load_fixture
from .formal import FormalLogSeries, formal_log

__all__ = [
    "ECPoint",
    "EllipticCurve",
    "FormalLogSeries",
    "MazurReport",
    "dependence_search",
    "ec_add",
    "ec_count_points",
    "ec_dp_rank",
    "ec_mul",
    "ec_neg",
    "ec_reduce_mod_p",
    "elliptic_padic_log",
    "formal_log",
    "load_fixture",
    "mazur_counterexample_check",
]
