"""p-adic arithmetic and the p-adic closure invariants d(p), r_v and l(p)."""
from .closure import NoriScanReport, PadicClosureReport, dp_rank, nori_scan, zp_rank
from .hensel import SplitEmbeddingSet, hensel_lift_roots
from .padic import PadicInt, padic_exp, padic_log_unit, teichmuller
from .toprank import GroupShape, topological_rank

__all__ = [
    "GroupShape",
    "NoriScanReport",
    "PadicClosureReport",
    "PadicInt",
    "SplitEmbeddingSet",
    "dp_rank",
    "hensel_lift_roots",
    "nori_scan",
    "padic_exp",
    "padic_log_unit",
    "teichmuller",
    "topological_rank",
    "zp_rank",
]
