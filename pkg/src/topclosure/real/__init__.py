"""Certified real arithmetic, relation detection and real closure verdicts."""
from .ball import Ball, ball_ln, ln_abs, ln_fraction
from .closure import RealClosureReport, Verdict, log_matrix, real_closure_verdict
from .diophantine import dirichlet_convergents, kronecker_verdict, orbit_sample
from .lll import is_lll_reduced, lll_reduce
from .rank import ball_det, certified_numeric_rank
from .relations import RelationCandidate, RelationStatus, find_integer_relation, search_relations
from .roots import embed_nf, sturm_isolate

__all__ = [
    "Ball",
    "RealClosureReport",
    "RelationCandidate",
    "RelationStatus",
    "Verdict",
    "ball_det",
    "ball_ln",
    "certified_numeric_rank",
    "dirichlet_convergents",
    "embed_nf",
    "find_integer_relation",
    "is_lll_reduced",
    "kronecker_verdict",
    "lll_reduce",
    "ln_abs",
    "ln_fraction",
    "log_matrix",
    "orbit_sample",
    "real_closure_verdict",
    "search_relations",
    "sturm_isolate",
]
