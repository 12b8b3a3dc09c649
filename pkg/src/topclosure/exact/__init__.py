"""Exact arithmetic: integer matrices, factorization, number fields, relation lattices."""
from .factor import factor_int, is_prime, primes_between
from .intmat import IntegerLattice, hnf, rank_q, snf
from .numfield import NfElement, NumberField, nf_arith, nf_is_unit, nf_norm
from .relations import (
    closure_rational_generators,
    mult_relation_lattice,
    smallest_subtorus,
    trivial_relation_lattice,
)

__all__ = [
    "IntegerLattice",
    "NfElement",
    "NumberField",
    "closure_rational_generators",
    "factor_int",
    "hnf",
    "is_prime",
    "mult_relation_lattice",
    "nf_arith",
    "nf_is_unit",
    "nf_norm",
    "primes_between",
    "rank_q",
    "smallest_subtorus",
    "snf",
    "trivial_relation_lattice",
]
