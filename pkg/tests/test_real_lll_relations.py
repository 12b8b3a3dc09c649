"""LLL reduction, integer relations and certified numeric rank."""
from fractions import Fraction
from itertools import product

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from topclosure.exact.intmat import IntegerLattice, rank_q
from topclosure.exact.numfield import NumberField
from topclosure.exact.relations import mult_relation_lattice
from topclosure.errors import PrecisionExhausted
from topclosure.real.ball import Ball, ln_fraction
from topclosure.real.lll import gram_schmidt_q, is_lll_reduced, lll_reduce
from topclosure.real.rank import ball_det, certified_numeric_rank
from topclosure.real.relations import RelationStatus, find_integer_relation, search_relations
from topclosure.real.roots import embed_nf, real_embedding_count, sturm_isolate

@pytest.fixture(autouse=True, scope="module")
def _mp_precision():
    """High-precision mpmath oracle for this module only."""
    with mpmath.workprec(600):
        yield

PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def ln(q, prec=256):
    return ln_fraction(Fraction(q), prec)


# --- roots --------------------------------------------------------------------

def test_sturm_examples():
    assert len(sturm_isolate([-2, 0, 1])) == 2
    (a, b), = sturm_isolate([-2, 0, 0, 1])
    assert a <= Fraction(12599, 10000) <= b
    f = [4, 0, -5, 0, 1]  # (x^2-1)(x^2-4)
    ivs = sturm_isolate(f)
    assert len(ivs) == 4
    for a, b in ivs:
        assert sum(1 for r in (-2, -1, 1, 2) if a <= r <= b) == 1


def test_sturm_squarefree_reduction_and_zero():
    assert len(sturm_isolate([1, -2, 1])) == 1  # (x - 1)^2
    with pytest.raises(ValueError):
        sturm_isolate([0])


def test_embeddings():
    k = NumberField((-2, 0, 1))
    b = embed_nf(k.element([1, 1]), 0, 128)
    assert b.contains(Fraction(b.center)) and abs(float(b.center) - (1 + 2**0.5)) < 1e-12
    assert float(embed_nf(k.gen(), 1, 64).center) < -1.414
    assert embed_nf(k.element([5]), 1, 64).center == 5
    assert real_embedding_count(NumberField((-2, 0, 0, 1))) == 1
    with pytest.raises(IndexError):
        embed_nf(k.gen(), 2, 64)


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=6).filter(lambda f: f[-1] != 0))
def test_sturm_count_matches_sympy(f):
    import sympy

    x = sympy.Symbol("x")
    expected = len(sympy.Poly(list(reversed(f)), x).real_roots(multiple=False)) if any(f[1:]) else 0
    assert len(sturm_isolate(f)) == expected


# --- LLL -------------------------------------------------------------------------

def test_identity_is_reduced():
    eye = [[int(i == j) for j in range(4)] for i in range(4)]
    assert lll_reduce(eye) == eye


def test_skewed_basis_short_vector():
    basis = [[1, 0], [10**9, 1]]
    red = lll_reduce(basis)
    assert is_lll_reduced(red)
    shortest = min(
        a * a + b * b
        for c1, c2 in product(range(-5, 6), repeat=2)
        if (c1, c2) != (0, 0)
        for a, b in [(c1 * basis[0][0] + c2 * basis[1][0], c1 * basis[0][1] + c2 * basis[1][1])]
    )
    assert sum(v * v for v in red[0]) <= 2 * shortest


@given(st.integers(2, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-50, 50), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_lll_conditions_and_same_lattice(basis):
    if rank_q(basis) < len(basis):
        return
    red = lll_reduce(basis)
    assert is_lll_reduced(red)
    a = IntegerLattice.from_generators(basis, len(basis))
    b = IntegerLattice.from_generators(red, len(basis))
    assert a.to_json() == b.to_json()
    # Lovasz condition checked directly from rational Gram-Schmidt
    bstar, mu = gram_schmidt_q(red)
    norms = [sum(x * x for x in v) for v in bstar]
    for k in range(1, len(red)):
        assert norms[k] >= (Fraction(99, 100) - mu[k][k - 1] ** 2) * norms[k - 1]
        assert all(abs(mu[k][j]) <= Fraction(1, 2) for j in range(k))


# --- relations ----------------------------------------------------------------

def test_relation_examples():
    rel = find_integer_relation([ln(2), ln(3), ln(6)])
    assert rel.coefficients in ((1, 1, -1), (-1, -1, 1))
    assert rel.status == RelationStatus.HEURISTIC_RELATION
    none = find_integer_relation([ln(2), ln(3)], coeff_bound=10**6)
    assert none is not None and none.status == RelationStatus.CERTIFIED_NONRELATION
    k = NumberField((-2, 0, 1))
    s2 = embed_nf(k.gen(), 0, 256)
    rel = find_integer_relation([Ball(1, 0, 256), s2, embed_nf(k.element([1, 2]), 0, 256)])
    assert rel.coefficients in ((1, 2, -1), (-1, -2, 1))


@given(st.lists(st.sampled_from(PRIMES), min_size=2, max_size=5, unique=True), st.data())
def test_planted_relation_recovers_exact_lattice(primes, data):
    coeffs = data.draw(st.lists(st.integers(-20, 20), min_size=len(primes), max_size=len(primes)))
    planted = Fraction(1)
    for p, c in zip(primes, coeffs):
        planted *= Fraction(p) ** c
    xs = [Fraction(p) for p in primes] + [planted]
    if planted == 1:
        return
    found = search_relations([ln(q) for q in xs], coeff_bound=100)
    exact = mult_relation_lattice(xs)
    assert found.lattice.to_json() == exact.to_json()


# --- numeric rank ---------------------------------------------------------------

def test_rank_examples():
    z = Ball(0, 0, 256)
    six = [[z, ln(2), ln(3)], [-ln(2), z, ln(5)], [-ln(3), -ln(5), z]]
    nr = certified_numeric_rank(six)
    assert (nr.lower, nr.conjectural) == (2, 2)
    nr = certified_numeric_rank([[ln(2), ln(3)], [ln(3), ln(2)]])
    assert nr.lower == 2
    # rows (ln2, 2 ln2) and (ln3, 3 ln3): det = ln2 ln3, a product of nonzero logs
    nr = certified_numeric_rank([[ln(2), ln(4)], [ln(3), ln(27)]])
    assert nr.lower == nr.conjectural == 2


def test_rank_of_exactly_dependent_matrix():
    nr = certified_numeric_rank([[ln(2), ln(4)], [ln(3), ln(9)]])
    assert nr.lower == 1 and nr.conjectural == 1


def test_rank_undecided_raises():
    fuzzy = Ball(0, Fraction(1, 4), 8)
    with pytest.raises(PrecisionExhausted):
        certified_numeric_rank([[fuzzy, Ball(0, 0, 8)], [Ball(0, 0, 8), Ball(1, 0, 8)]])


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_rank_matches_exponent_oracle(rows, cols, data):
    """Log matrices of products of 2, 3, 5 against an SVD rank at 600 bits."""
    exps = data.draw(st.lists(st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=cols, max_size=cols), min_size=rows, max_size=rows))
    qs = [[Fraction(2) ** e[0] * Fraction(3) ** e[1] * Fraction(5) ** e[2] for e in row] for row in exps]
    m = [[ln(q) for q in row] for row in qs]
    mp = mpmath.matrix([[sum(c * mpmath.log(p) for c, p in zip(e, (2, 3, 5))) for e in row] for row in exps])
    try:
        nr = certified_numeric_rank(m)
    except PrecisionExhausted:
        return
    svals = mpmath.svd_r(mp, compute_uv=False) if min(rows, cols) else []
    true_rank = sum(1 for s in svals if abs(s) > mpmath.mpf(10) ** -100)
    assert nr.lower <= true_rank
    assert nr.conjectural == true_rank


def test_ball_det_matches_mpmath():
    m = [[ln(p) for p in row] for row in ([2, 3, 5], [7, 11, 13], [17, 19, 23])]
    ref = mpmath.det(mpmath.matrix([[mpmath.log(p) for p in row] for row in ([2, 3, 5], [7, 11, 13], [17, 19, 23])]))
    d = ball_det(m)
    assert mpmath.mpf(d.lower().numerator) / d.lower().denominator <= ref <= mpmath.mpf(d.upper().numerator) / d.upper().denominator
