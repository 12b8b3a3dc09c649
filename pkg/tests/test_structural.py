"""Pencil decompositions, generic rank and the Waldschmidt inequality."""
import random
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from topclosure.real.ball import Ball, ln_fraction
from topclosure.structural import (
    GRID_BUDGET,
    decompose,
    decompose_logs,
    generic_rank,
    structural_rank,
    structural_rank_of_logs,
)

SIX = [[1, 2, 3], [Fraction(1, 2), 1, 5], [Fraction(1, 3), Fraction(1, 5), 1]]


def ln(q):
    return ln_fraction(Fraction(q), 256)


def _as_lists(bs):
    return [[[int(v) for v in row] for row in b] for b in bs]


# --- decomposition --------------------------------------------------------------

def test_decompose_identity_and_swap():
    dec = decompose([[ln(2), ln(3)], [ln(3), ln(2)]])
    assert _as_lists(dec.B_matrices) == [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]
    assert [float(b.center) for b in dec.lambda_basis] == [float(ln(2).center), float(ln(3).center)]


def test_decompose_all_ones():
    l2 = ln(2)
    dec = decompose([[l2, l2], [l2, l2]])
    assert len(dec.B_matrices) == 1 and _as_lists(dec.B_matrices) == [[[1, 1], [1, 1]]]


def test_decompose_powers_of_two():
    dec = decompose([[ln(2), ln(4)], [ln(8), ln(2)]])
    assert _as_lists(dec.B_matrices) == [[[1, 2], [3, 1]]]
    exact = decompose_logs([[2, 4], [8, 2]])
    assert exact.confidence.is_exact and _as_lists(exact.B_matrices) == [[[1, 2], [3, 1]]]


@given(st.lists(st.lists(st.sampled_from([2, 3, 4, 6, 9, Fraction(1, 2), Fraction(2, 3), 12]), min_size=2, max_size=3), min_size=1, max_size=3).filter(lambda rows: len({len(r) for r in rows}) == 1))
def test_reconstruction_within_enclosures(rows):
    m = [[ln(q) for q in r] for r in rows]
    for dec in (decompose(m), decompose_logs(rows)):
        for i, j in product(range(len(rows)), range(len(rows[0]))):
            rec = dec.reconstruct(i, j)
            assert not (rec - m[i][j]).excludes_zero()


# --- generic rank ------------------------------------------------------------------

def _skew(i, j):
    b = [[0] * 3 for _ in range(3)]
    b[i][j], b[j][i] = 1, -1
    return b


def test_skew_pencil_rank_two_exact():
    g = generic_rank([_skew(0, 1), _skew(0, 2), _skew(1, 2)], exact=True)
    assert g.s == 2 and g.exact and g.method == "grid"
    assert g.witness_minor != 0


def test_identity_and_diagonal_pencils():
    eye = [[int(i == j) for j in range(4)] for i in range(4)]
    assert generic_rank([eye]).s == 4
    g = generic_rank([[[1, 0], [0, 0]], [[0, 0], [0, 1]]])
    assert g.s == 2 and g.exact


def test_witness_minor_is_exact():
    g = generic_rank([_skew(0, 1), _skew(0, 2), _skew(1, 2)])
    t = g.witness_point
    mat = [[sum(ti * b[i][j] for ti, b in zip(t, [_skew(0, 1), _skew(0, 2), _skew(1, 2)])) for j in range(3)] for i in range(3)]
    sub = sympy.Matrix([[mat[r][c] for c in g.witness_cols] for r in g.witness_rows])
    assert Fraction(int(sub.det())) == g.witness_minor != 0


def test_bad_pencils():
    with pytest.raises(ValueError):
        generic_rank([])
    with pytest.raises(ValueError):
        generic_rank([[[1]], [[1, 0]]])


def _symbolic_rank(pencil):
    ts = sympy.symbols(f"t0:{len(pencil)}")
    rows, cols = len(pencil[0]), len(pencil[0][0])
    m = sympy.Matrix(rows, cols, lambda i, j: sum(t * b[i][j] for t, b in zip(ts, pencil)))
    return m.rank(simplify=True)


def _random_pencil(rng):
    rows, cols, k = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 3)
    # low-rank factors make rank drops common
    inner = rng.randint(1, min(rows, cols))
    pencil = []
    for _ in range(k):
        a = [[rng.randint(-2, 2) for _ in range(inner)] for _ in range(rows)]
        b = [[rng.randint(-2, 2) for _ in range(cols)] for _ in range(inner)]
        pencil.append([[sum(a[i][l] * b[l][j] for l in range(inner)) for j in range(cols)] for i in range(rows)])
    return pencil


def test_random_and_exact_modes_agree_on_200_pencils():
    rng = random.Random(2024)
    for n in range(200):
        pencil = _random_pencil(rng)
        if not any(any(any(r) for r in b) for b in pencil):
            continue
        grid = generic_rank(pencil, seed=n, exact=True)
        rand = generic_rank(pencil, seed=n, exact=False)
        assert grid.s == rand.s, pencil
        assert grid.exact


def test_grid_mode_matches_symbolic_rank():
    rng = random.Random(7)
    for n in range(25):
        pencil = _random_pencil(rng)
        if not any(any(any(r) for r in b) for b in pencil):
            continue
        assert generic_rank(pencil, exact=True).s == _symbolic_rank(pencil)


def test_grid_budget_constant():
    assert GRID_BUDGET >= 4**3


# --- structural rank -----------------------------------------------------------------

def test_three_points_structural_rank():
    res = structural_rank_of_logs(SIX)
    assert res.s == 2 and res.r_numeric.conjectural == 2 and res.r_equals_s
    assert res.generic.exact and res.confidence.is_exact


def test_four_primes_full_rank():
    res = structural_rank_of_logs([[2, 3], [5, 7]])
    assert res.s == 2 and res.r_numeric.lower == 2


def test_one_by_one():
    res = structural_rank([[ln(2)]])
    assert res.s == 1 and res.r_numeric.conjectural == 1


def test_numeric_path_matches_exact_path():
    m = [[Ball(0, 0, 256) if v == 1 else ln(v) for v in row] for row in SIX]
    assert structural_rank(m).s == structural_rank_of_logs(SIX).s == 2


entries = st.sampled_from([2, 3, 5, 6, 10, 15, Fraction(1, 2), Fraction(4, 9), 30, Fraction(5, 3)])
matrices = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 3).flatmap(lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r))
)


@given(matrices, st.data())
def test_permutation_and_transpose_invariance(rows, data):
    base = structural_rank_of_logs(rows).s
    pr = data.draw(st.permutations(range(len(rows))))
    pc = data.draw(st.permutations(range(len(rows[0]))))
    permuted = [[rows[i][j] for j in pc] for i in pr]
    transposed = [list(col) for col in zip(*rows)]
    assert structural_rank_of_logs(permuted).s == base
    assert structural_rank_of_logs(transposed).s == base


@given(matrices)
def test_waldschmidt_and_bounds(rows):
    res = structural_rank_of_logs(rows)
    r = res.r_numeric.conjectural
    assert r <= res.s <= 2 * r
    assert res.s <= min(len(rows), len(rows[0]))
    assert res.waldschmidt_holds


def test_determinism():
    a = structural_rank_of_logs(SIX, seed=11).to_json()
    b = structural_rank_of_logs(SIX, seed=11).to_json()
    assert a == b and a["generic_rank"]["seed"] == 11
