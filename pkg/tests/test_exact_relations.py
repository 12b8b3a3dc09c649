"""Multiplicative relation lattices and subtori against brute force."""
from fractions import Fraction
from itertools import product

from hypothesis import given
from hypothesis import strategies as st

from topclosure.exact.intmat import snf
from topclosure.exact.relations import (
    closure_rational_generators,
    evaluate_relation,
    group_rank,
    mult_relation_lattice,
    rat_factor,
    smallest_subtorus,
    torsion_subgroup_order,
)

SIX = [(1, 2, 3), (Fraction(1, 2), 1, 5), (Fraction(1, 3), Fraction(1, 5), 1)]


def _is_torsion(xs, c):
    return all(abs(v) == 1 for v in evaluate_relation(xs, c))


def test_examples():
    assert mult_relation_lattice([2, 3]).rank == 0
    assert mult_relation_lattice([4, 8]).to_json() == [[3, -2]]
    lat = mult_relation_lattice([2, 3, 6])
    assert lat.rank == 1 and lat.contains([1, 1, -1])


def test_rat_factor():
    assert rat_factor(Fraction(-12, 35)) == (-1, {2: 2, 3: 1, 5: -1, 7: -1})


def test_subtorus_examples():
    assert smallest_subtorus([(2, 2)]).to_json() in ([[1, -1]], [[-1, 1]])
    assert smallest_subtorus(SIX).rank == 0
    ch = smallest_subtorus([(4, 8)])
    assert ch.rank == 1 and ch.contains([3, -2])


def test_subtorus_is_saturated():
    for gens in ([(4, 8)], [(9, 27), (4, 8)], [(6, 36, 216)], SIX):
        lat = smallest_subtorus(gens)
        if lat.rank:
            _, factors = snf(lat.to_json())
            assert all(f == 1 for f in factors if f)


def test_torsion_and_rank():
    assert torsion_subgroup_order([-1]) == 2
    assert torsion_subgroup_order([2, 3]) == 1
    assert group_rank([2, 4, -1]) == 1
    # -1 has a relation 2 * e = 0 that is +1, but exponent 1 gives -1
    lat = mult_relation_lattice([-1])
    assert lat.contains([1])


def test_closure_rational_generators():
    basis, verdict = closure_rational_generators([(1, 0), (Fraction(1, 2), 0)])
    assert verdict == "discrete" and basis == [[Fraction(1, 2), Fraction(0)]]
    basis, verdict = closure_rational_generators([(1, 0), (0, 1), (Fraction(1, 3), Fraction(1, 3))])
    assert len(basis) == 2
    basis, _ = closure_rational_generators([(0, 0)])
    assert basis == []


small_rat = st.builds(
    Fraction,
    st.sampled_from([-12, -6, -4, -3, -2, -1, 1, 2, 3, 4, 6, 8, 9, 12]),
    st.sampled_from([1, 2, 3, 4]),
)


@given(st.lists(small_rat.filter(lambda q: q != 0), min_size=1, max_size=3))
def test_relation_lattice_sound_and_complete(xs):
    lat = mult_relation_lattice(xs)
    for c in lat.to_json():
        assert _is_torsion(xs, c)
    for v in product(range(-3, 4), repeat=len(xs)):
        assert lat.contains(list(v)) == _is_torsion(xs, v)
