"""Real closure verdicts, Kronecker verdicts and Dirichlet convergents."""
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from topclosure.exact.numfield import NumberField
from topclosure.errors import PrecisionExhausted, Refusal
from topclosure.groups import GroupSpec, SplitTorus, WeilRestriction
from topclosure.real.ball import Ball
from topclosure.real.closure import Verdict, real_closure_verdict
from topclosure.real.diophantine import dirichlet_convergents, kronecker_verdict, max_gap, orbit_sample

SIX = ((1, 2, 3), (Fraction(1, 2), 1, 5), (Fraction(1, 3), Fraction(1, 5), 1))
Q2 = NumberField((-2, 0, 1))


@pytest.fixture(autouse=True, scope="module")
def _mp_precision():
    """High-precision mpmath oracle for this module only."""
    with mpmath.workprec(300):
        yield


def torus(d, *gens):
    return GroupSpec(SplitTorus(d), tuple(gens))


def test_cyclic_is_discrete():
    rep = real_closure_verdict(torus(1, (2,)))
    assert rep.verdict == Verdict.DISCRETE and rep.confidence.is_exact
    assert rep.discrete_rank == 1 and rep.identity_component_dim == 0


def test_two_and_three_dense():
    rep = real_closure_verdict(torus(1, (2,), (3,)))
    assert rep.verdict == Verdict.DENSE and rep.confidence.is_exact
    assert rep.identity_component_dim == 1


def test_torsion_quotiented():
    rep = real_closure_verdict(torus(1, (2,), (4,), (-1,)))
    assert rep.verdict == Verdict.DISCRETE and rep.torsion_order == 2


def test_three_points_not_algebraic():
    rep = real_closure_verdict(torus(3, *SIX))
    assert rep.subtorus_dim == 3 and rep.subtorus_exact
    assert rep.character_lattice.rank == 0
    assert rep.identity_component_dim == 2
    assert rep.numeric_rank.lower == 2 and rep.numeric_rank.conjectural == 2
    assert rep.verdict == Verdict.NOT_ALGEBRAIC
    assert not rep.confidence.is_exact and rep.confidence.bits == 256


def test_dense_in_subtorus():
    rep = real_closure_verdict(torus(2, (2, 2), (3, 3)))
    assert rep.verdict == Verdict.DENSE_IN_SUBTORUS and rep.subtorus_dim == 1


def test_weil_units():
    rep = real_closure_verdict(GroupSpec(WeilRestriction(Q2), (Q2.element([1, 1]), Q2.element([3, 2]))))
    assert rep.verdict == Verdict.DISCRETE and rep.relations_exact


def test_weil_non_totally_real_refused():
    k = NumberField((-2, 0, 0, 1))
    with pytest.raises(Refusal):
        real_closure_verdict(GroupSpec(WeilRestriction(k), (k.element([1, 1]),)))


def test_report_json_roundtrip():
    import json

    js = real_closure_verdict(torus(3, *SIX)).to_json()
    assert json.loads(json.dumps(js)) == js and js["verdict"] == "not_algebraic"


# --- Kronecker and Dirichlet ----------------------------------------------------

def test_kronecker_examples():
    assert kronecker_verdict(Fraction(1, 3)) == "not_dense"
    assert kronecker_verdict(Q2.gen()) == "dense"
    assert kronecker_verdict(Q2.element([5])) == "not_dense"


def test_orbit_sample_gap():
    pts = orbit_sample(Q2.gen(), 100)
    assert len(pts) == 100
    assert max_gap(pts) < Fraction(2, 100)
    s2 = mpmath.sqrt(2)
    for i, b in enumerate(pts):
        ref = mpmath.frac(i * s2)
        assert mpmath.mpf(b.lower().numerator) / b.lower().denominator <= ref <= mpmath.mpf(b.upper().numerator) / b.upper().denominator


def test_sqrt2_convergents():
    cl = dirichlet_convergents(Q2.gen(), 5)
    assert [(c.p, c.q) for c in cl.convergents] == [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)]
    c = cl.convergents[3]
    assert abs(abs(float(c.error.center)) - 0.00245) < 1e-5 and c.certified_dirichlet()


def test_rational_terminates():
    cl = dirichlet_convergents(Fraction(22, 7), 10)
    assert cl.terminated and cl.partial_quotients == (3, 7)
    assert (cl.convergents[-1].p, cl.convergents[-1].q) == (22, 7)


def test_ball_input():
    pi = Fraction(int(mpmath.pi * 10**40), 10**40)
    cl = dirichlet_convergents(Ball(pi, Fraction(1, 10**39), 160), 4)
    assert [(c.p, c.q) for c in cl.convergents] == [(3, 1), (22, 7), (333, 106), (355, 113)]
    with pytest.raises(PrecisionExhausted):
        dirichlet_convergents(Ball(Fraction(355, 113), Fraction(1, 10**30), 128), 3)


@given(st.integers(2, 200).filter(lambda n: int(n**0.5) ** 2 != n))
def test_convergents_certified_for_quadratic_irrationals(n):
    k = NumberField((-n, 0, 1))
    cl = dirichlet_convergents(k.gen(), 8)
    assert all(c.certified_dirichlet() for c in cl.convergents)
    x = mpmath.sqrt(n)
    for c in cl.convergents:
        assert c.q * abs(c.q * x - c.p) < 1
