"""Ball arithmetic enclosures against mpmath at high precision."""
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from topclosure.real.ball import Ball, ball_ln, ball_sqrt, ln_abs, ln_fraction

@pytest.fixture(autouse=True, scope="module")
def _mp_precision():
    """High-precision mpmath oracle for this module only."""
    with mpmath.workprec(1200):
        yield



def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _contains(b: Ball, x) -> bool:
    return _mpf(b.lower()) <= x <= _mpf(b.upper())


positive = st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=10**6)


def test_ln_examples():
    assert ln_fraction(Fraction(1)).radius == 0 and ln_fraction(Fraction(1)).center == 0
    b = ln_fraction(Fraction(2), 256)
    assert _contains(b, mpmath.log(2))
    assert b.to_decimal(20) == "0.69314718055994530941"
    d = ln_fraction(Fraction(6), 256) - ln_fraction(Fraction(2), 256) - ln_fraction(Fraction(3), 256)
    assert d.contains_zero() and d.radius < Fraction(1, 2 ** (256 - 16))


def test_ln_rejects_nonpositive():
    with pytest.raises(ValueError):
        ball_ln(Ball(Fraction(-1), 0))
    with pytest.raises(ValueError):
        ball_ln(Ball(0, Fraction(1, 2)))


@given(positive, st.sampled_from([64, 128, 256, 512]))
def test_ln_encloses_mpmath(q, prec):
    b = ln_fraction(q, prec)
    assert _contains(b, mpmath.log(_mpf(q)))
    assert b.radius <= Fraction(1, 2 ** (prec - 8)) * max(1, abs(b.center))


@given(positive)
def test_ln_abs_of_negative(q):
    assert _contains(ln_abs(-q, 128), mpmath.log(_mpf(q)))


@given(positive)
def test_sqrt(q):
    assert _contains(ball_sqrt(Ball(q, 0, 200)), mpmath.sqrt(_mpf(q)))


# randomized expression trees over exact leaves
leaf = st.fractions(min_value=-50, max_value=50, max_denominator=1000)
ops = st.sampled_from(["+", "-", "*", "/", "ln"])


def trees(depth=3):
    if depth == 0:
        return leaf.map(lambda q: ("leaf", q))
    sub = trees(depth - 1)
    return st.one_of(
        leaf.map(lambda q: ("leaf", q)),
        st.tuples(ops, sub, sub),
    )


def _eval_ball(t, prec):
    if t[0] == "leaf":
        return Ball(t[1], 0, prec)
    op, a, b = t
    x, y = _eval_ball(a, prec), _eval_ball(b, prec)
    if x is None or y is None:
        return None
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op == "*":
        return x * y
    if op == "/":
        return None if y.contains_zero() else x / y
    return None if x.lower() <= 0 else ball_ln(x)


def _eval_mp(t):
    if t[0] == "leaf":
        return _mpf(t[1])
    op, a, b = t
    x, y = _eval_mp(a), _eval_mp(b)
    return {"+": lambda: x + y, "-": lambda: x - y, "*": lambda: x * y, "/": lambda: x / y, "ln": lambda: mpmath.log(x)}[op]()


@given(trees(), st.sampled_from([53, 100, 200]))
def test_expression_enclosure_and_monotone_refinement(t, prec):
    lo = _eval_ball(t, prec)
    hi = _eval_ball(t, 2 * prec)
    if lo is None or hi is None:
        return
    truth = _eval_mp(t)
    assert _contains(lo, truth) and _contains(hi, truth)
    # the finer enclosure is never wider, and always lies inside the coarse one
    assert hi.radius <= lo.radius
    assert lo.contains_ball(hi)


def test_inverse_of_ball_with_zero():
    with pytest.raises(ZeroDivisionError):
        Ball(0, Fraction(1, 10)).inverse()


def test_floor_certified():
    assert Ball(Fraction(5, 2), Fraction(1, 10)).floor_certified() == 2
    assert Ball(Fraction(3), Fraction(1, 10)).floor_certified() is None
