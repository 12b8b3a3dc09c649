"""Elliptic curves: group law, reduction, point counts, formal log and p-adic ranks."""
import random
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from topclosure.elliptic import (
    EllipticCurve,
    dependence_search,
    ec_count_points,
    ec_dp_rank,
    ec_reduce_mod_p,
    elliptic_padic_log,
    formal_log,
    load_fixture,
    mazur_counterexample_check,
)
from topclosure.elliptic.curve import fp_add
from topclosure.errors import Refusal
from topclosure.exact.factor import primes_between
from topclosure.groups import EllipticProduct, GroupSpec

E37 = EllipticCurve(0, 0, 1, -1, 0)
P37 = E37.point(0, 0)
E5077 = load_fixture("5077a")
TORS = EllipticCurve(0, 0, 0, 0, 1)  # y^2 = x^3 + 1, torsion Z/6


def test_group_law_examples():
    O = E37.infinity
    assert P37 + O == P37 and O + P37 == P37
    assert P37 + (-P37) == O
    assert 2 * P37 == E37.point(1, 0)
    with pytest.raises(ValueError):
        P37 + TORS.point(0, 1)


def test_points_must_lie_on_curve():
    with pytest.raises(ValueError):
        E37.point(1, 1)
    with pytest.raises(ValueError):
        EllipticCurve(0, 0, 0, 0, 0)


def _small_points(fx, count=12):
    rng = random.Random(5)
    gens = fx.points
    out = []
    for _ in range(count):
        c = [rng.randint(-2, 2) for _ in gens]
        pt = E5077.curve.infinity
        for ci, g in zip(c, gens):
            pt = pt + ci * g
        out.append(pt)
    return out


def test_associativity_on_generated_points():
    pts = _small_points(E5077)
    for a, b, c in product(pts[:8], repeat=3):
        assert (a + b) + c == a + (b + c)


def test_reduction():
    assert ec_reduce_mod_p(P37, 5) == (0, 0)
    with pytest.raises(Refusal):
        ec_reduce_mod_p(P37, 37)
    # 8P lies in the kernel of reduction mod 5: p divides the denominators
    Q = 8 * P37
    assert Q.x.denominator % 5 == 0 and ec_reduce_mod_p(Q, 5) is None


def test_reduction_is_homomorphism():
    pts = _small_points(E5077, 6)
    curve = E5077.curve
    good = [p for p in primes_between(3, 200) if curve.is_good_prime(p)][:20]
    for p in good:
        for a, b in product(pts, repeat=2):
            lhs = ec_reduce_mod_p(a + b, p)
            rhs = fp_add(curve, ec_reduce_mod_p(a, p), ec_reduce_mod_p(b, p), p)
            assert lhs == rhs


def _count_oracle(curve, p):
    a1, a2, a3, a4, a6 = curve.coeffs
    return 1 + sum(
        1 for x, y in product(range(p), repeat=2)
        if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p == 0
    )


def test_point_counts():
    assert ec_count_points(E37, 5) == 8
    for p in primes_between(2, 60):
        if E5077.curve.is_good_prime(p):
            n = ec_count_points(E5077.curve, p)
            assert n == _count_oracle(E5077.curve, p)
            assert (n - p - 1) ** 2 <= 4 * p
    with pytest.raises(Refusal):
        ec_count_points(TORS, 2)  # discriminant -432 is even
    with pytest.raises(ValueError):
        ec_count_points(E37, 100003)


# --- formal logarithm ----------------------------------------------------------

def _sympy_formal_log(curve, T):
    """Independent expansion: w from its fixed-point equation, then
    omega = dx / (2y + a1 x + a3) with x = t/w, y = -1/w."""
    a1, a2, a3, a4, a6 = curve.coeffs
    t = sympy.Symbol("t")
    n = T + 4
    w = sympy.Integer(0)
    for _ in range(n + 2):
        w = sympy.expand(t**3 + a1 * t * w + a2 * t**2 * w + a3 * w**2 + a4 * t * w**2 + a6 * w**3)
        w = sum(w.coeff(t, k) * t**k for k in range(n + 3))
    x = sympy.series(t / w, t, 0, n).removeO()
    y = sympy.series(-1 / w, t, 0, n).removeO()
    omega = sympy.series(sympy.diff(x, t) / (2 * y + a1 * x + a3), t, 0, T).removeO()
    return [Fraction(str(sympy.Rational(omega.coeff(t, k - 1)) / k)) for k in range(1, T + 1)]


@pytest.mark.parametrize("coeffs", [(0, 0, 1, -1, 0), (1, 2, 3, 4, 5), (0, 0, 0, -2, 3), (1, -1, 1, -3, 2)])
def test_formal_log_matches_sympy(coeffs):
    curve = EllipticCurve(*coeffs)
    series = formal_log(curve, 7)
    assert list(series.coefficients) == _sympy_formal_log(curve, 7)
    assert series.coefficients[0] == 1
    assert series.check_identity()


def test_short_weierstrass_is_odd():
    c = formal_log(EllipticCurve(0, 0, 0, -2, 3), 9).coefficients
    assert all(c[k] == 0 for k in range(1, 9, 2))  # c_2, c_4, ...


def test_formal_log_order():
    with pytest.raises(ValueError):
        formal_log(E37, 1)


# --- p-adic logs and ranks ----------------------------------------------------------

def test_elliptic_log_examples():
    assert elliptic_padic_log(E37.infinity, 5, 12).is_zero()
    lp = elliptic_padic_log(P37, 5, 12)
    assert not lp.is_zero() and lp.valuation() >= 1
    assert elliptic_padic_log(2 * P37, 5, 12).agrees(lp * 2)


@given(st.integers(-6, 6), st.integers(-6, 6), st.sampled_from([3, 5, 7, 11, 13]))
def test_elliptic_log_homomorphism(a, b, p):
    P, Q = E5077.points[0], E5077.points[1]
    lhs = elliptic_padic_log(a * P + b * Q, p, 16)
    rhs = elliptic_padic_log(P, p, 16) * a + elliptic_padic_log(Q, p, 16) * b
    assert lhs.agrees(rhs)


def test_log_of_torsion_is_zero():
    T = TORS.point(2, 3)
    assert elliptic_padic_log(T, 5, 10).is_zero()
    assert elliptic_padic_log(TORS.point(0, 1), 7, 10).is_zero()


def spec(curve, *gens):
    return GroupSpec(EllipticProduct(curve, len(gens[0])), tuple(gens))


def test_dp_examples():
    r = ec_dp_rank(spec(E37, (P37,)), 5)
    assert r.d_p == 1 and r.certified and r.r_v == 0 and r.ell_p == 1
    r = ec_dp_rank(spec(E37, (P37,), (2 * P37,)), 5)
    assert r.d_p == 1 and r.certified


@pytest.mark.parametrize("u", [[[1, 0], [0, 1]], [[1, 1], [0, 1]], [[2, 1], [1, 1]], [[0, 1], [1, 0]]])
def test_ec_dp_invariant_under_recombination(u):
    P, Q = E5077.points[0], E5077.points[1]
    base = ec_dp_rank(spec(E5077.curve, (P,), (Q,)), 7)
    gens = [(u[i][0] * P + u[i][1] * Q,) for i in range(2)]
    mixed = ec_dp_rank(spec(E5077.curve, *gens), 7)
    assert base.d_p == mixed.d_p == 1
    assert base.certified and mixed.certified


def test_dependence_search_examples():
    assert dependence_search([P37, 2 * P37], 3) == (2, -1)
    P, Q = E5077.points[0], E5077.points[1]
    assert dependence_search([P, Q], 10) is None
    assert dependence_search([TORS.point(2, 3)], 6) == (6,)


def test_mazur_check_rank3():
    P, Q, R = E5077.points
    rep = mazur_counterexample_check(E5077.curve, P, Q, R, 5, 32, bound=20)
    assert rep.skew_symmetric and rep.determinant_exact_zero and rep.determinant_padic_zero
    assert rep.dp.d_p == 2 and rep.dp.certified
    assert rep.relation is None and rep.reproduces
    assert rep.to_json()["reproduces"] is True
