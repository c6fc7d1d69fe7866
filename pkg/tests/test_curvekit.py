from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from levelsetlab import curvekit as ck
from levelsetlab.errors import CapacityError, DomainError, ValidationError

t = sympy.symbols("t")


def oracle_poly(k: int) -> sympy.Expr:
    # normalized incomplete beta integral of s^k (1-s)^k
    s = sympy.symbols("s")
    n = sympy.Rational(factorial(2 * k + 1), factorial(k) ** 2)
    return sympy.expand(n * sympy.integrate(s**k * (1 - s) ** k, (s, 0, t)))


@pytest.mark.parametrize("k", range(0, 7))
def test_unit_coefficients_match_beta_integral(k):
    want = sympy.Poly(oracle_poly(k), t).all_coeffs()[::-1]
    got = ck.unit_coefficients(k)
    want = [Fraction(int(c.p), int(c.q)) for c in want]
    want += [Fraction(0)] * (len(got) - len(want))
    assert list(got) == want


@pytest.mark.parametrize("k", range(0, 9))
def test_alternating_sum_normalizes(k):
    assert ck.normalization_constant(k) * ck.alternating_sum(k) == 1
    assert ck.poly_eval(ck.unit_coefficients(k), 1) == 1


def test_normalization_known_values():
    assert [ck.normalization_constant(k) for k in range(4)] == [1, 6, 30, 140]


def test_capacity():
    with pytest.raises(CapacityError):
        ck.normalization_constant(9)
    assert ck.normalization_constant(9, max_k=9) == Fraction(factorial(19), factorial(9) ** 2)


def test_poly_helpers():
    c = (Fraction(1), Fraction(2), Fraction(3))  # 1 + 2t + 3t^2
    assert ck.poly_eval(c, 2) == 17
    assert ck.poly_deriv(c) == (2, 6)
    assert all(v == 0 for v in ck.poly_deriv(c, 3))
    # p(1 - 2t) = 1 + 2(1-2t) + 3(1-2t)^2 = 6 - 16t + 12t^2
    assert ck.poly_compose_affine(c, -2, 1) == (6, -16, 12)


@pytest.mark.parametrize(
    "k,order,expected",
    [(1, 1, sympy.Rational(3, 2)), (2, 1, sympy.Rational(15, 8)), (2, 2, 10 * sympy.sqrt(3) / 3), (0, 1, sympy.Integer(1))],
)
def test_unit_supremum_known(k, order, expected):
    assert sympy.simplify(ck.unit_supremum(k, order) - expected) == 0


@pytest.mark.parametrize("k,order", [(1, 1), (1, 2), (2, 3), (3, 2), (3, 4)])
def test_unit_supremum_against_dense_grid(k, order):
    d = sympy.diff(oracle_poly(k), t, order)
    grid = max(abs(float(d.subs(t, sympy.Rational(i, 2000)))) for i in range(2001))
    sup = float(ck.unit_supremum(k, order))
    assert sup >= grid - 1e-12
    assert sup - grid < 1e-4 * max(1.0, sup)


def test_supremum_ratio_is_exact():
    a = ck.Supremum(Fraction(3), 2, 2)
    b = ck.Supremum(Fraction(9, 2), 2, 2)
    assert b / a == Fraction(3, 2)
    assert a < b
    assert a.upper_bound() >= sympy.Rational(3) * ck.unit_supremum(2, 2)
    assert not a.is_rational
    assert ck.Supremum(Fraction(2), 1, 1).as_fraction() == 3


def test_g_and_h_shapes():
    g = ck.g_curve(1, 9, Fraction(1, 2))
    h = ck.h_curve(1, 9, Fraction(1, 2))
    assert g.amplitude == Fraction(1, 18)
    assert h.amplitude == Fraction(3, 18)
    assert ck.g_eval(g, Fraction(1, 18)) == Fraction(1, 36)
    assert ck.h_eval(h, Fraction(1, 36)) == Fraction(3, 36)
    assert ck.h_eval(h, Fraction(1, 18)) == 0
    # level 2 scales by (1/m, beta/m)
    g2 = ck.g_curve(1, 9, Fraction(1, 2), level=2)
    assert ck.g_eval(g2, Fraction(1, 162)) == Fraction(1, 36) / 18


def test_spec_validation():
    with pytest.raises(ValidationError):
        ck.g_curve(1, 8, Fraction(1, 2))
    with pytest.raises(ValidationError):
        ck.g_curve(1, 9, Fraction(1))
    with pytest.raises(DomainError):
        ck.g_eval(ck.g_curve(1, 9, Fraction(1, 2)), Fraction(1, 8))


def test_sup_abs_derivative_h_dominates():
    g = ck.g_curve(2, 9, Fraction(1, 2), 3)
    h = ck.h_curve(2, 9, Fraction(1, 2), 3)
    for j in (1, 2):
        assert ck.sup_abs_derivative(h, j) / ck.sup_abs_derivative(g, j) == 2**j * 3


@settings(max_examples=60, deadline=None)
@given(k=st.integers(0, 4), num=st.integers(0, 1000))
def test_g_is_monotone_and_bounded(k, num):
    g = ck.g_curve(k, 5, Fraction(1, 3))
    x = Fraction(num, 1000) * g.width
    v = ck.g_eval(g, x)
    assert 0 <= v <= g.amplitude
    if num < 1000:
        assert ck.g_eval(g, x + g.width / 1000) >= v
