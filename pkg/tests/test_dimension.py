from __future__ import annotations

import math
from fractions import Fraction

import pytest

from levelsetlab import construction as cons
from levelsetlab import dimension as dim
from levelsetlab import rangeset as rs
from levelsetlab.errors import DomainError, ValidationError
from levelsetlab.intervals import Interval, IntervalSet


def test_box_count_conventions():
    unit = IntervalSet([Interval(0, 1)])
    assert dim.box_count(unit, Fraction(1, 10)) == 10
    assert dim.box_count(unit, Fraction(1, 10), anchor=Fraction(1, 2)) == 11
    assert dim.box_count(IntervalSet([Interval(Fraction(1, 3), Fraction(1, 3))]), Fraction(1, 10)) == 1
    with pytest.raises(DomainError):
        dim.box_count(IntervalSet(), Fraction(1, 2))


def test_fit_recovers_known_slope():
    pts = tuple((Fraction(1, 3**n), 2**n) for n in range(1, 7))
    fit = dim.fit_dimension(dim.CountCurve(pts))
    assert abs(fit.slope - math.log(2) / math.log(3)) < 1e-12
    assert fit.window == (2, 6)


def test_constant_counts_give_zero_slope():
    pts = tuple((Fraction(1, 2**n), 1) for n in range(1, 6))
    assert dim.fit_dimension(dim.CountCurve(pts)).slope == 0


def test_count_curve_requires_decreasing_scales():
    with pytest.raises(ValidationError):
        dim.CountCurve(((Fraction(1, 4), 1), (Fraction(1, 2), 2)))


@pytest.mark.parametrize("b,beta", [(5, Fraction(1, 2)), (5, Fraction(9, 10))])
def test_grid_shift_robustness(b, beta):
    params = cons.validate_params(1, b, beta)
    a = dim.estimate_s_dimension(params, 4)
    h = dim.estimate_s_dimension(params, 4, anchor=Fraction(1, 2))
    assert abs(a.slope - h.slope) <= 0.02
    for (_, ca), (_, ch) in zip(a.curve.points, h.curve.points):
        assert ca / 2 <= ch <= 2 * ca


def test_dyadic_ladder_close_to_closed_form():
    params = cons.validate_params(1, 5, Fraction(1, 2))
    fit = dim.estimate_s_dimension(params, 5, "dyadic")
    assert abs(fit.slope - float(rs.closed_form_dimension(5, Fraction(1, 2)))) < 0.1


def test_ladders():
    params = cons.validate_params(1, 3, Fraction(1, 2))
    assert dim.natural_ladder(params, 3) == [Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)]
    d = dim.dyadic_ladder(params, 3)
    assert d[0] <= Fraction(1, 10) and d[-1] >= Fraction(1, 1000)
