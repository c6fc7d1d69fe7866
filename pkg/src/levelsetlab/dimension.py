"""Box-counting dimension estimates for interval covers.

Counts are exact (rational grid arithmetic); only the regression uses floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .construction import Params
from .errors import DomainError, ValidationError
from .intervals import IntervalSet
from .rangeset import DEFAULT_BUDGET, s_cover


@dataclass(frozen=True)
class CountCurve:
    points: tuple[tuple[Fraction, int], ...]

    def __post_init__(self):
        scales = [s for s, _ in self.points]
        if any(a <= b for a, b in zip(scales, scales[1:])):
            raise ValidationError("scales must be strictly decreasing")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def scales(self) -> list[Fraction]:
        return [s for s, _ in self.points]

    @property
    def counts(self) -> list[int]:
        return [c for _, c in self.points]


@dataclass(frozen=True)
class DimFit:
    slope: float
    intercept: float
    residual: float
    window: tuple[int, int]  # half-open index range into the curve
    curve: CountCurve = field(repr=False)


def _log_inverse(scale: Fraction) -> float:
    # separate logs keep tiny scales like (1/9000)**5 accurate
    return math.log(scale.denominator) - math.log(scale.numerator)


def box_count(cover: IntervalSet, scale, anchor=0) -> int:
    """Number of grid cells ``[a + i*eps, a + (i+1)*eps)`` meeting the cover.

    A non-degenerate interval counts the cells meeting its interior, so
    intervals that end exactly on a grid line do not leak into the next cell;
    a point counts the single cell holding it.  ``anchor`` is the grid offset
    ``a`` as a fraction of ``eps``.
    """
    eps = Fraction(scale)
    if eps <= 0:
        raise ValidationError("scale must be positive")
    if not len(cover):
        raise DomainError("cannot box-count an empty set")
    a = Fraction(anchor) * eps
    spans = []
    for iv in cover:
        lo = (iv.lo - a) / eps
        first = lo.numerator // lo.denominator
        if iv.degenerate:
            spans.append((first, first))
            continue
        hi = (iv.hi - a) / eps
        last = -((-hi.numerator) // hi.denominator) - 1  # ceil(hi) - 1
        spans.append((first, last))
    spans.sort()
    total, cur_lo, cur_hi = 0, None, None
    for lo, hi in spans:
        if cur_hi is None or lo > cur_hi:
            if cur_hi is not None:
                total += cur_hi - cur_lo + 1
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    total += cur_hi - cur_lo + 1
    return total


def count_curve(cover: IntervalSet, scales: Sequence, anchor=0) -> CountCurve:
    scales = sorted((Fraction(s) for s in scales), reverse=True)
    return CountCurve(tuple((s, box_count(cover, s, anchor)) for s in scales))


def default_window(n_points: int) -> tuple[int, int]:
    """Drop the two coarsest scales while at least three points remain."""
    drop = max(0, min(2, n_points - 3))
    return drop, n_points


def fit_dimension(curve: CountCurve, window: tuple[int, int] | None = None) -> DimFit:
    """Least-squares slope of ``log N`` against ``log(1/eps)`` over ``window``."""
    start, stop = window if window is not None else default_window(len(curve))
    pts = curve.points[start:stop]
    if len(pts) < 3:
        raise ValidationError(f"fit window needs >= 3 points, got {len(pts)}")
    x = np.array([_log_inverse(s) for s, _ in pts])
    y = np.array([math.log(c) for _, c in pts])
    if np.all(y == y[0]):
        return DimFit(0.0, float(y[0]), 0.0, (start, stop), curve)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.max(np.abs(y - (slope * x + intercept))))
    return DimFit(float(slope), float(intercept), residual, (start, stop), curve)


def natural_ladder(params: Params, max_depth: int) -> list[Fraction]:
    return [params.ratio**n for n in range(1, max_depth + 1)]


def dyadic_ladder(params: Params, max_depth: int) -> list[Fraction]:
    """Powers of 1/2 spanning the same range as the natural ladder."""
    coarse, fine = params.ratio, params.ratio**max_depth
    i = 0
    while Fraction(1, 2**i) > coarse:
        i += 1
    out = []
    while Fraction(1, 2**i) >= fine:
        out.append(Fraction(1, 2**i))
        i += 1
    return out


def estimate_s_dimension(
    params: Params,
    max_depth: int,
    ladder: str = "natural",
    anchor=0,
    window: tuple[int, int] | None = None,
    refine: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> DimFit:
    """Box-count slope of S over scales down to ``rho**max_depth``.

    Counting uses the cover ``refine`` levels finer than the finest scale;
    since ``(b-1) * rho < 1/2`` one extra level already keeps every counted
    cluster inside a single cell of a half-shifted grid.
    """
    cover = s_cover(params, max_depth + refine, budget)
    if ladder == "natural":
        scales = natural_ladder(params, max_depth)
    elif ladder == "dyadic":
        scales = dyadic_ladder(params, max_depth)
    else:
        raise ValidationError(f"unknown ladder {ladder!r}")
    return fit_dimension(count_curve(cover, scales, anchor), window)
