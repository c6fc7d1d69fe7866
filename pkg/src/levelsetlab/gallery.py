"""Three small reference functions and their level-set structure.

* ``parabola``: ``x - x**2``; every level set is finite.
* ``constant``: ``1/2``; one level set, the whole interval.
* ``staircase``: copies of a three-piece base function ``f1`` on ``[0, 1/2]``
  (slope 3/2, a plateau at 1/4 on ``[1/6, 1/3]``, slope 3/2 again), the
  ``i``-th copy scaled by ``2**(1-i)`` and placed at ``(1 - 2**(1-i), 1 - 2**(1-i))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, ValidationError
from .intervals import Interval, IntervalSet

NAMES = ("parabola", "constant", "staircase")
HALF = Fraction(1, 2)
PLATEAU = (Fraction(1, 6), Fraction(1, 3))


def _base_piece(x: Fraction) -> Fraction:
    if x <= PLATEAU[0]:
        return Fraction(3, 2) * x
    if x <= PLATEAU[1]:
        return Fraction(1, 4)
    return Fraction(3, 2) * x - Fraction(1, 4)


def staircase_block(x: Fraction) -> int:
    """Smallest ``i >= 1`` with ``x <= 1 - 2**-i``; x = 1 has no block."""
    i = 1
    while x > 1 - Fraction(1, 2**i):
        i += 1
    return i


def block_corner(i: int) -> Fraction:
    return 1 - Fraction(2, 2**i)


def staircase(x) -> Fraction:
    x = Fraction(x)
    if x == 1:
        return Fraction(1)
    i = staircase_block(x)
    corner, size = block_corner(i), Fraction(2, 2**i)
    return corner + size * _base_piece((x - corner) / size)


def gallery_eval(name: str, x) -> Fraction:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"x={x} outside [0, 1]")
    if name == "parabola":
        return x - x * x
    if name == "constant":
        return HALF
    if name == "staircase":
        return staircase(x)
    raise ValidationError(f"unknown gallery function {name!r}; choose from {', '.join(NAMES)}")


def plateau_value(i: int) -> Fraction:
    """``(2**i - 3/2) / 2**i``, the height of the ``i``-th plateau."""
    return (2**i - Fraction(3, 2)) / 2**i


def plateau_interval(i: int) -> Interval:
    corner, size = block_corner(i), Fraction(2, 2**i)
    return Interval(corner + size * PLATEAU[0], corner + size * PLATEAU[1])


def staircase_preimage(y) -> IntervalSet:
    """Exact preimage of ``y`` under the staircase."""
    y = Fraction(y)
    if not 0 <= y <= 1:
        return IntervalSet()
    if y == 1:
        return IntervalSet([Interval(1, 1)])
    # blocks map onto [corner, corner + size/2] and tile [0, 1)
    i = staircase_block(y)
    corner, size = block_corner(i), Fraction(2, 2**i)
    v = (y - corner) / size  # target height for f1, in [0, 1/2]
    if v > HALF:
        return IntervalSet()
    if v == Fraction(1, 4):
        return IntervalSet([plateau_interval(i)])
    u = v * Fraction(2, 3) if v < Fraction(1, 4) else (v + Fraction(1, 4)) * Fraction(2, 3)
    x = corner + size * u
    return IntervalSet([Interval(x, x)])


@dataclass(frozen=True)
class LevelSummary:
    value: Fraction
    interval_count: int
    total_length: Fraction
    contains_interval: bool


@dataclass(frozen=True)
class LevelSetReport:
    """Level values ``y`` whose preimage has dimension >= alpha.

    ``range_interval`` is set when the qualifying values form a whole
    interval (alpha = 0), ``values`` otherwise.  ``accumulation`` records a
    limit point of ``values`` that is listed without asserting membership.
    """

    function: str
    alpha: Fraction
    values: tuple[LevelSummary, ...] = ()
    range_interval: Interval | None = None
    accumulation: Fraction | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def empty(self) -> bool:
        return not self.values and self.range_interval is None


def gallery_levelset(name: str, alpha, count: int = 5) -> LevelSetReport:
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValidationError(f"alpha must lie in [0, 1], got {alpha}")
    if name == "parabola":
        if alpha == 0:
            return LevelSetReport(name, alpha, range_interval=Interval(0, Fraction(1, 4)))
        return LevelSetReport(name, alpha, notes=("every level set has at most two points",))
    if name == "constant":
        return LevelSetReport(name, alpha, values=(LevelSummary(HALF, 1, Fraction(1), True),))
    if name == "staircase":
        if alpha == 0:
            return LevelSetReport(name, alpha, range_interval=Interval(0, 1))
        values = []
        for i in range(1, count + 1):
            pre = staircase_preimage(plateau_value(i))
            values.append(LevelSummary(plateau_value(i), len(pre), pre.total_length, True))
        return LevelSetReport(
            name,
            alpha,
            values=tuple(values),
            accumulation=Fraction(1),
            notes=("plateau values accumulate at 1; f^-1(1) = {1} is a single point",),
        )
    raise ValidationError(f"unknown gallery function {name!r}; choose from {', '.join(NAMES)}")
