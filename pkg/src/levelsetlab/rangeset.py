"""The Cantor set S of box heights and the preimages of its points.

With ``rho = beta/m``, level-``n`` boxes occupy the range intervals
``[sum_i d_i rho**i, ... + rho**n]`` with digits ``d_i in {0, ..., b-2}``, so

    S = { sum_{i>=1} d_i rho**i }

and the ``n``-th cover has ``(b-1)**n`` intervals of length ``rho**n``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .construction import Cell, CellKind, Params, box_cells
from .curvekit import poly_eval, unit_coefficients
from .errors import CapacityError, DomainError, ValidationError
from .intervals import Interval, IntervalSet

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class RangeAddress:
    """Digits ``d_1, d_2, ...``; after the finite prefix the ``cycle`` repeats forever.

    An empty cycle means an all-zero tail, i.e. a finite address.
    """

    digits: tuple[int, ...] = ()
    cycle: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        object.__setattr__(self, "cycle", tuple(int(d) for d in self.cycle))
        if any(d < 0 for d in self.digits + self.cycle):
            raise ValidationError("address digits must be non-negative")

    @property
    def finite(self) -> bool:
        return not any(self.cycle)

    def digit(self, i: int) -> int:
        """1-based digit lookup."""
        if i <= len(self.digits):
            return self.digits[i - 1]
        if not self.cycle:
            return 0
        return self.cycle[(i - len(self.digits) - 1) % len(self.cycle)]

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self.digit(i) for i in range(1, n + 1))

    def zero_from(self, i: int) -> bool:
        """Whether every digit at position >= i is 0."""
        return self.finite and all(d == 0 for d in self.digits[i - 1 :])

    def check(self, params: Params) -> None:
        if any(d > params.b - 2 for d in self.digits + self.cycle):
            raise ValidationError(f"digits must lie in 0..{params.b - 2}")

    def value(self, params: Params) -> Fraction:
        rho = params.ratio
        v = sum((d * rho ** (i + 1) for i, d in enumerate(self.digits)), Fraction(0))
        if self.cycle:
            p = len(self.cycle)
            block = sum((d * rho ** (i + 1) for i, d in enumerate(self.cycle)), Fraction(0))
            v += rho ** len(self.digits) * block / (1 - rho**p)
        return v


@dataclass(frozen=True)
class NotMember:
    level: int


def tail_bound(params: Params, level: int) -> Fraction:
    """Largest value the digits after ``level`` can add: ``(b-2) rho**level * beta/(m-beta)``."""
    return params.range_max * params.ratio**level


def s_cover(params: Params, n: int, budget: int = DEFAULT_BUDGET) -> IntervalSet:
    """The ``(b-1)**n`` level-``n`` intervals covering S."""
    if n < 1:
        raise ValidationError("cover level must be >= 1")
    size = (params.b - 1) ** n
    if size > budget:
        raise CapacityError(f"cover of {size} intervals exceeds budget {budget}")
    rho = params.ratio
    width = rho**n
    lefts = [Fraction(0)]
    for i in range(1, n + 1):
        step = rho**i
        lefts = [lo + d * step for lo in lefts for d in range(params.b - 1)]
    return IntervalSet(Interval(lo, lo + width) for lo in lefts)


def closed_form_dimension(b: int, beta, form: str = "proof") -> mpmath.mpf:
    """``log(b-1) / (log m - log beta)`` with ``m = 2b-1``.

    ``form="statement"`` uses ``log(2b+1)`` in the denominator instead.
    """
    beta = Fraction(beta)
    with mpmath.workdps(50):
        base = 2 * b - 1 if form == "proof" else 2 * b + 1
        if form not in ("proof", "statement"):
            raise ValidationError(f"unknown dimension form {form!r}")
        beta_mp = mpmath.mpf(beta.numerator) / beta.denominator
        return mpmath.log(b - 1) / (mpmath.log(base) - mpmath.log(beta_mp))


def value_to_address(params: Params, y, n: int) -> RangeAddress | NotMember:
    """First ``n`` digits of ``y`` in S, or the first cover level that misses ``y``.

    Digit ``i`` is ``floor(residual / rho**i)`` clamped to ``b-2``; ``y`` survives
    level ``i`` when the residual afterwards lies in ``[0, rho**i]``.  Within
    S the digit is unique because each level's tail never reaches the next
    interval, so a value sitting on the shared endpoint of two cover intervals
    takes the upper one (the lower one dies one level later).
    """
    y = Fraction(y)
    if not 0 <= y <= 1:
        raise DomainError(f"y={y} outside [0, 1]")
    rho = params.ratio
    residual = y
    digits = []
    for i in range(1, n + 1):
        step = rho**i
        q = residual / step
        d = min(q.numerator // q.denominator, params.b - 2)
        residual -= d * step
        if not 0 <= residual <= step:
            return NotMember(i)
        digits.append(d)
    return RangeAddress(tuple(digits))


def in_s(params: Params, y, n: int) -> bool:
    """Membership of ``y`` in the level-``n`` cover, decided with exact arithmetic."""
    return isinstance(value_to_address(params, y, n), RangeAddress)


def flat_interval(params: Params, digits) -> Interval:
    """Domain interval where f equals ``value(digits)``: the flat half of the H cell
    one level below the diagonal-box chain ``digits``."""
    m = params.m
    digits = tuple(digits)
    if any(not 0 <= d <= params.b - 2 for d in digits):
        raise ValidationError(f"digits must lie in 0..{params.b - 2}")
    origin = sum((Fraction(2 * d, m ** (i + 1)) for i, d in enumerate(digits)), Fraction(0))
    level = len(digits) + 1
    h_index = m - 2
    return Interval(origin + Fraction(2 * h_index + 1, 2 * m**level), origin + Fraction(h_index + 1, m**level))


@dataclass(frozen=True)
class PreimageCover:
    target: Fraction
    depth: int
    boxes: IntervalSet
    flats: IntervalSet
    crossings: IntervalSet

    @property
    def intervals(self) -> IntervalSet:
        return self.boxes | self.flats | self.crossings

    @property
    def box_count(self) -> int:
        return len(self.boxes)


@dataclass(frozen=True)
class _Chain:
    origin: Fraction
    offset: Fraction


def _bracket(coeffs, s: Fraction, amplitude: Fraction, tolerance: Fraction) -> tuple[Fraction, Fraction]:
    """Bracket the root of ``P_k(u) = s`` until its image is narrower than ``tolerance``."""
    lo, hi = Fraction(0), Fraction(1)
    while amplitude * (poly_eval(coeffs, hi) - poly_eval(coeffs, lo)) > tolerance:
        mid = (lo + hi) / 2
        if poly_eval(coeffs, mid) < s:
            lo = mid
        else:
            hi = mid
    return lo, hi


def preimage_cover(
    params: Params,
    address: RangeAddress,
    depth: int,
    include_crossings: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> PreimageCover:
    """Domain intervals whose images lie within ``rho**depth`` of ``value(address)``.

    At each level a digit ``d`` keeps diagonal box ``d``, plus the final box when
    ``d == 0`` (both span heights ``[0, rho]``).  Where every remaining digit is
    0 the flat half of that level's H connector maps exactly onto the target.
    Crossings of strictly monotone connector pieces are bracketed to image
    width ``rho**depth``.
    """
    address.check(params)
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    m, rho = params.m, params.ratio
    y = address.value(params)
    coeffs = unit_coefficients(params.k)
    boxes_by_digit = {}
    for cell in box_cells(params):
        d = cell.j if cell.kind is CellKind.DIAGONAL_BOX else 0
        boxes_by_digit.setdefault(d, []).append(cell)

    chains = [_Chain(Fraction(0), Fraction(0))]
    flats, crossings = [], []
    tolerance = rho**depth
    for level in range(1, depth + 1):
        width = Fraction(1, m**level)
        scale = rho ** (level - 1)
        d = address.digit(level)
        flat_here = address.zero_from(level)
        nxt = []
        for chain in chains:
            if flat_here:
                h_lo = chain.origin + (m - 2) * width
                flats.append(Interval(h_lo + width / 2, h_lo + width))
            if include_crossings:
                crossings.extend(_crossings(params, chain, level, y, coeffs, tolerance))
            for cell in boxes_by_digit.get(d, []):
                nxt.append(_Chain(chain.origin + cell.index * width, chain.offset + scale * cell.y_offset))
        if len(nxt) > budget:
            raise CapacityError(f"preimage cover exceeds budget {budget}")
        chains = nxt
    width = Fraction(1, m**depth)
    boxes = [Interval(c.origin, c.origin + width) for c in chains]
    return PreimageCover(y, depth, IntervalSet(boxes), IntervalSet(flats), IntervalSet(crossings))


def _crossings(params: Params, chain: _Chain, level: int, y: Fraction, coeffs, tolerance: Fraction):
    m, rho = params.m, params.ratio
    scale = rho ** (level - 1)
    rel = (y - chain.offset) / scale  # target height in level-1 units
    width = Fraction(1, m**level)
    out = []
    for cell in params.cells:
        if cell.kind is CellKind.G_CURVE:
            lo_h, amp = cell.y_offset, rho
        elif cell.kind is CellKind.H_CURVE:
            lo_h, amp = Fraction(0), (params.b - 2) * rho
        else:
            continue
        if not lo_h < rel < lo_h + amp:
            continue
        s = (rel - lo_h) / amp
        u_lo, u_hi = _bracket(coeffs, s, scale * amp, tolerance)
        start = chain.origin + cell.index * width
        if cell.kind is CellKind.G_CURVE:
            out.append(Interval(start + u_lo * width, start + u_hi * width))
        else:
            # H(t) = amp * P(1 - 2t): u = 1 - 2t
            out.append(Interval(start + (1 - u_hi) / 2 * width, start + (1 - u_lo) / 2 * width))
    return out


def brute_force_box_chains(params: Params, y, depth: int) -> list[tuple[Cell, ...]]:
    """All depth-``depth`` box chains whose image ``[O, O + max f * rho**depth]`` holds ``y``."""
    y = Fraction(y)
    rho = params.ratio
    reach = params.range_max * rho**depth
    hits = []
    for chain in itertools.product(box_cells(params), repeat=depth):
        offset = sum((rho**i * c.y_offset for i, c in enumerate(chain)), Fraction(0))
        if offset <= y <= offset + reach:
            hits.append(chain)
    return hits
