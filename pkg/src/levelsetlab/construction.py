"""The iterated box-and-connector construction of a flat C^k function on [0, 1].

Level 1 splits [0, 1] into ``m = 2b - 1`` cells of width ``1/m``::

    box 0 | G 0 | box 1 | G 1 | ... | box b-2 | H | final box

Diagonal box ``j`` sits at height ``j * beta/m`` and has height ``beta/m``; the
G connectors climb ``beta/m`` between consecutive diagonal boxes, H falls from
``(b-2) * beta/m`` back to 0, and the final box sits at height 0.  Every box
holds a copy of the whole picture scaled by ``(1/m, beta/m)``.

Points are resolved by descending through boxes (:func:`locate`).  Points that
reach a connector are evaluated exactly; points still inside a box after
``max_depth`` levels get the box midpoint and a half-height error bound.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import curvekit
from .curvekit import CurveSpec, Supremum
from .errors import CapacityError, DomainError, UncertifiedError, ValidationError

DEFAULT_DEPTH = 40
DEFAULT_TABLE_BUDGET = 10**6


@dataclass(frozen=True)
class Params:
    k: int
    b: int
    beta: Fraction
    max_k: int = curvekit.MAX_K

    @property
    def m(self) -> int:
        return 2 * self.b - 1

    @property
    def ratio(self) -> Fraction:
        """Vertical shrink per level, ``beta/m``."""
        return self.beta / self.m

    @property
    def range_max(self) -> Fraction:
        """``max f = (b-2) beta / (m - beta)``."""
        return (self.b - 2) * self.beta / (self.m - self.beta)

    def derivative_ratio(self, order: int) -> Fraction:
        """Exact per-level growth ``beta * m**(order-1)`` of derivative suprema."""
        return self.beta * Fraction(self.m) ** (order - 1)

    @cached_property
    def cells(self) -> tuple["Cell", ...]:
        return _build_cells(self)


def validate_params(k: int, b: int, beta, max_k: int = curvekit.MAX_K) -> Params:
    try:
        beta = Fraction(beta)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"beta must be a rational p/q, got {beta!r}") from exc
    if not isinstance(k, int) or k < 0:
        raise ValidationError(f"k must be a non-negative integer, got {k!r}")
    if k > max_k:
        raise CapacityError(f"k={k} exceeds the configured maximum {max_k}")
    if not isinstance(b, int) or b < 3:
        raise ValidationError(f"b must be an integer >= 3 (the H connector drops (b-2)*beta/m), got {b!r}")
    if not 0 < beta < 1:
        raise ValidationError(f"beta must lie strictly between 0 and 1, got {beta}")
    return Params(k, b, beta, max_k)


class CellKind(str, enum.Enum):
    DIAGONAL_BOX = "DiagonalBox"
    G_CURVE = "GCurve"
    H_CURVE = "HCurve"
    FINAL_BOX = "FinalBox"

    @property
    def is_box(self) -> bool:
        return self in (CellKind.DIAGONAL_BOX, CellKind.FINAL_BOX)


@dataclass(frozen=True)
class Cell:
    """A level-1 cell in unit coordinates; deeper cells are affine copies."""

    index: int
    kind: CellKind
    j: int | None
    x_lo: Fraction
    x_hi: Fraction
    y_offset: Fraction

    @property
    def label(self) -> str:
        return f"{self.kind.value}({self.j})" if self.j is not None else self.kind.value


def _build_cells(params: Params) -> tuple[Cell, ...]:
    m, b, r = params.m, params.b, params.ratio
    out = []
    for c in range(m):
        lo, hi = Fraction(c, m), Fraction(c + 1, m)
        if c == m - 1:
            out.append(Cell(c, CellKind.FINAL_BOX, None, lo, hi, Fraction(0)))
        elif c == m - 2:
            out.append(Cell(c, CellKind.H_CURVE, None, lo, hi, Fraction(0)))
        elif c % 2 == 0:
            out.append(Cell(c, CellKind.DIAGONAL_BOX, c // 2, lo, hi, (c // 2) * r))
        else:
            out.append(Cell(c, CellKind.G_CURVE, c // 2, lo, hi, (c // 2) * r))
    return tuple(out)


def box_cells(params: Params) -> tuple[Cell, ...]:
    return tuple(c for c in params.cells if c.kind.is_box)


def curve_spec(params: Params, cell: Cell, level: int) -> CurveSpec:
    if cell.kind is CellKind.G_CURVE:
        return curvekit.g_curve(params.k, params.m, params.beta, level)
    if cell.kind is CellKind.H_CURVE:
        return curvekit.h_curve(params.k, params.m, params.beta, level)
    raise ValidationError(f"{cell.label} is a box, not a connector")


# -- point location -----------------------------------------------------------


@dataclass(frozen=True)
class CurveTerminal:
    cell: Cell
    level: int
    t: Fraction  # position inside the cell, normalized to [0, 1]


@dataclass(frozen=True)
class BoxCapped:
    level: int


@dataclass(frozen=True)
class PiecePath:
    digits: tuple[Cell, ...]
    terminal: CurveTerminal | BoxCapped
    accumulated_offset: Fraction
    x_origin: Fraction
    m: int
    ratio: Fraction

    @property
    def depth(self) -> int:
        return len(self.digits)

    @property
    def accumulated_scale(self) -> tuple[Fraction, Fraction]:
        n = self.depth
        return Fraction(1, self.m**n), self.ratio**n

    @property
    def local_x(self) -> Fraction | None:
        """Offset of x inside its connector cell, in absolute x units."""
        if isinstance(self.terminal, CurveTerminal):
            return self.terminal.t / self.m**self.terminal.level
        return None


def cell_index(m: int, xs: Fraction) -> int:
    """Level cell of a scaled coordinate; shared boundaries go to the left cell."""
    scaled = m * xs
    c = scaled.numerator // scaled.denominator
    if scaled.denominator == 1 and c > 0:
        c -= 1
    return min(c, m - 1)


def locate(params: Params, x, max_depth: int = DEFAULT_DEPTH) -> PiecePath:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"x={x} outside [0, 1]")
    if max_depth < 1:
        raise ValidationError("max_depth must be >= 1")
    m, cells = params.m, params.cells
    offset, origin, xs = Fraction(0), Fraction(0), x
    digits: list[Cell] = []
    for level in range(1, max_depth + 1):
        cell = cells[cell_index(m, xs)]
        t = m * xs - cell.index
        if not cell.kind.is_box:
            return PiecePath(tuple(digits), CurveTerminal(cell, level, t), offset, origin, m, params.ratio)
        offset += params.ratio ** (level - 1) * cell.y_offset
        origin += Fraction(cell.index, m**level)
        digits.append(cell)
        xs = t
    return PiecePath(tuple(digits), BoxCapped(max_depth), offset, origin, m, params.ratio)


# -- evaluation ---------------------------------------------------------------


class Status(str, enum.Enum):
    EXACT = "Exact"
    DEPTH_CAPPED = "DepthCapped"


@dataclass(frozen=True)
class EvalResult:
    value: Fraction
    error_bound: Fraction
    status: Status

    @property
    def lo(self) -> Fraction:
        return self.value - self.error_bound

    @property
    def hi(self) -> Fraction:
        return self.value + self.error_bound

    def contains(self, y) -> bool:
        return self.lo <= y <= self.hi


def _curve_piece_value(params: Params, term: CurveTerminal, order: int) -> Fraction:
    """Connector contribution at its own level, including the cell's height offset."""
    spec = curve_spec(params, term.cell, term.level)
    local = term.t / params.m**term.level
    value = curvekit.curve_eval(spec, local, order)
    if order == 0:
        value += params.ratio ** (term.level - 1) * term.cell.y_offset
    return value


def evaluate(params: Params, x, max_depth: int = DEFAULT_DEPTH) -> EvalResult:
    path = locate(params, x, max_depth)
    if isinstance(path.terminal, CurveTerminal):
        return EvalResult(path.accumulated_offset + _curve_piece_value(params, path.terminal, 0), Fraction(0), Status.EXACT)
    half = params.ratio**path.terminal.level / 2
    return EvalResult(path.accumulated_offset + half, half, Status.DEPTH_CAPPED)


def level_supremum(params: Params, order: int, level: int) -> Supremum:
    """Exact ``sup |f^(order)|`` over all connector pieces born at ``level``.

    The H connector dominates: its supremum is ``2**order * (b-2)`` times the G one.
    """
    g = curvekit.sup_abs_derivative(curvekit.g_curve(params.k, params.m, params.beta, level), order)
    h = curvekit.sup_abs_derivative(curvekit.h_curve(params.k, params.m, params.beta, level), order)
    return max(g, h)


def derivative(params: Params, x, order: int, max_depth: int = DEFAULT_DEPTH) -> EvalResult:
    """Exact ``f^(order)(x)`` on connectors; a certified bound inside capped boxes.

    The bound for a box capped at depth ``n`` is the supremum over every deeper
    level, which equals the level ``n+1`` supremum when ``beta * m**(order-1) <= 1``.
    Otherwise the deeper suprema grow without bound and :class:`UncertifiedError`
    is raised.
    """
    if not 1 <= order <= params.k:
        raise ValidationError(f"derivative order must lie in [1, k={params.k}], got {order}")
    path = locate(params, x, max_depth)
    if isinstance(path.terminal, CurveTerminal):
        term = path.terminal
        return EvalResult(_curve_piece_value(params, term, order), Fraction(0), Status.EXACT)
    if params.derivative_ratio(order) > 1:
        raise UncertifiedError(
            f"order {order} suprema grow by beta*m^(j-1) = {params.derivative_ratio(order)} per level; "
            "no finite bound inside a capped box"
        )
    bound = level_supremum(params, order, path.terminal.level + 1).upper_bound()
    return EvalResult(Fraction(0), bound, Status.DEPTH_CAPPED)


# -- junctions ----------------------------------------------------------------


@dataclass(frozen=True)
class JunctionRow:
    x: Fraction
    level: int
    left: str
    right: str
    left_value: Fraction
    right_value: Fraction
    # one-sided limits of orders 1..k; None where the limit does not exist
    left_derivatives: tuple[Fraction | None, ...] = field(default=())
    right_derivatives: tuple[Fraction | None, ...] = field(default=())

    @property
    def continuous(self) -> bool:
        return self.left_value == self.right_value

    @property
    def flat(self) -> bool:
        return all(d == 0 for d in self.left_derivatives + self.right_derivatives)


def _side_limits(params: Params, cell: Cell, level: int, at_start: bool) -> tuple[Fraction, tuple[Fraction | None, ...]]:
    """Value (in level-1 units above the chain offset) and derivative limits at one cell end."""
    orders = range(1, params.k + 1)
    if cell.kind.is_box:
        # inside a box the pieces approaching the edge have suprema shrinking by
        # beta*m^(j-1) per level, so the limit is 0 exactly when that ratio < 1
        derivs = tuple(Fraction(0) if params.derivative_ratio(j) < 1 else None for j in orders)
        return cell.y_offset, derivs
    spec = curve_spec(params, cell, level)
    local = Fraction(0) if at_start else spec.width
    value = cell.y_offset + curvekit.curve_eval(spec, local, 0) / params.ratio ** (level - 1)
    derivs = tuple(curvekit.curve_eval(spec, local, j) for j in orders)
    return value, derivs


def _box_chains(params: Params, depth: int):
    return itertools.product(box_cells(params), repeat=depth)


def junction_table(params: Params, depth: int, budget: int = DEFAULT_TABLE_BUDGET) -> list[JunctionRow]:
    """Every cell junction created at levels ``1..depth`` with exact one-sided limits."""
    m, b = params.m, params.b
    rows_needed = sum(b ** (level - 1) * (m - 1) for level in range(1, depth + 1))
    if rows_needed > budget:
        raise CapacityError(f"junction table needs {rows_needed} rows, budget is {budget}")
    cells = params.cells
    rows = []
    for level in range(1, depth + 1):
        scale = params.ratio ** (level - 1)
        for chain in _box_chains(params, level - 1):
            origin = sum((Fraction(c.index, m ** (i + 1)) for i, c in enumerate(chain)), Fraction(0))
            offset = sum((params.ratio**i * c.y_offset for i, c in enumerate(chain)), Fraction(0))
            for c in range(1, m):
                left, right = cells[c - 1], cells[c]
                lv, ld = _side_limits(params, left, level, at_start=False)
                rv, rd = _side_limits(params, right, level, at_start=True)
                rows.append(
                    JunctionRow(
                        x=origin + Fraction(c, m**level),
                        level=level,
                        left=left.label,
                        right=right.label,
                        left_value=offset + scale * lv,
                        right_value=offset + scale * rv,
                        left_derivatives=ld,
                        right_derivatives=rd,
                    )
                )
    rows.sort(key=lambda r: r.x)
    return rows


@dataclass(frozen=True)
class BoxEdge:
    """A point where a box meets a neighbour (or the domain boundary)."""

    x: Fraction
    level: int  # 0 for the domain ends, else the level whose junction this is
    value: Fraction
    box_on_right: bool
    box_on_left: bool


def box_endpoint(params: Params, x, max_depth: int = DEFAULT_DEPTH) -> BoxEdge | None:
    """Classify ``x`` as a box endpoint, with its exact value, or return None.

    ``f`` equals the enclosing chain's offset at every box edge because the
    scaled copy inside a box starts and ends at height 0.
    """
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"x={x} outside [0, 1]")
    if x in (0, 1):
        return BoxEdge(x, 0, Fraction(0), x == 0, x == 1)
    m, cells = params.m, params.cells
    offset, xs = Fraction(0), x
    for level in range(1, max_depth + 1):
        scaled = m * xs
        if scaled.denominator == 1:
            c = scaled.numerator
            left, right = cells[c - 1], cells[c]
            # every junction touches a box; its height there is the box offset
            box = left if left.kind.is_box else right
            return BoxEdge(x, level, offset + params.ratio ** (level - 1) * box.y_offset, right.kind.is_box, left.kind.is_box)
        cell = cells[scaled.numerator // scaled.denominator]
        if not cell.kind.is_box:
            return None
        offset += params.ratio ** (level - 1) * cell.y_offset
        xs = scaled - cell.index
    return None
