"""Numerical evidence about the smoothness of the construction.

Three probes:

* finite differences of the exact evaluator against the analytic derivative,
* exact per-level suprema of ``|f^(j)|`` and their level-to-level ratio
  ``beta * m**(j-1)``,
* difference quotients at box endpoints along points approaching from inside
  the box, paired with the bound the C^k argument uses.

Reports state measured facts.  For ``j >= 2`` the suprema shrink only when
``beta * m**(j-1) < 1``, which is stricter than ``beta < 1``; verdicts report
whichever happens.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import construction as cons
from .construction import CurveTerminal, Params
from .curvekit import Supremum
from .errors import ValidationError

DEFAULT_STEPS = tuple(Fraction(1, 2**s) for s in range(8, 21))
FD_TOLERANCE = 1e-6


@dataclass(frozen=True)
class FDReport:
    x: Fraction
    order: int
    analytic: Fraction | None
    fd_estimates: tuple[tuple[Fraction, Fraction], ...] = ()
    resolved: bool = True

    @property
    def errors(self) -> list[float]:
        return [abs(float(fd - self.analytic)) for _, fd in self.fd_estimates]

    @property
    def best_abs_error(self) -> float:
        return min(self.errors) if self.fd_estimates else float("nan")

    @property
    def best_rel_error(self) -> float:
        scale = abs(float(self.analytic)) if self.analytic else 1.0
        return self.best_abs_error / scale

    def passes(self, tolerance: float = FD_TOLERANCE) -> bool:
        return self.resolved and self.best_rel_error <= tolerance


def central_difference(params: Params, x: Fraction, order: int, h: Fraction, depth: int = cons.DEFAULT_DEPTH) -> Fraction:
    """Exact-arithmetic central difference of ``f`` of the given order."""
    total = Fraction(0)
    for i in range(order + 1):
        point = x + (Fraction(order, 2) - i) * h
        total += (-1) ** i * comb(order, i) * cons.evaluate(params, point, depth).value
    return total / h**order


def analytic_vs_fd(params: Params, x, order: int, steps=DEFAULT_STEPS, depth: int = cons.DEFAULT_DEPTH) -> FDReport:
    """Compare ``derivative(x, order)`` with central differences.

    ``steps`` are fractions of the width of the connector cell holding ``x``.
    Points that do not resolve to a connector come back with ``resolved=False``.
    """
    x = Fraction(x)
    path = cons.locate(params, x, depth)
    if not isinstance(path.terminal, CurveTerminal):
        return FDReport(x, order, None, resolved=False)
    analytic = cons.derivative(params, x, order, depth).value
    width = Fraction(1, params.m**path.terminal.level)
    estimates = []
    for s in steps:
        h = s * width
        if not (0 <= x - order * h / 2 and x + order * h / 2 <= 1):
            continue
        estimates.append((h, central_difference(params, x, order, h, depth)))
    return FDReport(x, order, analytic, tuple(estimates))


def one_sided_quotients(params: Params, x, steps=DEFAULT_STEPS, depth: int = cons.DEFAULT_DEPTH) -> tuple[list[Fraction], list[Fraction]]:
    """Left and right first-order difference quotients at a box endpoint ``x``."""
    x = Fraction(x)
    edge = cons.box_endpoint(params, x, depth)
    if edge is None:
        raise ValidationError(f"x={x} is not a box endpoint")
    width = Fraction(1, params.m ** max(edge.level, 1))
    left, right = [], []
    for s in steps:
        h = s * width
        if x - h >= 0:
            left.append((edge.value - cons.evaluate(params, x - h, depth).value) / h)
        if x + h <= 1:
            right.append((cons.evaluate(params, x + h, depth).value - edge.value) / h)
    return left, right


# -- suprema ---------------------------------------------------------------


@dataclass(frozen=True)
class SupScan:
    order: int
    levels: tuple[tuple[int, Supremum], ...]

    @property
    def ratios(self) -> list[Fraction]:
        sups = [s for _, s in self.levels]
        return [b / a for a, b in zip(sups, sups[1:])]


def level_sup(params: Params, order: int, level: int) -> Supremum:
    if not 1 <= order <= 2 * params.k + 1:
        raise ValidationError(f"order must lie in [1, {2 * params.k + 1}]")
    if level < 1:
        raise ValidationError("level must be >= 1")
    return cons.level_supremum(params, order, level)


def sup_scan(params: Params, order: int, levels) -> SupScan:
    return SupScan(order, tuple((n, level_sup(params, order, n)) for n in levels))


# -- endpoint quotients ------------------------------------------------------


@dataclass(frozen=True)
class QuotientRow:
    level: int
    point: Fraction
    quotient: Fraction
    bound: Fraction

    @property
    def within_bound(self) -> bool:
        return self.quotient <= self.bound


@dataclass(frozen=True)
class QuotientScan:
    endpoint: Fraction
    order: int
    side: str  # "right" when probes approach from inside a box on the right
    rows: tuple[QuotientRow, ...] = field(default=())

    @property
    def growth_rate(self) -> Fraction | None:
        """Last successive quotient ratio; None if it cannot be formed."""
        q = [r.quotient for r in self.rows]
        if len(q) < 2 or q[-2] == 0:
            return None
        return q[-1] / q[-2]

    @property
    def trends_to_zero(self) -> bool:
        rate = self.growth_rate
        if rate is None:
            return all(r.quotient == 0 for r in self.rows)
        return rate < 1

    @property
    def all_within_bound(self) -> bool:
        return all(r.within_bound for r in self.rows)


def bound_constant(params: Params, order: int) -> Fraction:
    """Rational upper bound for ``C(k, order)``, the level-free factor of the estimate.

    It is ``m`` for order 1.  Above that it is ``(b-2) 2**(order-1) max|P^(order-1)|``,
    the factor a level-``N`` piece of ``f^(order-1)`` carries besides
    ``(beta/m)**N`` and the chain-rule factor ``m**(N(order-1))``.
    """
    if order == 1:
        return Fraction(params.m)
    sup = Supremum(Fraction((params.b - 2) * 2 ** (order - 1)), params.k, order - 1)
    return sup.upper_bound()


def quotient_bound(params: Params, order: int, level: int) -> Fraction:
    """``beta**(N-1) m`` for order 1, ``(beta/m)**N C(k, order)`` above.

    The order >= 2 form has no ``m**(N(order-1))`` factor, so measured
    quotients usually exceed it; rows report ``within_bound`` as observed.
    """
    if order == 1:
        return params.beta ** (level - 1) * params.m
    return params.ratio**level * bound_constant(params, order)


def endpoint_quotient_scan(params: Params, endpoint, order: int, levels=range(1, 9), depth: int = cons.DEFAULT_DEPTH) -> QuotientScan:
    """Quotients ``|F(e) - F(e_N)| / |e - e_N|`` with ``F = f^(order-1)``.

    ``e_N`` lies on the level-``N`` G(0) connector right of ``e`` when a box
    lies to the right (its midpoint for order 1, its first third above, since
    ``P^(j)`` vanishes at 1/2 for even ``j``), else halfway down the falling half
    of the H connector to the left, ``e - 1.75 m**-N``.  ``F(e)`` is the exact
    edge value for order 1 and 0 above.
    """
    # order 1 only needs values of f, so it is available even for k = 0
    if not 1 <= order <= max(params.k, 1):
        raise ValidationError(f"order must lie in [1, k={params.k}]")
    e = Fraction(endpoint)
    edge = cons.box_endpoint(params, e, depth)
    if edge is None:
        raise ValidationError(f"{e} is not a box endpoint")
    m = params.m
    side = "right" if edge.box_on_right else "left"
    base = edge.value if order == 1 else Fraction(0)
    t_probe = Fraction(1, 2) if order == 1 else Fraction(1, 3)
    rows = []
    for level in levels:
        if level <= edge.level:
            continue
        if side == "right":
            point = e + (1 + t_probe) / m**level
        else:
            point = e - Fraction(7, 4 * m**level)
        if order == 1:
            probe = cons.evaluate(params, point, depth)
        else:
            probe = cons.derivative(params, point, order - 1, depth)
        if probe.status is not cons.Status.EXACT:
            raise RuntimeError(f"probe {point} did not resolve to a connector")
        q = abs(probe.value - base) / abs(point - e)
        rows.append(QuotientRow(level, point, q, quotient_bound(params, order, level)))
    return QuotientScan(e, order, side, tuple(rows))


# -- verdict -----------------------------------------------------------------


@dataclass(frozen=True)
class OrderVerdict:
    order: int
    sup_ratio: Fraction
    sups_vanish: bool
    quotients_vanish: bool
    fd_pass: bool | None


@dataclass(frozen=True)
class CkVerdict:
    params: Params
    orders: tuple[OrderVerdict, ...]
    junction_depth: int
    junctions_continuous: bool
    junctions_flat: bool

    @property
    def all_indicators_vanish(self) -> bool:
        return all(o.sups_vanish and o.quotients_vanish for o in self.orders)


def fd_probe_points(params: Params) -> list[Fraction]:
    """Connector-interior points at levels 1 and 2 (G and H pieces)."""
    m = params.m
    g1 = Fraction(1, m) + Fraction(1, 3 * m)
    h1 = Fraction(m - 2, m) + Fraction(1, 5 * m)
    g2 = Fraction(1, m**2) + Fraction(2, 7 * m**2)
    return [g1, h1, g2]


def ck_verdict(params: Params, junction_depth: int = 2, levels=range(1, 7)) -> CkVerdict:
    rows = cons.junction_table(params, junction_depth)
    orders = []
    for j in range(1, params.k + 1):
        ratio = params.derivative_ratio(j)
        scan = endpoint_quotient_scan(params, 0, j, levels)
        fd = [analytic_vs_fd(params, x, j) for x in fd_probe_points(params)]
        orders.append(
            OrderVerdict(
                order=j,
                sup_ratio=ratio,
                sups_vanish=ratio < 1,
                quotients_vanish=scan.trends_to_zero,
                fd_pass=all(r.passes() for r in fd),
            )
        )
    return CkVerdict(
        params=params,
        orders=tuple(orders),
        junction_depth=junction_depth,
        junctions_continuous=all(r.continuous for r in rows),
        junctions_flat=all(r.flat for r in rows),
    )
