"""Flat connector polynomials and their level rescalings.

Every connector is an affine image of one normalized polynomial

    P_k(t) = N_k * sum_{i=0}^{k} C(k, i) (-1)^i t^(k+1+i) / (k+1+i),

with ``P_k(0) = 0``, ``P_k(1) = 1`` and ``P_k'(t) = N_k t^k (1 - t)^k``, so the first
``k`` derivatives vanish at both ends.  ``N_k = (2k+1)! / (k!)^2``.

A rising connector (family G) of width ``w = m**-level`` and rise ``A`` is
``A * P_k(x / w)``.  A falling connector (family H) drops from ``A`` to 0 over the
first half of its cell and is identically 0 on the second half:
``A * P_k(1 - 2x / w)`` for ``x <= w/2``.

All arithmetic is exact (:class:`fractions.Fraction`).  Derivative suprema are
algebraic in general and are returned as :class:`Supremum` objects, a rational
coefficient times a shared unit supremum, so ratios between levels stay exact.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

import sympy

from .errors import CapacityError, DomainError, ValidationError

MAX_K = 8

Rational = Fraction | int


class Family(str, enum.Enum):
    G = "G"
    H = "H"


def _check_k(k: int, max_k: int | None = None) -> None:
    limit = MAX_K if max_k is None else max_k
    if not isinstance(k, int) or k < 0:
        raise ValidationError(f"smoothness order k must be a non-negative integer, got {k!r}")
    if k > limit:
        raise CapacityError(f"k={k} exceeds the configured maximum {limit}")


# -- exact polynomial helpers (coefficients low -> high) ---------------------


def poly_eval(coeffs: Sequence[Fraction], t: Rational) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def poly_deriv(coeffs: Sequence[Fraction], order: int = 1) -> tuple[Fraction, ...]:
    out = tuple(coeffs)
    for _ in range(order):
        out = tuple(i * c for i, c in enumerate(out))[1:]
    return out or (Fraction(0),)


def poly_compose_affine(coeffs: Sequence[Fraction], a: Rational, c: Rational) -> tuple[Fraction, ...]:
    """Coefficients of ``p(a*t + c)``."""
    out = [Fraction(0)] * len(coeffs)
    # binomial expansion of (a t + c)^n
    for n, cn in enumerate(coeffs):
        if cn == 0:
            continue
        for i in range(n + 1):
            out[i] += cn * comb(n, i) * Fraction(a) ** i * Fraction(c) ** (n - i)
    return tuple(out)


# -- normalized polynomial ---------------------------------------------------


def normalization_constant(k: int, max_k: int | None = None) -> Fraction:
    """Return ``(2k+1)! / (k!)^2``, the reciprocal of the alternating sum."""
    _check_k(k, max_k)
    return Fraction(factorial(2 * k + 1), factorial(k) ** 2)


def alternating_sum(k: int) -> Fraction:
    return sum((Fraction((-1) ** i * comb(k, i), k + 1 + i) for i in range(k + 1)), Fraction(0))


@lru_cache(maxsize=None)
def unit_coefficients(k: int) -> tuple[Fraction, ...]:
    """Coefficients of ``P_k`` in powers of t (length 2k+2)."""
    n_k = normalization_constant(k)
    coeffs = [Fraction(0)] * (2 * k + 2)
    for i in range(k + 1):
        coeffs[k + 1 + i] = n_k * Fraction((-1) ** i * comb(k, i), k + 1 + i)
    return tuple(coeffs)


@lru_cache(maxsize=None)
def unit_supremum(k: int, order: int) -> sympy.Expr:
    """Exact ``max_{t in [0,1]} |P_k^(order)(t)|`` as a sympy number."""
    if not 1 <= order <= 2 * k + 1:
        raise ValidationError(f"derivative order must lie in [1, {2 * k + 1}], got {order}")
    t = sympy.Symbol("t")
    coeffs = poly_deriv(unit_coefficients(k), order)
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], t)
    candidates: list[sympy.Expr] = [sympy.Integer(0), sympy.Integer(1)]
    if poly.degree() >= 2:
        candidates += [r for r in poly.diff(t).real_roots() if 0 < r < 1]
    best, best_num = sympy.Integer(0), sympy.Float(0)
    for point in candidates:
        value = poly.as_expr().subs(t, point)
        num = abs(value.evalf(60))
        if num > best_num:
            best, best_num = value, num
    if best.evalf(60) < 0:
        best = -best
    return best if best.is_Rational else sympy.expand(best)


@dataclass(frozen=True)
class Supremum:
    """``coefficient * unit_supremum(k, order)``; exact and comparable within one (k, order)."""

    coefficient: Fraction
    k: int
    order: int

    @property
    def unit(self) -> sympy.Expr:
        return unit_supremum(self.k, self.order)

    @property
    def exact(self) -> sympy.Expr:
        return sympy.Rational(self.coefficient.numerator, self.coefficient.denominator) * self.unit

    @property
    def is_rational(self) -> bool:
        return bool(self.unit.is_Rational)

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("supremum is irrational; use upper_bound()")
        u = self.unit
        return self.coefficient * Fraction(int(u.p), int(u.q))

    def upper_bound(self, digits: int = 40) -> Fraction:
        """Smallest-effort rational upper bound; exact when the supremum is rational."""
        if self.is_rational:
            return self.as_fraction()
        approx = Fraction(str(self.unit.evalf(digits + 10)))
        return self.coefficient * (approx + Fraction(1, 10**digits))

    def _same_unit(self, other: "Supremum") -> None:
        if (self.k, self.order) != (other.k, other.order):
            raise ValueError("suprema with different (k, order) are not commensurable")

    def __truediv__(self, other: "Supremum") -> Fraction:
        self._same_unit(other)
        return self.coefficient / other.coefficient

    def __lt__(self, other: "Supremum") -> bool:
        self._same_unit(other)
        return self.coefficient < other.coefficient

    def __float__(self) -> float:
        return float(self.exact.evalf(30))

    def scaled(self, factor: Rational) -> "Supremum":
        return Supremum(self.coefficient * factor, self.k, self.order)


# -- curve specifications ----------------------------------------------------


@dataclass(frozen=True)
class CurveSpec:
    k: int
    m: int
    beta: Fraction
    level: int
    family: Family
    amplitude: Fraction

    def __post_init__(self):
        _check_k(self.k)
        if self.m < 5 or self.m % 2 == 0:
            raise ValidationError(f"m must be odd and >= 5, got {self.m}")
        if not 0 < self.beta < 1:
            raise ValidationError(f"beta must lie in (0, 1), got {self.beta}")
        if self.level < 1:
            raise ValidationError(f"level must be >= 1, got {self.level}")
        if self.amplitude <= 0:
            raise ValidationError(f"amplitude must be positive, got {self.amplitude}")
        object.__setattr__(self, "family", Family(self.family))

    @property
    def width(self) -> Fraction:
        return Fraction(1, self.m**self.level)

    @property
    def b(self) -> int:
        return (self.m + 1) // 2


def g_curve(k: int, m: int, beta: Rational, level: int = 1) -> CurveSpec:
    """Rising connector at ``level``; rise ``(beta/m)**level``."""
    beta = Fraction(beta)
    return CurveSpec(k, m, beta, level, Family.G, (beta / m) ** level)


def h_curve(k: int, m: int, beta: Rational, level: int = 1) -> CurveSpec:
    """Falling connector at ``level``; drop ``(b-2) * (beta/m)**level``."""
    beta = Fraction(beta)
    b = (m + 1) // 2
    return CurveSpec(k, m, beta, level, Family.H, (b - 2) * (beta / m) ** level)


def _normalized(spec: CurveSpec, x_local: Rational) -> Fraction:
    x_local = Fraction(x_local)
    if not 0 <= x_local <= spec.width:
        raise DomainError(f"x_local={x_local} outside [0, {spec.width}]")
    return x_local * spec.m**spec.level


def g_eval(spec: CurveSpec, x_local: Rational, order: int = 0) -> Fraction:
    """Exact value (order 0) or ``order``-th derivative of a G connector."""
    if spec.family is not Family.G:
        raise ValidationError("g_eval needs a G-family spec")
    if order < 0:
        raise ValidationError("derivative order must be >= 0")
    t = _normalized(spec, x_local)
    scale = spec.m ** (spec.level * order)
    return spec.amplitude * scale * poly_eval(poly_deriv(unit_coefficients(spec.k), order), t)


def h_eval(spec: CurveSpec, x_local: Rational, order: int = 0) -> Fraction:
    """Exact value or derivative of an H connector; zero on the second half."""
    if spec.family is not Family.H:
        raise ValidationError("h_eval needs an H-family spec")
    if order < 0:
        raise ValidationError("derivative order must be >= 0")
    t = _normalized(spec, x_local)
    if t >= Fraction(1, 2):
        return Fraction(0)
    scale = Fraction(-2 * spec.m**spec.level) ** order
    return spec.amplitude * scale * poly_eval(poly_deriv(unit_coefficients(spec.k), order), 1 - 2 * t)


def curve_eval(spec: CurveSpec, x_local: Rational, order: int = 0) -> Fraction:
    if spec.family is Family.G:
        return g_eval(spec, x_local, order)
    return h_eval(spec, x_local, order)


def curve_coefficients(spec: CurveSpec) -> tuple[Fraction, ...]:
    """Coefficients in ``t = m**level * x_local``.

    For family H these describe the falling half ``t in [0, 1/2]`` only.
    """
    unit = unit_coefficients(spec.k)
    if spec.family is Family.H:
        unit = poly_compose_affine(unit, -2, 1)
    return tuple(spec.amplitude * c for c in unit)


def sup_abs_derivative(spec: CurveSpec, order: int) -> Supremum:
    """Exact ``sup |d^order/dx^order curve|`` over the curve's whole cell."""
    if not 1 <= order <= 2 * spec.k + 1:
        raise ValidationError(f"order must lie in [1, {2 * spec.k + 1}], got {order}")
    chain = spec.m ** (spec.level * order)
    if spec.family is Family.H:
        chain *= 2**order
    return Supremum(spec.amplitude * chain, spec.k, order)
