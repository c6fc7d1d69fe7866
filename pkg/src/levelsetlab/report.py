"""Serialization of results: JSON envelopes, CSV tables and SVG plots.

Rationals are written as ``"p/q"`` strings (``"p"`` for integers) with a
parallel ``*_decimal`` field holding 20 significant digits.
"""
from __future__ import annotations

import csv
import io
import json
from decimal import Context, Decimal
from fractions import Fraction
from typing import Iterable, Sequence

from . import __version__
from .construction import CellKind, Params, box_cells, evaluate

_DEC = Context(prec=20)


def rational(value) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def decimal(value) -> str:
    value = Fraction(value)
    d = _DEC.divide(Decimal(value.numerator), Decimal(value.denominator))
    return format(d, "g") if d != 0 else "0"


def rational_fields(name: str, value) -> dict[str, str]:
    return {name: rational(value), f"{name}_decimal": decimal(value)}


def params_dict(params: Params) -> dict:
    return {"k": params.k, "b": params.b, "m": params.m, "beta": rational(params.beta)}


def envelope(params: Params | None, results) -> dict:
    return {
        "params": params_dict(params) if params is not None else None,
        "results": results,
        "tool_version": __version__,
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([rational(v) if isinstance(v, Fraction) else v for v in row])
    return buf.getvalue()


# -- SVG ----------------------------------------------------------------------

_W, _H, _PAD = 800, 500, 40


def _level_boxes(params: Params, levels: int):
    """(x0, y0, width, height) of every box at levels 1..levels."""
    out = []
    frontier = [(Fraction(0), Fraction(0))]
    for level in range(1, levels + 1):
        w, h = Fraction(1, params.m**level), params.ratio**level
        scale = params.ratio ** (level - 1)
        nxt = []
        for x0, y0 in frontier:
            for cell in box_cells(params):
                bx, by = x0 + cell.index * w, y0 + scale * cell.y_offset
                out.append((level, bx, by, w, h))
                nxt.append((bx, by))
        frontier = nxt
    return out


def svg_plot(params: Params, depth: int, points: int = 2001, box_levels: int = 2) -> str:
    """Polyline of sampled f with the first ``box_levels`` levels of boxes outlined."""
    top = max(params.range_max, params.ratio) * Fraction(11, 10)

    def sx(x) -> float:
        return _PAD + float(x) * (_W - 2 * _PAD)

    def sy(y) -> float:
        return _H - _PAD - float(y / top) * (_H - 2 * _PAD)

    xs = [Fraction(i, points - 1) for i in range(points)]
    coords = " ".join(f"{sx(x):.3f},{sy(evaluate(params, x, depth).value):.3f}" for x in xs)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect x="{_PAD}" y="{_PAD}" width="{_W - 2 * _PAD}" height="{_H - 2 * _PAD}" fill="none" stroke="#999"/>',
    ]
    colours = {1: "#444", 2: "#aaa"}
    for level, bx, by, w, h in _level_boxes(params, box_levels):
        lines.append(
            f'<rect x="{sx(bx):.3f}" y="{sy(by + h):.3f}" width="{sx(bx + w) - sx(bx):.3f}" '
            f'height="{sy(by) - sy(by + h):.3f}" fill="none" stroke="{colours.get(level, "#ccc")}" stroke-width="0.6"/>'
        )
    lines.append(f'<polyline fill="none" stroke="#1f4fbf" stroke-width="1" points="{coords}"/>')
    lines.append(
        f'<text x="{_PAD}" y="{_PAD - 12}" font-family="sans-serif" font-size="13">'
        f"k={params.k} b={params.b} m={params.m} beta={rational(params.beta)} depth={depth}</text>"
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
