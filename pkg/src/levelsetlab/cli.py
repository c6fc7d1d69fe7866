"""Command-line interface.

Usage:
    lsl params --k 1 --b 5 --beta 1/2
    lsl eval --x 15/18 --depth 3
    lsl sample --points 101 --depth 6 --out f.csv
    lsl plot --depth 6 --out f.svg
    lsl dim --max-depth 5 --ladder natural --csv counts.csv
    lsl preimage --address 0,0,0 --depth 3
    lsl smooth --order 1 --levels 2..6
    lsl smooth --endpoint 0 --order 1
    lsl gallery --fn staircase --alpha 1 --count 3

Construction parameters come from flags, then ``LSL_K`` / ``LSL_B`` /
``LSL_BETA`` environment variables, then a ``key=value`` file given with
``--config``, then the defaults k=1, b=5, beta=1/2.

Exit codes: 0 success, 1 validation error, 2 budget or capacity exceeded.
"""
from __future__ import annotations

import functools
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import construction as cons
from . import dimension, gallery, rangeset, report, smoothcheck
from .errors import CapacityError, LevelSetLabError, ValidationError

DEFAULTS = {"k": "1", "b": "5", "beta": "1/2"}
ENV_PREFIX = "LSL_"


def parse_rational(text: str, what: str = "value") -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError, AttributeError) as exc:
        raise ValidationError(f"{what} must be a rational like 3/7, got {text!r}") from exc


def parse_int(text: str, what: str) -> int:
    try:
        return int(str(text).strip())
    except ValueError as exc:
        raise ValidationError(f"{what} must be an integer, got {text!r}") from exc


def read_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{n}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip().lower()] = value.strip()
    return out


def resolve_params(k, b, beta, config: str | None) -> cons.Params:
    """Flags > LSL_* environment > config file > defaults."""
    file_values = read_config(config)
    flags = {"k": k, "b": b, "beta": beta}
    merged = {}
    for key in DEFAULTS:
        if flags[key] is not None:
            merged[key] = str(flags[key])
        elif ENV_PREFIX + key.upper() in os.environ:
            merged[key] = os.environ[ENV_PREFIX + key.upper()]
        elif key in file_values:
            merged[key] = file_values[key]
        else:
            merged[key] = DEFAULTS[key]
    return cons.validate_params(
        parse_int(merged["k"], "k"), parse_int(merged["b"], "b"), parse_rational(merged["beta"], "beta")
    )


def with_params(fn):
    """Add --k/--b/--beta/--config and pass a validated ``params``."""

    @click.option("--k", "k", default=None, help="Smoothness order k (default 1).")
    @click.option("--b", "b", default=None, help="Boxes per level, b >= 3 (default 5).")
    @click.option("--beta", "beta", default=None, help="Vertical ratio p/q in (0,1) (default 1/2).")
    @click.option("--config", "config", default=None, type=click.Path(exists=True, dir_okay=False), help="key=value config file.")
    @functools.wraps(fn)
    def wrapper(k, b, beta, config, **kwargs):
        return fn(resolve_params(k, b, beta, config), **kwargs)

    return wrapper


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _eval_json(result: cons.EvalResult) -> dict:
    return {
        **report.rational_fields("value", result.value),
        **report.rational_fields("error_bound", result.error_bound),
        "status": result.status.value,
    }


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact", prog_name="lsl")
def cli():
    """Flat C^k functions with Cantor sets of plateau heights."""


@cli.command()
@with_params
def params(params):
    """Validate parameters; print m and both dimension formulas."""
    proof = rangeset.closed_form_dimension(params.b, params.beta, "proof")
    statement = rangeset.closed_form_dimension(params.b, params.beta, "statement")
    results = {
        "m": params.m,
        **report.rational_fields("ratio", params.ratio),
        **report.rational_fields("range_max", params.range_max),
        "dimension_log_m": {"formula": "log(b-1)/(log(2b-1) - log(beta))", "value": f"{float(proof):.15g}"},
        "dimension_log_2b_plus_1": {"formula": "log(b-1)/(log(2b+1) - log(beta))", "value": f"{float(statement):.15g}"},
        "regression_target": "dimension_log_m",
    }
    click.echo(report.dumps(report.envelope(params, results)), nl=False)


@cli.command("eval")
@with_params
@click.option("--x", "x", required=True, help="Point in [0,1] as p/q.")
@click.option("--depth", default=cons.DEFAULT_DEPTH, show_default=True, type=int)
@click.option("--order", default=0, show_default=True, type=int, help="Derivative order (0 = value).")
def eval_cmd(params, x, depth, order):
    """Evaluate f (or a derivative) at one point."""
    x = parse_rational(x, "x")
    if order == 0:
        result = cons.evaluate(params, x, depth)
    else:
        result = cons.derivative(params, x, order, depth)
    path = cons.locate(params, x, depth)
    piece = (
        {"kind": path.terminal.cell.label, "level": path.terminal.level, "t": report.rational(path.terminal.t)}
        if isinstance(path.terminal, cons.CurveTerminal)
        else {"kind": "BoxCapped", "level": path.terminal.level}
    )
    results = {"x": report.rational(x), "order": order, **_eval_json(result), "piece": piece}
    click.echo(report.dumps(report.envelope(params, results)), nl=False)


@cli.command()
@with_params
@click.option("--points", default=101, show_default=True, type=int)
@click.option("--depth", default=8, show_default=True, type=int)
@click.option("--out", default=None, help="CSV path (stdout if omitted).")
def sample(params, points, depth, out):
    """Sample f on a uniform rational grid."""
    if points < 2:
        raise ValidationError("--points must be >= 2")
    rows = []
    for i in range(points):
        x = Fraction(i, points - 1)
        r = cons.evaluate(params, x, depth)
        rows.append((x, r.value, r.error_bound, r.status.value))
    emit(report.csv_text(["x", "value", "error_bound", "status"], rows), out)


@cli.command()
@with_params
@click.option("--depth", default=8, show_default=True, type=int)
@click.option("--points", default=2001, show_default=True, type=int)
@click.option("--out", default=None, help="SVG path (stdout if omitted).")
def plot(params, depth, points, out):
    """Draw f with the first two levels of boxes as an SVG."""
    emit(report.svg_plot(params, depth, points), out)


@cli.command()
@with_params
@click.option("--max-depth", default=5, show_default=True, type=int)
@click.option("--ladder", type=click.Choice(["natural", "dyadic"]), default="natural", show_default=True)
@click.option("--anchor", default="0", show_default=True, help="Grid offset as a fraction of the scale.")
@click.option("--csv", "csv_out", default=None, help="Write the count curve CSV here.")
@click.option("--out", default=None, help="Write the DimFit JSON here (stdout if omitted).")
def dim(params, max_depth, ladder, anchor, csv_out, out):
    """Box-count the Cantor set of plateau heights and fit its dimension."""
    fit = dimension.estimate_s_dimension(params, max_depth, ladder, parse_rational(anchor, "anchor"))
    rows = [(s, c) for s, c in fit.curve.points]
    if csv_out:
        Path(csv_out).write_text(report.csv_text(["scale", "count"], rows))
    results = {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residual": fit.residual,
        "window": list(fit.window),
        "ladder": ladder,
        "closed_form": float(rangeset.closed_form_dimension(params.b, params.beta)),
        "curve": [{"scale": report.rational(s), "count": c} for s, c in rows],
    }
    emit(report.dumps(report.envelope(params, results)), out)


def _parse_address(text: str) -> rangeset.RangeAddress:
    text = text.strip()
    if not text:
        return rangeset.RangeAddress()
    prefix, _, cycle = text.partition("|")
    digits = [parse_int(d, "address digit") for d in prefix.split(",") if d.strip()]
    cyc = [parse_int(d, "address digit") for d in cycle.split(",") if d.strip()]
    return rangeset.RangeAddress(tuple(digits), tuple(cyc))


@cli.command()
@with_params
@click.option("--address", required=True, help="Digits d1,d2,...; append |c1,c2 for a repeating tail.")
@click.option("--depth", required=True, type=int)
@click.option("--include-crossings/--exclude-crossings", default=True, show_default=True)
@click.option("--out", default=None, help="CSV path (stdout if omitted).")
def preimage(params, address, depth, include_crossings, out):
    """Cover of the preimage of an address value in S."""
    cover = rangeset.preimage_cover(params, _parse_address(address), depth, include_crossings)
    rows = [(iv.lo, iv.hi, "box") for iv in cover.boxes]
    rows += [(iv.lo, iv.hi, "flat") for iv in cover.flats]
    rows += [(iv.lo, iv.hi, "crossing") for iv in cover.crossings]
    rows.sort(key=lambda r: (r[0], r[1]))
    emit(report.csv_text(["lo", "hi", "kind"], rows), out)


def _parse_levels(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep:
        n = parse_int(lo, "levels")
        return range(n, n + 1)
    return range(parse_int(lo, "levels"), parse_int(hi, "levels") + 1)


@cli.command()
@with_params
@click.option("--order", default=1, show_default=True, type=int)
@click.option("--levels", default=None, help="Level range A..B.")
@click.option("--endpoint", default=None, help="Box endpoint p/q for a quotient scan.")
@click.option("--verdict", is_flag=True, help="Print the full smoothness evidence report.")
def smooth(params, order, levels, endpoint, verdict):
    """Derivative suprema per level, endpoint quotient scans, or a verdict."""
    if verdict:
        v = smoothcheck.ck_verdict(params)
        results = {
            "junction_depth": v.junction_depth,
            "junctions_continuous": v.junctions_continuous,
            "junctions_flat": v.junctions_flat,
            "orders": [
                {
                    "order": o.order,
                    **report.rational_fields("sup_ratio", o.sup_ratio),
                    "sups_vanish": o.sups_vanish,
                    "quotients_vanish": o.quotients_vanish,
                    "fd_pass": o.fd_pass,
                }
                for o in v.orders
            ],
        }
    elif endpoint is not None:
        lv = _parse_levels(levels) if levels else range(1, 9)
        scan = smoothcheck.endpoint_quotient_scan(params, parse_rational(endpoint, "endpoint"), order, lv)
        rate = scan.growth_rate
        results = {
            "endpoint": report.rational(scan.endpoint),
            "order": order,
            "side": scan.side,
            "rows": [
                {
                    "level": r.level,
                    "point": report.rational(r.point),
                    **report.rational_fields("quotient", r.quotient),
                    **report.rational_fields("bound", r.bound),
                    "within_bound": r.within_bound,
                }
                for r in scan.rows
            ],
            "growth_rate": report.rational(rate) if rate is not None else None,
            "trends_to_zero": scan.trends_to_zero,
        }
    else:
        lv = _parse_levels(levels) if levels else range(1, 7)
        scan = smoothcheck.sup_scan(params, order, lv)
        results = {
            "order": order,
            "levels": [
                {"level": n, **report.rational_fields("coefficient", s.coefficient), "sup_decimal": f"{float(s):.17g}", "sup_exact": str(s.exact)}
                for n, s in scan.levels
            ],
            "ratios": [report.rational(r) for r in scan.ratios],
            "expected_ratio": report.rational(params.derivative_ratio(order)),
        }
    click.echo(report.dumps(report.envelope(params, results)), nl=False)


@cli.command("gallery")
@click.option("--fn", "name", required=True, type=click.Choice(gallery.NAMES))
@click.option("--x", "x", default=None, help="Evaluate at this point.")
@click.option("--alpha", default=None, help="Report the level values with preimage dimension >= alpha.")
@click.option("--count", default=5, show_default=True, type=int, help="Staircase plateaus to list.")
def gallery_cmd(name, x, alpha, count):
    """Reference functions: parabola, constant, staircase."""
    results: dict = {"function": name}
    if x is not None:
        xv = parse_rational(x, "x")
        results.update({"x": report.rational(xv), **report.rational_fields("value", gallery.gallery_eval(name, xv))})
    if alpha is not None or x is None:
        rep = gallery.gallery_levelset(name, parse_rational(alpha or "1", "alpha"), count)
        results["levelset"] = {
            "alpha": report.rational(rep.alpha),
            "empty": rep.empty,
            "range": [report.rational(rep.range_interval.lo), report.rational(rep.range_interval.hi)] if rep.range_interval else None,
            "values": [
                {
                    **report.rational_fields("value", v.value),
                    "interval_count": v.interval_count,
                    "total_length": report.rational(v.total_length),
                    "contains_interval": v.contains_interval,
                }
                for v in rep.values
            ],
            "accumulation_point": report.rational(rep.accumulation) if rep.accumulation is not None else None,
            "notes": list(rep.notes),
        }
    click.echo(report.dumps(report.envelope(None, results)), nl=False)


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="lsl", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except CapacityError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except (ValidationError, LevelSetLabError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
