"""Command-line entry point.

Exit status: 0 on success, 1 for usage or parse errors, 2 for data or
domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import interpret as itp
from . import zeros
from .audit import SCENARIOS, run_audit
from .formula import ParseError, parse_model
from .logbase import NATURAL, DomainError, LogBase, TransformSpec, base_from_value
from .regress import (DGPS, Dataset, RankError, SimParams, column_name, fit_model,
                      lhs_interpretation, rescale_coefficient, simulate_dataset,
                      transform_column)
from .report import TableSpec, format_number, render_audit, render_error_csv, render_table

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- helpers

def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text, out=None):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"cannot write {out}: {exc.strerror}") from None


def _kind_spec(kind, p):
    if kind in ("log", "natural_log", "rescaled_log"):
        if p is None:
            if kind == "rescaled_log":
                raise UsageError("--kind rescaled_log requires --p")
            return TransformSpec("natural_log")
        if kind == "natural_log":
            raise UsageError("--kind natural_log does not take --p")
        return TransformSpec("rescaled_log", LogBase(p))
    if kind in ("log1p", "rescaled_log1p"):
        if p is None and kind == "rescaled_log1p":
            raise UsageError("--kind rescaled_log1p requires --p")
        return TransformSpec("rescaled_log1p", NATURAL if p is None else LogBase(p))
    if p is not None:
        raise UsageError(f"--kind {kind} does not take --p")
    return TransformSpec(kind)


def _rows(pairs):
    width = max(len(k) for k, _, _ in pairs)
    vwidth = max(len(v) for _, v, _ in pairs)
    out = []
    for key, value, pct in pairs:
        line = f"{key:<{width}}  {value:>{vwidth}}"
        if pct:
            line += f"  {pct}"
        out.append(line.rstrip())
    return "\n".join(out) + "\n"


def _num(x):
    return repr(round(x, 10)) if math.isfinite(x) else str(x)


def _pct(x):
    return format_number(x * 100, 4) + "%"


def _output(args, pairs, extra=None):
    if args.json:
        data = {k: v for k, v, _ in pairs}
        data.update(extra or {})
        return json.dumps(data, indent=2, sort_keys=False) + "\n"
    text = _rows([(k, _num(v) if isinstance(v, float) else str(v), _pct(v) if pct else "")
                  for k, v, pct in pairs])
    for key, value in (extra or {}).items():
        text += f"{key}: {value}\n"
    return text


# ---------------------------------------------------------------- commands

def cmd_transform(args):
    spec = _kind_spec(args.kind, args.p)
    text = _read_text(args.input)
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise DomainError("CSV input is empty; a header row is required")
    header, data = rows[0], [r for r in rows[1:] if r]
    if args.column not in header:
        raise DomainError(f"no column {args.column!r}; available: {', '.join(header)}")
    j = header.index(args.column)
    values = []
    for i, row in enumerate(data, start=1):
        try:
            values.append(float(row[j]))
        except (ValueError, IndexError):
            raise DomainError(f"row {i}, column {args.column!r}: not a number") from None
    try:
        out = transform_column(values, spec, args.column)
    except DomainError as exc:
        hint = ""
        if spec.kind in ("natural_log", "rescaled_log") and "x > 0" in str(exc):
            hint = " (try --kind log1p)"
        raise DomainError(f"{exc}{hint}") from None
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header + [column_name(args.column, spec)])
    for row, v in zip(data, out):
        w.writerow(row + [repr(float(v))])
    _emit(buf.getvalue(), args.out)


def cmd_interpret(args):
    if args.natural == (args.base_p is not None):
        raise UsageError("give exactly one of --base-p or --natural")
    base = NATURAL if args.natural else LogBase(args.base_p)
    beta = args.beta
    if args.side == "lhs":
        if args.to_p is not None:
            raise UsageError("--to-p applies to --side rhs only")
        units = 1.0 if args.units is None else args.units
        r = lhs_interpretation(beta, base, units)
        pairs = [
            ("side", "lhs", False),
            ("base", base.token, False),
            ("coefficient", beta, False),
            ("units_of_x", units, False),
            ("log_change_in_y", r.linear_change, False),
            ("exact_prop_change", r.exact_prop, True),
            ("approx_prop_change", r.approx_prop, True),
            ("approx_error", r.error, True),
        ]
        statement = (f"a {units:g}-unit increase in X is associated with a "
                     f"{_pct(r.exact_prop)} change in Y (approximation: {_pct(r.approx_prop)})")
        _emit(_output(args, pairs, {"statement": statement}))
        return

    pairs = [("side", "rhs", False), ("base", base.token, False), ("coefficient", beta, False)]
    if args.units is not None:
        k = args.units
        exact_prop = itp.exact_percent_change(base, k)
        approx_prop = k if base.is_natural else k * base.p
        pairs += [
            ("log_units", k, False),
            ("effect", k * beta, False),
            ("exact_prop_change_x", exact_prop, True),
            ("approx_prop_change_x", approx_prop, True),
            ("approx_error", approx_prop - exact_prop, True),
        ]
        statement = (f"a {_pct(exact_prop)} increase in X is associated with a "
                     f"{_num(k * beta)} change in Y")
    elif args.to_p is not None:
        target = LogBase(args.to_p)
        exact = rescale_coefficient(beta, base, target)
        approx = beta * args.to_p / (1.0 if base.is_natural else base.p)
        pairs += [
            ("target_change", args.to_p, True),
            ("rescaled_coefficient", exact, False),
            ("approx_effect", approx, False),
            ("approx_error", approx - exact, False),
        ]
        statement = (f"a {target.percent} increase in X is associated with a "
                     f"{_num(exact)} change in Y")
    else:
        if base.is_natural:
            statement = (f"a {_pct(base.p)} increase in X (one unit of ln X) is associated "
                         f"with a {_num(beta)} change in Y; use --to-p for a smaller change")
        else:
            statement = f"a {base.percent} increase in X is associated with a {_num(beta)} change in Y"
        pairs += [("prop_change_x", base.p, True), ("effect", beta, False)]
    _emit(_output(args, pairs, {"statement": statement}))


def _curve_methods(args):
    methods = []
    if not args.no_traditional:
        methods.append(itp.Method.traditional())
    if args.bases is None and args.rescaled is None:
        args.rescaled = ["1.1", "1.4"]
    for b in args.bases or []:
        gb = base_from_value(b).base if b.strip().lower() != "e" else math.e
        if gb == math.e and not args.no_traditional:
            continue
        methods.append(itp.Method.generic(gb))
    for b in args.rescaled or []:
        methods.append(itp.Method.rescaled(base_from_value(b)))
    if not methods:
        raise UsageError("no curves selected")
    return methods


def cmd_error_curve(args):
    if args.step <= 0:
        raise UsageError(f"--step must be positive, got {args.step}")
    if not args.p_min < args.p_max:
        raise UsageError("--p-min must be below --p-max")
    curves = [itp.error_curve(m, args.p_min, args.p_max, args.step) for m in _curve_methods(args)]
    _emit(render_error_csv(curves), args.out)
    for c in curves:
        worst = max(c.grid, key=lambda g: abs(g[1]))
        print(f"{c.method_label}: max |error| {abs(worst[1]):.6f} at p={worst[0]:g}", file=sys.stderr)


def cmd_scan(args):
    bases = [math.e if b.strip().lower() == "e" else float(b) for b in args.bases]
    if args.grid_step <= 0 or args.p_max <= 0:
        raise UsageError("--p-max and --grid-step must be positive")
    rows = itp.base_quality_scan(bases, args.p_max, args.grid_step)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["base", "max_abs_error", "argmax_p", f"ratio_to_e_at_{rows[0].reference_p:g}"])
    for r in rows:
        w.writerow(["e" if r.base == math.e else f"{r.base:g}", f"{r.max_abs_error:.6f}", f"{r.argmax_p:.6f}", f"{r.ratio_to_e:.4f}"])
    for b in args.crossover or []:
        lb = base_from_value(b)
        w.writerow([f"crossover base-{lb.token}", f"{itp.crossover(lb):.9f}", "", ""])
    _emit(buf.getvalue(), args.out)


def cmd_fit(args):
    model = parse_model(args.model)
    data = Dataset.read_csv(io.StringIO(_read_text(args.input)))
    try:
        fit = fit_model(data, model)
    except KeyError as exc:
        raise DomainError(exc.args[0]) from None
    spec = TableSpec([(fit, None)], notes=list(args.note or []), digits=args.digits,
                     label_style=args.label_style, include_intercept=args.intercept)
    _emit(render_table(spec, args.format), args.out)


def cmd_audit(args):
    ids = args.scenario or list(SCENARIOS)
    for sid in ids:
        if sid not in SCENARIOS:
            raise UsageError(f"unknown scenario {sid!r}; available: {', '.join(SCENARIOS)}")
    results = [run_audit(SCENARIOS[sid]) for sid in ids]
    if args.json:
        payload = [{
            "id": r.scenario.id,
            "values": {line.key: line.value for line in r.lines},
            "discrepancy": r.discrepancy,
            "discrepancy_units": "proportion of mean" if r.share_units else "outcome units",
            "flag": r.flag,
            "notes": list(r.notes),
        } for r in results]
        _emit(json.dumps(payload, indent=2) + "\n")
    else:
        _emit(render_audit(results))


def cmd_elasticity(args):
    pairs = []
    if (args.px is None) != (args.x0 is None):
        raise UsageError("--px and --x0 go together")
    py = args.py if args.py is not None else args.px
    if args.y0 is not None and py is None:
        raise UsageError("--y0 needs --py (or --px)")
    if args.px is None and args.y0 is None:
        raise UsageError("give --px/--x0, --y0, or both")
    if args.px is not None:
        pairs.append(("prop_change_x", zeros.exact_prop_change_x(args.px, args.x0), False))
        pairs.append(("x_error_if_read_as_1+p", zeros.rescaled_zero_error(args.px, args.x0), False))
    extra = {}
    if args.y0 is not None:
        pairs.append(("prop_change_y", zeros.exact_prop_change_y(args.beta, py, args.y0), False))
        pairs.append(("se_prop_change_y", zeros.delta_method_se(args.beta, args.se, py, args.y0), False))
        extra["note"] = zeros.LARGE_SAMPLE_NOTE
    _emit(_output(args, pairs, extra))


def cmd_simulate(args):
    base = DGPS[args.dgp]
    prm = SimParams(
        beta0=base.beta0 if args.beta0 is None else args.beta0,
        beta1=base.beta1 if args.beta1 is None else args.beta1,
        sigma=base.sigma if args.sigma is None else args.sigma,
        p=args.p, log_mean=base.log_mean, log_sd=base.log_sd,
    )
    _emit(simulate_dataset(args.seed, args.n, args.dgp, prm).to_csv(), args.out)


# ---------------------------------------------------------------- parser

def build_parser():
    ap = _Parser(prog="logrescale", description="Base-(1+p) logarithms for regression interpretation.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("transform", help="append a transformed column to a CSV")
    sp.add_argument("input", help="CSV path or - for stdin")
    sp.add_argument("--column", required=True)
    sp.add_argument("--kind", required=True,
                    choices=["log", "log1p", "asinh", "identity", "natural_log",
                             "rescaled_log", "rescaled_log1p"])
    sp.add_argument("--p", type=float, help="proportional change of the base (base = 1+p)")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("interpret", help="exact and approximate reading of a log coefficient")
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--base-p", type=float)
    sp.add_argument("--natural", action="store_true", help="coefficient is on ln()")
    sp.add_argument("--side", choices=["lhs", "rhs"], default="rhs")
    sp.add_argument("--to-p", type=float, help="rescale an rhs coefficient to base 1+TO_P")
    sp.add_argument("--units", type=float)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_interpret)

    sp = sub.add_parser("error-curve", help="approximation error curves as CSV")
    sp.add_argument("--bases", nargs="+", help="bases read the traditional way (p log units = p change)")
    sp.add_argument("--rescaled", nargs="+", help="rescaled bases 1+p (default 1.1 1.4)")
    sp.add_argument("--no-traditional", action="store_true")
    sp.add_argument("--p-min", type=float, default=0.0)
    sp.add_argument("--p-max", type=float, default=0.5)
    sp.add_argument("--step", type=float, default=0.005)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_error_curve)

    sp = sub.add_parser("scan", help="worst traditional-style error per base")
    sp.add_argument("--bases", nargs="+", default=["e", "2.6", "2.35"])
    sp.add_argument("--p-max", type=float, default=0.43)
    sp.add_argument("--grid-step", type=float, default=1e-3)
    sp.add_argument("--crossover", nargs="+", help="rescaled bases whose crossover with ln() to report")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("fit", help="fit OLS from a model formula and render a table")
    sp.add_argument("input", help="CSV path or - for stdin")
    sp.add_argument("model", help='e.g. "y ~ log(x, p=0.1) + z"')
    sp.add_argument("--format", choices=["markdown", "latex", "csv"], default="markdown")
    sp.add_argument("--label-style", choices=["percent", "log"], default="percent")
    sp.add_argument("--digits", type=int, default=3)
    sp.add_argument("--intercept", action="store_true", help="show the constant row")
    sp.add_argument("--note", action="append", help="extra footer line (repeatable)")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("audit", help="recompute the built-in case studies")
    sp.add_argument("--scenario", action="append", help=f"one of {', '.join(SCENARIOS)}")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("elasticity", help="exact changes for ln(1+X)/ln(1+Y) models")
    sp.add_argument("--beta", type=float, default=0.0)
    sp.add_argument("--se", type=float, default=0.0)
    sp.add_argument("--px", type=float)
    sp.add_argument("--py", type=float)
    sp.add_argument("--x0", type=float)
    sp.add_argument("--y0", type=float)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_elasticity)

    sp = sub.add_parser("simulate", help="seeded synthetic dataset as CSV")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--dgp", choices=list(DGPS), default="linear-log")
    sp.add_argument("--beta0", type=float)
    sp.add_argument("--beta1", type=float)
    sp.add_argument("--sigma", type=float)
    sp.add_argument("--p", type=float, default=0.1)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"logrescale {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, RankError, ValueError, ArithmeticError) as exc:
        print(f"logrescale {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
