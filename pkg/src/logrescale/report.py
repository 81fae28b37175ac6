"""Text rendering: regression tables, error-curve CSV and audit reports.

Numbers are stored as proportions everywhere else; this is the only place
that multiplies by 100.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal

from .logbase import NATURAL, LogBase, TransformSpec
from .regress import FitResult, parse_column_name

__all__ = [
    "DEFAULT_STARS",
    "TableSpec",
    "format_number",
    "star_marker",
    "star_note",
    "base_note",
    "auto_label",
    "render_table",
    "render_error_csv",
    "render_audit",
    "percent",
]

DEFAULT_STARS = ((0.1, "*"), (0.05, "**"), (0.01, "***"))


def format_number(x: float, digits: int = 3) -> str:
    """Fixed-point text with round-half-even on the shortest decimal repr."""
    if not math.isfinite(x):
        return str(x)
    q = Decimal(repr(float(x))).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
    text = f"{q:f}"
    if text.startswith("-") and q == 0:
        text = text[1:]
    return text


def percent(x: float, digits: int = 2) -> str:
    return format_number(x * 100, digits) + "%"


def _check_stars(stars):
    cutoffs = [c for c, _ in stars]
    markers = [m for _, m in stars]
    if any(b >= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("star cutoffs must be strictly decreasing")
    if len(set(markers)) != len(markers):
        raise ValueError("star markers must be unique")


def star_marker(p: float, stars=DEFAULT_STARS) -> str:
    marker = ""
    for cutoff, m in stars:
        if p < cutoff:
            marker = m
    return marker


def star_note(stars=DEFAULT_STARS, latex: bool = False) -> str:
    lt = "$<$" if latex else "<"
    return ", ".join(f"{m} p {lt} {c:g}" for c, m in stars)


def base_note(b: LogBase) -> str:
    return f"Variables marked with {b.percent} increase use a base-{b.token} logarithm transformation."


def _p_percent(b: LogBase) -> str:
    return f"{b.p * 100:g}%"


def auto_label(name: str, spec: TransformSpec | None = None, style: str = "percent") -> str:
    """Display label for a term or outcome.

    ``style="percent"`` gives ``x (10% Increase)``; ``style="log"`` gives
    ``log_{1.1}(x) (10% increase)``. Materialized column names such as
    ``x__rescaled_log_1.1`` are labelled like the inline transform.
    """
    spec = spec or TransformSpec("identity")
    if spec.kind == "identity":
        parsed = parse_column_name(name)
        if parsed is None:
            return name
        name, spec = parsed
    kind, b = spec.kind, spec.effective_base
    if kind == "asinh":
        return f"asinh({name})"
    inner = name if kind != "rescaled_log1p" else f"1+{name}"
    if b is None or b.is_natural:
        return f"ln({inner})"
    if style == "log":
        return f"log_{{{b.token}}}({inner}) ({_p_percent(b)} increase)"
    return f"{inner} ({_p_percent(b)} Increase)"


def _base_of(spec: TransformSpec, name: str) -> LogBase | None:
    if spec.kind == "identity":
        parsed = parse_column_name(name)
        if parsed is None:
            return None
        spec = parsed[1]
    b = spec.base if spec.kind.startswith("rescaled") else None
    return None if b is None or b == NATURAL else b


@dataclass
class TableSpec:
    """A multi-column regression table.

    ``row_labels`` maps term names to display labels; unmapped terms are
    auto-labelled. Terms sharing a display label share a row. ``terms``
    restricts and orders the displayed terms.
    """

    columns: list[tuple[FitResult, str | None]]
    row_labels: dict[str, str] = field(default_factory=dict)
    stars: tuple[tuple[float, str], ...] = DEFAULT_STARS
    notes: list[str] = field(default_factory=list)
    digits: int = 3
    label_style: str = "percent"
    terms: list[str] | None = None
    include_intercept: bool = False

    def __post_init__(self):
        _check_stars(self.stars)


def _layout(spec: TableSpec):
    if not spec.columns:
        raise ValueError("table has no columns")
    if spec.terms is not None:
        for term in spec.terms:
            if not any(term in fit.terms for fit, _ in spec.columns):
                raise KeyError(f"unknown term {term!r} in table spec")
    for term in spec.row_labels:
        if not any(term in fit.terms for fit, _ in spec.columns):
            raise KeyError(f"unknown term {term!r} in row labels")

    headers, bases = [], []
    rows: dict[str, list] = {}
    for ci, (fit, label) in enumerate(spec.columns):
        headers.append(label if label is not None else
                       auto_label(fit.outcome, fit.outcome_transform, spec.label_style))
        b = _base_of(fit.outcome_transform, fit.outcome)
        if b is not None and label is None:
            bases.append(b)
        terms = spec.terms if spec.terms is not None else list(fit.terms)
        for term in terms:
            if term not in fit.terms:
                continue
            if term == "(Intercept)" and not spec.include_intercept:
                continue
            col = fit.term_columns.get(term, term)
            tspec = fit.transform_of(term)
            if term in spec.row_labels:
                row = spec.row_labels[term]
            else:
                row = "Constant" if term == "(Intercept)" else auto_label(col, tspec, spec.label_style)
                b = _base_of(tspec, col)
                if b is not None:
                    bases.append(b)
            cells = rows.setdefault(row, [None] * len(spec.columns))
            if cells[ci] is not None:
                raise ValueError(f"two terms of column {ci + 1} map to row {row!r}")
            i = fit.index(term)
            cells[ci] = (float(fit.coefficients[i]), float(fit.standard_errors[i]),
                         float(fit.p_values[i]))
    if spec.include_intercept and "Constant" in rows:
        rows["Constant"] = rows.pop("Constant")

    body = []
    for label, cells in rows.items():
        top, bottom = [label], [""]
        for cell in cells:
            if cell is None:
                top.append("")
                bottom.append("")
            else:
                coef, se, p = cell
                top.append(format_number(coef, spec.digits) + star_marker(p, spec.stars))
                bottom.append(f"({format_number(se, spec.digits)})")
        body.append(top)
        body.append(bottom)
    nobs = ["Num.Obs."] + [str(fit.n) for fit, _ in spec.columns]

    seen = []
    for b in bases:
        if b not in seen:
            seen.append(b)
    return [""] + headers, body, nobs, seen


def _latex_escape(text: str) -> str:
    out = []
    for ch in text:
        if ch in "&%$#_{}":
            out.append("\\" + ch)
        elif ch == "~":
            out.append("\\textasciitilde{}")
        elif ch == "^":
            out.append("\\textasciicircum{}")
        elif ch == "\\":
            out.append("\\textbackslash{}")
        elif ch == "<":
            out.append("$<$")
        elif ch == ">":
            out.append("$>$")
        else:
            out.append(ch)
    return "".join(out)


def _latex_label(text: str) -> str:
    # keep log_{b} subscripts as math
    if text.startswith("log_{"):
        end = text.index("}")
        return f"$\\log_{{{text[5:end]}}}$" + _latex_escape(text[end + 1:])
    return _latex_escape(text)


def render_table(spec: TableSpec, fmt: str = "markdown") -> str:
    header, body, nobs, bases = _layout(spec)
    notes_plain = [star_note(spec.stars)] + [base_note(b) for b in bases] + list(spec.notes)

    if fmt == "markdown":
        def line(cells):
            return "| " + " | ".join(c.replace("|", "\\|") for c in cells) + " |"
        out = [line(header), "|:--" + "|:-:" * (len(header) - 1) + "|"]
        out += [line(r) for r in body]
        out.append(line(nobs))
        out.append("")
        out += notes_plain
        return "\n".join(out) + "\n"

    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(body)
        w.writerow(nobs)
        for note in notes_plain:
            w.writerow([note])
        return buf.getvalue()

    if fmt == "latex":
        ncol = len(header)
        out = [f"\\begin{{tabular}}[t]{{l{'c' * (ncol - 1)}}}", "\\toprule"]
        out.append(" & ".join(_latex_label(c) for c in header) + " \\\\")
        out.append("\\midrule")
        for r in body:
            out.append(" & ".join(_latex_label(c) for c in r) + "\\\\")
        out.append("\\midrule")
        out.append(" & ".join(nobs) + "\\\\")
        out.append("\\bottomrule")
        notes = [star_note(spec.stars, latex=True)]
        notes += [_latex_escape(n) for n in notes_plain[1:]]
        for i, note in enumerate(notes):
            strut = "\\rule{0pt}{1em}" if i == 0 else ""
            out.append(f"\\multicolumn{{{ncol}}}{{l}}{{{strut}{note}}}\\\\")
        out.append("\\end{tabular}")
        return "\n".join(out) + "\n"

    raise ValueError(f"unknown table format {fmt!r}; use markdown, latex or csv")


def _fixed6(x: float) -> str:
    text = f"{x:.6f}"
    return "0.000000" if text == "-0.000000" else text


def render_error_csv(curves) -> str:
    if not curves:
        raise ValueError("no error curves to render")
    grid = curves[0].ps
    for c in curves[1:]:
        if c.ps != grid:
            raise ValueError(f"curve {c.method_label} is on a different p grid")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p"] + [c.method_label for c in curves])
    for i, p in enumerate(grid):
        w.writerow([_fixed6(p)] + [_fixed6(c.grid[i][1]) for c in curves])
    return buf.getvalue()


def render_audit(results) -> str:
    """Plain-text report of recomputed case-study numbers."""
    blocks = []
    for r in results:
        s = r.scenario
        lines = [f"== {s.id} ==", s.description]
        width = max(len(line.quantity) for line in r.lines)
        mwidth = max(len(line.method) for line in r.lines)
        for line in r.lines:
            val = "unrecoverable" if line.value is None else f"{line.value:.4f}"
            lines.append(f"  {line.quantity:<{width}}  {line.method:<{mwidth}}  {val}")
        unit = "percentage points" if r.share_units else "outcome units"
        shown = r.discrepancy * 100 if r.share_units else r.discrepancy
        lines.append(f"  discrepancy (claimed - exact): {shown:.4f} {unit}")
        lines.append(f"  flag: {r.flag or 'none'}")
        for note in r.notes:
            lines.append(f"  note: {note}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
