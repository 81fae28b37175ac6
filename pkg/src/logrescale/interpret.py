"""Exact and approximate proportional-change readings of log changes.

All errors here are proportions (approximate minus exact proportional
change); percentage-point scaling happens only when rendering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .logbase import DomainError, LogBase

__all__ = [
    "Interpretation",
    "ErrorCurve",
    "Method",
    "BaseQuality",
    "exact_percent_change",
    "traditional_error",
    "rescaled_error",
    "generic_base_error",
    "error_curve",
    "default_error_curves",
    "crossover",
    "base_quality_scan",
    "golden_section_max",
]


@dataclass(frozen=True)
class Interpretation:
    """A linear log change with its exact and approximate readings.

    ``effect`` is the associated change in the outcome when the log term is
    a predictor; it is None for outcome-side readings.
    """

    linear_change: float
    base: LogBase
    exact_prop: float
    approx_prop: float
    error: float
    effect: float | None = None

    @classmethod
    def build(cls, linear_change, base, exact_prop, approx_prop, effect=None):
        return cls(linear_change, base, exact_prop, approx_prop,
                   approx_prop - exact_prop, effect)


def exact_percent_change(b: LogBase, units: float) -> float:
    if not math.isfinite(units):
        raise DomainError(f"units must be finite, got {units}")
    return math.expm1(units * b.ln_base)


def traditional_error(p: float) -> float:
    return (1.0 + p) - math.exp(p)


def rescaled_error(b: LogBase, p: float) -> float:
    # p / p_b log units read as a p proportional change
    return (1.0 + p) - b.base ** (p / b.p)


def _check_base(base: float) -> float:
    if not (math.isfinite(base) and base > 0 and base != 1):
        raise DomainError(f"base must be positive and not 1, got {base}")
    return float(base)


def generic_base_error(base: float, p: float) -> float:
    base = _check_base(base)
    if base == math.e:
        return traditional_error(p)
    return (1.0 + p) - base ** p


@dataclass(frozen=True)
class Method:
    """Which approximation an error curve tabulates."""

    kind: str  # "traditional" | "rescaled" | "generic"
    base: LogBase | float | None = None

    @classmethod
    def traditional(cls):
        return cls("traditional")

    @classmethod
    def rescaled(cls, b: LogBase):
        return cls("rescaled", b)

    @classmethod
    def generic(cls, base: float):
        return cls("generic", _check_base(base))

    @property
    def label(self) -> str:
        if self.kind == "traditional":
            return "error_traditional"
        if self.kind == "rescaled":
            tag = self.base.token
        else:
            tag = "e" if self.base == math.e else repr(self.base)
        return f"error_{'base' if self.kind == 'rescaled' else 'generic'}_{tag.replace('.', '_')}"

    def __call__(self, p: float) -> float:
        if self.kind == "traditional":
            return traditional_error(p)
        if self.kind == "rescaled":
            return rescaled_error(self.base, p)
        if self.kind == "generic":
            return generic_base_error(self.base, p)
        raise ValueError(f"unknown method kind {self.kind!r}")


@dataclass(frozen=True)
class ErrorCurve:
    method_label: str
    grid: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ps = [p for p, _ in self.grid]
        if any(b <= a for a, b in zip(ps, ps[1:])):
            raise ValueError("error curve grid must be strictly increasing in p")
        if not all(math.isfinite(e) for _, e in self.grid):
            raise ValueError(f"non-finite error in curve {self.method_label}")

    @property
    def ps(self):
        return [p for p, _ in self.grid]

    @property
    def errors(self):
        return [e for _, e in self.grid]


def _grid(p_min, p_max, step):
    if not (math.isfinite(p_min) and math.isfinite(p_max) and math.isfinite(step)):
        raise ValueError("grid bounds and step must be finite")
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if not p_min < p_max:
        raise ValueError(f"need p_min < p_max, got [{p_min}, {p_max}]")
    count = int(math.floor((p_max - p_min) / step + 1e-9)) + 1
    if count < 2:
        raise ValueError("grid has fewer than two points")
    # rounding keeps grid points like 0.1 exact instead of 0.1000000000000001
    return [round(p_min + i * step, 12) for i in range(count)]


def error_curve(method: Method, p_min: float = 0.0, p_max: float = 0.5,
                step: float = 0.005) -> ErrorCurve:
    return ErrorCurve(method.label, tuple((p, method(p)) for p in _grid(p_min, p_max, step)))


def default_error_curves(p_min=0.0, p_max=0.5, step=0.005) -> list[ErrorCurve]:
    """Traditional, base-1.1 and base-1.4 error curves on a shared grid."""
    methods = [Method.traditional(), Method.rescaled(LogBase(0.1)), Method.rescaled(LogBase(0.4))]
    return [error_curve(m, p_min, p_max, step) for m in methods]


def crossover(b: LogBase, tol: float = 1e-9) -> float:
    """Smallest p > 0 where the traditional and rescaled error magnitudes meet.

    Below the crossover the traditional reading is more accurate; the rescaled
    error is linear in p near 0 while the traditional one is quadratic.
    """
    if b.p <= 0:
        raise DomainError(f"crossover needs a base above 1 (p > 0), got p={b.p}")

    def gap(p):
        return abs(traditional_error(p)) - abs(rescaled_error(b, p))

    n = 4000
    lo = None
    prev_p, prev_g = None, None
    for i in range(1, n + 1):
        p = b.p * i / n
        g = gap(p)
        if prev_g is not None and (prev_g < 0) != (g < 0):
            lo = prev_p
            break
        if g == 0:
            return p
        prev_p, prev_g = p, g
    if lo is None:
        raise ArithmeticError(f"could not bracket a crossover in (0, {b.p}) for {b}")
    hi = lo + b.p / n
    g_lo = gap(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid = gap(mid)
        if (g_mid < 0) == (g_lo < 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_section_max(f, a: float, b: float, tol: float = 1e-6) -> float:
    """Location of the maximum of a unimodal ``f`` on [a, b]."""
    invphi = (math.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


@dataclass(frozen=True)
class BaseQuality:
    base: float
    max_abs_error: float
    argmax_p: float
    # |error| at the reference p relative to base e; below 1 beats e there
    ratio_to_e: float
    reference_p: float


def base_quality_scan(bases, p_max: float, grid_step: float = 1e-3,
                      reference_p: float = 0.1) -> list[BaseQuality]:
    """Worst absolute traditional-style error for each base over [0, p_max]."""
    if not p_max > 0:
        raise ValueError(f"p_max must be positive, got {p_max}")
    checked = [_check_base(b) for b in bases]
    grid = _grid(0.0, p_max, grid_step)
    if grid[-1] < p_max:
        grid.append(p_max)
    out = []
    for base in checked:
        def err(p, base=base):
            return abs(generic_base_error(base, p))

        values = [err(p) for p in grid]
        i = max(range(len(grid)), key=values.__getitem__)
        best_p, best = grid[i], values[i]
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
        if lo < hi:
            p_ref = golden_section_max(err, lo, hi)
            if err(p_ref) > best:
                best_p, best = p_ref, err(p_ref)
        e_ref = abs(traditional_error(reference_p))
        ratio = err(reference_p) / e_ref if e_ref else math.nan
        out.append(BaseQuality(base, best, best_p, ratio, reference_p))
    return out
