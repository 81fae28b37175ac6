"""Interpretation error and exact recovery for ``ln(1+X)`` on zero-capable data.

A one-unit change in ``ln(1+X)/ln(1+p)`` is a ``(1+p)`` proportional change
in ``1+X``, not in ``X``. The functions below measure the resulting error in
the proportional change of ``X`` and recover the exact change at a chosen
evaluation point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .logbase import DomainError

__all__ = [
    "LARGE_SAMPLE_NOTE",
    "ZeroContext",
    "ElasticityReading",
    "rescaled_zero_error",
    "traditional_zero_error",
    "combined_traditional_error",
    "exact_prop_change_x",
    "exact_prop_change_y",
    "elasticity_recovery",
    "delta_method_se",
]

LARGE_SAMPLE_NOTE = (
    "Delta-method standard errors are first-order approximations and are "
    "reliable in large samples only. The correction does not account for "
    "zero-censoring of the variables."
)


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive and finite, got {value}")


def rescaled_zero_error(p: float, x: float) -> float:
    _positive("p", p)
    _positive("x", x)
    return p / x


def traditional_zero_error(p: float, x: float) -> float:
    _positive("p", p)
    _positive("x", x)
    return math.expm1(p) / x


def combined_traditional_error(p: float, x: float) -> float:
    """Error when ``e^p`` is additionally approximated by ``1+p``."""
    _positive("p", p)
    _positive("x", x)
    return (math.expm1(p) - p) + math.expm1(p) / x


def exact_prop_change_x(p_x: float, x0: float) -> float:
    _positive("p_x", p_x)
    _positive("x0", x0)
    return 1.0 + p_x + p_x / x0


def exact_prop_change_y(beta: float, p_y: float, y0: float) -> float:
    _positive("p_y", p_y)
    _positive("y0", y0)
    g = (1.0 + p_y) ** beta
    return g + (g - 1.0) / y0


@dataclass(frozen=True)
class ZeroContext:
    """Bases and evaluation point for a model in ``ln(1+X)`` / ``ln(1+Y)``.

    ``p_y`` defaults to ``p_x`` when the same base is used on both sides.
    """

    p_x: float
    x0: float
    y0: float | None = None
    p_y: float | None = None

    def __post_init__(self):
        _positive("p_x", self.p_x)
        _positive("x0", self.x0)
        if self.y0 is not None:
            _positive("y0", self.y0)
        if self.p_y is None:
            object.__setattr__(self, "p_y", self.p_x)
        _positive("p_y", self.p_y)


@dataclass(frozen=True)
class ElasticityReading:
    prop_change_x: float
    prop_change_y: float
    se_prop_change_y: float
    note: str = LARGE_SAMPLE_NOTE


def delta_method_se(beta: float, se_beta: float, p_y: float, y0: float) -> float:
    """Standard error of the exact proportional change in Y.

    The change is ``f(beta) = (1+p_y)^beta * (1 + 1/y0) - 1/y0``, so the
    first-order standard error is ``|f'(beta)| * se_beta``.
    """
    if not se_beta >= 0:
        raise DomainError(f"se_beta must be nonnegative, got {se_beta}")
    _positive("p_y", p_y)
    _positive("y0", y0)
    slope = (1.0 + p_y) ** beta * math.log1p(p_y) * (1.0 + 1.0 / y0)
    return abs(slope) * se_beta


def elasticity_recovery(beta: float, se_beta: float, ctx: ZeroContext) -> ElasticityReading:
    if ctx.y0 is None:
        raise DomainError("elasticity recovery needs an outcome evaluation point y0")
    return ElasticityReading(
        prop_change_x=exact_prop_change_x(ctx.p_x, ctx.x0),
        prop_change_y=exact_prop_change_y(beta, ctx.p_y, ctx.y0),
        se_prop_change_y=delta_method_se(beta, se_beta, ctx.p_y, ctx.y0),
    )
