"""Validated logarithm bases and the scalar transforms built on them.

A base is described by the proportional change ``p`` it encodes, so that a
one-unit step in ``log_{1+p}(x)`` is exactly a ``(1+p)`` proportional change
in ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "DomainError",
    "LogBase",
    "TransformSpec",
    "KINDS",
    "NATURAL",
    "make_base",
    "base_from_value",
    "transform",
    "inverse_transform",
    "transform_log1p",
    "transform_asinh",
    "apply",
]


class DomainError(ValueError):
    """Input outside the domain of a transform or formula."""


@dataclass(frozen=True)
class LogBase:
    p: float
    base: float = field(init=False)

    def __post_init__(self):
        p = self.p
        if not isinstance(p, (int, float)) or isinstance(p, bool):
            raise TypeError(f"p must be a real number, got {type(p).__name__}")
        if not math.isfinite(p):
            raise DomainError(f"p must be finite, got {p}")
        if p <= -1:
            raise DomainError(f"p={p} gives base 1+p={1 + p} <= 0; need p > -1")
        if p == 0:
            raise DomainError("p=0 gives base 1, for which the logarithm is undefined")
        object.__setattr__(self, "p", float(p))
        object.__setattr__(self, "base", 1.0 + float(p))

    @property
    def ln_base(self) -> float:
        return math.log(self.base)

    @property
    def is_natural(self) -> bool:
        return self.p == math.e - 1

    @property
    def token(self) -> str:
        """Short text form of the base: ``e`` or the shortest round-trip repr."""
        if self.is_natural:
            return "e"
        text = repr(self.base)
        return text[:-2] if text.endswith(".0") else text

    @property
    def percent(self) -> str:
        return f"{self.p * 100:g}%"

    def __str__(self):
        return f"base-{self.token}"


NATURAL = LogBase(math.e - 1)


def make_base(p: float) -> LogBase:
    return LogBase(p)


def base_from_value(base: float | str) -> LogBase:
    """Build a LogBase from the base itself (``1.1``, ``2``, ``"e"``)."""
    if isinstance(base, str):
        if base.strip().lower() == "e":
            return NATURAL
        base = float(base)
    return LogBase(base - 1.0)


def transform(x: float, b: LogBase) -> float:
    if not x > 0:
        raise DomainError(
            f"log transform needs x > 0, got {x!r}; use the log1p transform "
            "for data with zeros"
        )
    return math.log(x) / b.ln_base


def inverse_transform(u: float, b: LogBase) -> float:
    if not math.isfinite(u):
        raise DomainError(f"u must be finite, got {u}")
    try:
        return math.exp(u * b.ln_base)
    except OverflowError:
        raise DomainError(f"{b.token}**{u} is out of floating point range") from None


def transform_log1p(x: float, b: LogBase) -> float:
    if not x >= 0:
        raise DomainError(f"log1p transform needs x >= 0, got {x!r}")
    return math.log1p(x) / b.ln_base


def transform_asinh(x: float) -> float:
    if not math.isfinite(x):
        raise DomainError(f"asinh transform needs finite x, got {x!r}")
    # reflect so the sum inside the log never cancels
    a = abs(x)
    if a > 1e8:
        r = math.log(2.0) + math.log(a)
    else:
        r = math.log1p(a + a * a / (1.0 + math.sqrt(a * a + 1.0)))
    return math.copysign(r, x) if x != 0 else 0.0


KINDS = ("natural_log", "rescaled_log", "rescaled_log1p", "asinh", "identity")
_RESCALED = ("rescaled_log", "rescaled_log1p")


@dataclass(frozen=True)
class TransformSpec:
    """Which transform to apply to a column.

    ``rescaled_log`` and ``rescaled_log1p`` carry a base; the other kinds
    must not.
    """

    kind: str
    base: LogBase | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown transform kind {self.kind!r}; expected one of {KINDS}")
        if self.kind in _RESCALED and self.base is None:
            raise ValueError(f"{self.kind} requires a base")
        if self.kind not in _RESCALED and self.base is not None:
            raise ValueError(f"{self.kind} does not take a base")

    @property
    def is_log(self) -> bool:
        return self.kind in ("natural_log", "rescaled_log", "rescaled_log1p")

    @property
    def effective_base(self) -> LogBase | None:
        """The log base the transform works in, or None for asinh/identity."""
        if self.kind == "natural_log":
            return NATURAL
        return self.base

    def __call__(self, x: float) -> float:
        return apply(x, self)


def apply(x: float, spec: TransformSpec) -> float:
    kind = spec.kind
    if kind == "identity":
        return float(x)
    if kind == "natural_log":
        if not x > 0:
            raise DomainError(
                f"log transform needs x > 0, got {x!r}; use the log1p transform "
                "for data with zeros"
            )
        return math.log(x)
    if kind == "rescaled_log":
        return transform(x, spec.base)
    if kind == "rescaled_log1p":
        return transform_log1p(x, spec.base)
    return transform_asinh(x)
