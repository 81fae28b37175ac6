"""Built-in case studies: published log coefficients and their claimed
interpretations, recomputed exactly.

Only numbers printed alongside the published claims are hardcoded here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal

from .logbase import NATURAL, LogBase
from .regress import rescale_coefficient

__all__ = ["AuditScenario", "AuditLine", "AuditResult", "SCENARIOS", "run_audit", "get_scenario"]


@dataclass(frozen=True)
class AuditScenario:
    """A published coefficient on a log predictor and how it was read.

    ``claimed_effect`` is the published effect of a ``claimed_change``
    proportional increase in the predictor. With ``reference_mean`` the
    effect is also expressed relative to the outcome mean; with
    ``share_units`` the coefficient is already relative to the mean.
    """

    id: str
    published_beta: float
    claimed_change: float
    claimed_effect: float
    published_base: LogBase | None = None
    reference_mean: float | None = None
    share_units: bool = False
    description: str = ""
    notes: tuple[str, ...] = ()
    # effects rounded before dividing by the mean
    rounded_effects: tuple[float, ...] = ()
    # further (change, claimed effect or None) pairs reported by the study
    extra_changes: tuple[tuple[float, float | None], ...] = ()

    def __post_init__(self):
        if not self.claimed_change > -1:
            raise ValueError(f"claimed change must exceed -1, got {self.claimed_change}")

    @property
    def base(self) -> LogBase:
        return self.published_base or NATURAL


@dataclass(frozen=True)
class AuditLine:
    key: str
    quantity: str
    method: str
    value: float | None


@dataclass(frozen=True)
class AuditResult:
    scenario: AuditScenario
    lines: tuple[AuditLine, ...]
    discrepancy: float
    share_units: bool
    flag: str | None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def value(self, key: str) -> float | None:
        for line in self.lines:
            if line.key == key:
                return line.value
        raise KeyError(f"scenario {self.scenario.id} has no value {key!r}")


def _decimals(x: float) -> int:
    return max(0, -Decimal(repr(x)).normalize().as_tuple().exponent)


def _pct(p: float) -> str:
    return f"{p * 100:g}%"


def run_audit(s: AuditScenario) -> AuditResult:
    c = s.claimed_change
    target = LogBase(c)
    base = s.base
    exact = rescale_coefficient(s.published_beta, base, target)
    # reading c log units of the published scale as a c proportional change
    traditional = s.published_beta * c / (1.0 if base.is_natural else base.p)
    label = f"effect of +{_pct(c)}"
    tname = f"base-{target.token} coefficient (exact)"
    lines = [
        AuditLine("published_beta", "coefficient", f"published, {base} log", s.published_beta),
        AuditLine("claimed_effect", label, "published claim", s.claimed_effect),
        AuditLine("traditional_effect", label, "traditional approx", traditional),
        AuditLine("exact_effect", label, tname, exact),
    ]

    def share(v):
        if s.reference_mean is not None:
            return abs(v) / s.reference_mean
        return abs(v)

    has_share = s.share_units or s.reference_mean is not None
    if has_share:
        sq = "share of mean"
        lines += [
            AuditLine("claimed_share", sq, "published claim", share(s.claimed_effect)),
            AuditLine("traditional_share", sq, "traditional approx", share(traditional)),
            AuditLine("exact_share", sq, tname, share(exact)),
        ]
        for r in s.rounded_effects:
            lines.append(AuditLine(f"rounded_share_{r!r}", sq,
                                   f"traditional approx, effect rounded to {r:g}", share(r)))
        discrepancy = share(s.claimed_effect) - share(exact)
    else:
        discrepancy = s.claimed_effect - exact

    notes = list(s.notes)
    for c2, claimed2 in s.extra_changes:
        b2 = LogBase(c2)
        direct = rescale_coefficient(s.published_beta, base, b2)
        shown = round(exact, 4)
        via = rescale_coefficient(shown, target, b2)
        key = f"{c2:g}"
        l2 = f"effect of +{_pct(c2)}"
        lines.append(AuditLine(f"claimed_effect_{key}", l2, "published claim", claimed2))
        lines.append(AuditLine(f"exact_effect_{key}", l2, f"base-{b2.token} coefficient (exact)", direct))
        lines.append(AuditLine(f"rescaled_effect_{key}", l2,
                               f"{shown:g} rescaled from base-{target.token}", via))
        if claimed2 is None:
            notes.append(f"the published {_pct(c2)} figure cannot be recovered; exact value is {direct:.4f}")

    flag = _flag(s.claimed_effect, exact)
    return AuditResult(s, tuple(lines), discrepancy, has_share, flag, tuple(notes))


def _flag(claimed: float, exact: float) -> str | None:
    if claimed == exact:
        return None
    if abs(exact) > 2 * abs(claimed):
        return (f"exact effect {exact:.4f} is more than twice as large as the "
                f"claimed {claimed:g}")
    d = _decimals(claimed)
    rounded = round(exact, d)
    if rounded == claimed:
        return None
    if abs(claimed - exact) <= 10.0 ** -d:
        return f"rounding slip: exact {exact:.4f} rounds to {rounded:.{d}f}, not {claimed:.{d}f}"
    if abs(claimed) > abs(exact):
        return "approximation overstates the effect"
    return "approximation understates the effect"


SCENARIOS = {
    s.id: s
    for s in [
        AuditScenario(
            id="eren2019-creation",
            published_beta=-1.083,
            claimed_change=0.1,
            claimed_effect=-0.1083,
            reference_mean=2.889,
            rounded_effects=(-0.11,),
            description="Eren, Onda & Unel (2019): business creation rate on ln(FDI); "
                        "a 10% FDI increase read as a .1083 drop, roughly 4% of the mean 2.889.",
            notes=("the study may have rounded the effect to .11 first; both share variants are shown",),
        ),
        AuditScenario(
            id="eren2019-destruction",
            published_beta=-0.255,
            claimed_change=0.1,
            claimed_effect=-0.0255,
            share_units=True,
            description="Eren, Onda & Unel (2019): business destruction; a 10% FDI increase "
                        "read as a 2.55% drop relative to the mean.",
            notes=("coefficient is backed out from the published 2.55% share (.0255 / .1)",),
        ),
        AuditScenario(
            id="kim2010-bmi",
            published_beta=-3.3,
            claimed_change=0.1,
            claimed_effect=-0.32,
            extra_changes=((1.0, -2.29),),
            description="Kim & Leigh (2010): BMI on ln(wage), coefficient -3.3; "
                        "a 10% wage increase read as a 0.32 BMI decline.",
        ),
        AuditScenario(
            id="lin2018-bmi",
            published_beta=0.085,
            claimed_change=0.1,
            claimed_effect=0.004,
            extra_changes=((0.5, None),),
            description="Lin, Teymourian & Tursini (2018): BMI on ln(imports), coefficient .085; "
                        "a 10% import increase read as a 0.004 BMI increase.",
        ),
    ]
}


def get_scenario(scenario_id: str) -> AuditScenario:
    try:
        return SCENARIOS[scenario_id]
    except KeyError:
        raise KeyError(f"unknown scenario {scenario_id!r}; available: "
                       f"{', '.join(SCENARIOS)}") from None

