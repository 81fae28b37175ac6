"""OLS over transformed columns, base rescaling of coefficients, and
synthetic data for linear-log, log-linear and log-log demonstrations.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import numpy as np

from . import tdist
from .interpret import Interpretation
from .logbase import NATURAL, DomainError, LogBase, TransformSpec, apply

__all__ = [
    "RankError",
    "Dataset",
    "ModelSpec",
    "FitResult",
    "SimParams",
    "DGPS",
    "term_name",
    "column_name",
    "parse_column_name",
    "transform_column",
    "apply_transforms",
    "fit_ols",
    "fit_model",
    "rescale_coefficient",
    "rhs_interpretation",
    "lhs_interpretation",
    "interpret_rhs",
    "interpret_lhs",
    "simulate_dataset",
]


class RankError(np.linalg.LinAlgError):
    """Design matrix is rank deficient or has too few observations."""


@dataclass(frozen=True)
class Dataset:
    columns: Mapping[str, np.ndarray]

    def __post_init__(self):
        cols = {}
        n = None
        for name, values in self.columns.items():
            arr = np.array(values, dtype=float)
            if arr.ndim != 1:
                raise ValueError(f"column {name!r} is not one-dimensional")
            if n is None:
                n = len(arr)
            elif len(arr) != n:
                raise ValueError(f"column {name!r} has {len(arr)} values, expected {n}")
            arr.flags.writeable = False
            cols[name] = arr
        object.__setattr__(self, "columns", MappingProxyType(cols))

    @property
    def n(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def __getitem__(self, name):
        try:
            return self.columns[name]
        except KeyError:
            raise KeyError(f"no column {name!r}; available: {', '.join(self.columns)}") from None

    @classmethod
    def read_csv(cls, source) -> "Dataset":
        """Read a UTF-8, comma-delimited CSV with a header row."""
        if isinstance(source, (str, Path)):
            with open(source, newline="", encoding="utf-8") as fh:
                return cls._from_reader(csv.reader(fh))
        return cls._from_reader(csv.reader(source))

    @classmethod
    def _from_reader(cls, reader) -> "Dataset":
        try:
            header = next(reader)
        except StopIteration:
            raise DomainError("CSV input is empty; a header row is required") from None
        values = {h: [] for h in header}
        if len(values) != len(header):
            raise DomainError("CSV header contains duplicate column names")
        for row_no, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != len(header):
                raise DomainError(f"row {row_no} has {len(row)} fields, header has {len(header)}")
            for h, cell in zip(header, row):
                try:
                    values[h].append(float(cell))
                except ValueError:
                    raise DomainError(f"row {row_no}, column {h!r}: {cell!r} is not a number") from None
        return cls(values)

    def to_csv(self, target=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.names)
        for row in zip(*self.columns.values()):
            w.writerow([repr(float(v)) for v in row])
        text = buf.getvalue()
        if target is not None:
            Path(target).write_text(text, encoding="utf-8")
        return text


@dataclass(frozen=True)
class ModelSpec:
    outcome: tuple[str, TransformSpec]
    predictors: tuple[tuple[str, TransformSpec], ...]
    intercept: bool = True

    def __post_init__(self):
        object.__setattr__(self, "predictors", tuple(self.predictors))
        if not self.predictors and not self.intercept:
            raise ValueError("model has no terms")


def _p_text(b: LogBase) -> str:
    return repr(b.p)


def term_name(column: str, spec: TransformSpec) -> str:
    """Canonical formula text for a transformed column, e.g. ``log(x, p=0.1)``."""
    kind = spec.kind
    if kind == "identity":
        return column
    if kind == "natural_log":
        return f"log({column})"
    if kind == "asinh":
        return f"asinh({column})"
    fn = "log" if kind == "rescaled_log" else "log1p"
    if spec.base.is_natural:
        return f"{fn}({column})"
    return f"{fn}({column}, p={_p_text(spec.base)})"


def column_name(column: str, spec: TransformSpec) -> str:
    """Name of a materialized transformed column: ``<col>__<kind>[_<base>]``."""
    if spec.base is None:
        return f"{column}__{spec.kind}"
    return f"{column}__{spec.kind}_{spec.base.token}"


_COLUMN_RE = re.compile(
    r"^(?P<col>.+?)__(?P<kind>natural_log|asinh|identity|rescaled_log1p|rescaled_log)"
    r"(?:_(?P<base>e|[0-9.eE+-]+))?$"
)


def parse_column_name(name: str) -> tuple[str, TransformSpec] | None:
    """Inverse of :func:`column_name`; None if the name does not follow it."""
    m = _COLUMN_RE.match(name)
    if not m:
        return None
    kind, base = m["kind"], m["base"]
    try:
        if kind.startswith("rescaled"):
            if base is None:
                return None
            b = NATURAL if base == "e" else LogBase(float(base) - 1.0)
            return m["col"], TransformSpec(kind, b)
        if base is not None:
            return None
        return m["col"], TransformSpec(kind)
    except (ValueError, DomainError):
        return None


def transform_column(values, spec: TransformSpec, column: str = "") -> np.ndarray:
    out = np.empty(len(values))
    for i, v in enumerate(values):
        try:
            out[i] = apply(float(v), spec)
        except DomainError as exc:
            where = f"column {column!r}, " if column else ""
            raise DomainError(f"{where}row {i + 1}: {exc}") from None
    return out


def apply_transforms(data: Dataset, spec: ModelSpec):
    """Design matrix (intercept first when enabled), response and term names."""
    y_col, y_spec = spec.outcome
    y = transform_column(data[y_col], y_spec, y_col)
    cols, names = [], []
    if spec.intercept:
        cols.append(np.ones(data.n))
        names.append("(Intercept)")
    for col, tspec in spec.predictors:
        cols.append(transform_column(data[col], tspec, col))
        names.append(term_name(col, tspec))
    design = np.column_stack(cols) if cols else np.empty((data.n, 0))
    return design, y, names


@dataclass(frozen=True)
class FitResult:
    terms: tuple[str, ...]
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    n: int
    residual_variance: float
    outcome: str = "y"
    outcome_transform: TransformSpec = field(default_factory=lambda: TransformSpec("identity"))
    term_transforms: Mapping[str, TransformSpec] = field(default_factory=dict)
    term_columns: Mapping[str, str] = field(default_factory=dict)

    @property
    def df_resid(self) -> int:
        return self.n - len(self.terms)

    def index(self, term: str) -> int:
        try:
            return self.terms.index(term)
        except ValueError:
            raise KeyError(f"unknown term {term!r}; fit has {', '.join(self.terms)}") from None

    def coef(self, term: str) -> float:
        return float(self.coefficients[self.index(term)])

    def se(self, term: str) -> float:
        return float(self.standard_errors[self.index(term)])

    def pvalue(self, term: str) -> float:
        return float(self.p_values[self.index(term)])

    def transform_of(self, term: str) -> TransformSpec:
        self.index(term)
        return self.term_transforms.get(term, TransformSpec("identity"))


def _readonly(a):
    a = np.asarray(a, dtype=float)
    a.flags.writeable = False
    return a


def fit_ols(design, response, names=None, **meta) -> FitResult:
    """Classical OLS via a Householder QR decomposition."""
    X = np.asarray(design, dtype=float)
    y = np.asarray(response, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValueError(f"design {X.shape} and response {y.shape} do not conform")
    n, k = X.shape
    names = tuple(names) if names is not None else tuple(f"x{j}" for j in range(k))
    if len(names) != k:
        raise ValueError("one name per design column is required")
    if n <= k:
        raise RankError(f"insufficient data: {n} observations for {k} parameters")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise DomainError("design and response must be finite")

    Q, R = np.linalg.qr(X, mode="reduced")
    diag = np.abs(np.diag(R))
    for j in range(k):
        # a column in the span of earlier columns leaves a ~0 pivot
        norm = np.linalg.norm(X[:, j])
        if norm == 0 or diag[j] <= 1e-10 * norm:
            raise RankError(f"design is rank deficient: column {names[j]!r} is "
                            "a linear combination of earlier columns")

    beta = np.linalg.solve(R, Q.T @ y)
    resid = y - X @ beta
    df = n - k
    s2 = float(resid @ resid) / df
    r_inv = np.linalg.solve(R, np.eye(k))
    se = np.sqrt(s2 * np.sum(r_inv * r_inv, axis=1))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, beta / np.where(se > 0, se, 1.0),
                     np.where(beta == 0, np.nan, np.copysign(np.inf, beta)))
    pv = np.array([tdist.two_sided_p(float(ti), df) if not math.isnan(ti) else 1.0 for ti in t])
    return FitResult(names, _readonly(beta), _readonly(se), _readonly(t), _readonly(pv),
                     n, s2, **meta)


def fit_model(data: Dataset, spec: ModelSpec) -> FitResult:
    design, y, names = apply_transforms(data, spec)
    offset = 1 if spec.intercept else 0
    transforms = {names[offset + i]: t for i, (_, t) in enumerate(spec.predictors)}
    columns = {names[offset + i]: c for i, (c, _) in enumerate(spec.predictors)}
    return fit_ols(design, y, names, outcome=spec.outcome[0],
                   outcome_transform=spec.outcome[1],
                   term_transforms=MappingProxyType(transforms),
                   term_columns=MappingProxyType(columns))


def rescale_coefficient(beta: float, from_base: LogBase, to_base: LogBase) -> float:
    """Coefficient on ``log_to(X)`` given the coefficient on ``log_from(X)``.

    Applies unchanged to the coefficient's standard error.
    """
    if not isinstance(from_base, LogBase) or not isinstance(to_base, LogBase):
        raise TypeError("both bases must be LogBase instances")
    return beta * to_base.ln_base / from_base.ln_base


def rhs_interpretation(beta: float, term_base: LogBase, target: LogBase | None = None) -> Interpretation:
    """Exact reading of a log predictor: a ``p`` increase in X moves Y by ``effect``."""
    target = target or term_base
    effect = rescale_coefficient(beta, term_base, target)
    return Interpretation.build(1.0, target, target.p, target.p, effect=effect)


def lhs_interpretation(beta: float, outcome_base: LogBase, units: float = 1.0) -> Interpretation:
    """Exact and approximate proportional change in Y for ``units`` of X."""
    change = beta * units
    exact = math.expm1(change * outcome_base.ln_base)
    approx = change if outcome_base.is_natural else change * outcome_base.p
    return Interpretation.build(change, outcome_base, exact, approx)


def _log_base_of(spec: TransformSpec, what: str) -> LogBase:
    if spec.kind not in ("natural_log", "rescaled_log"):
        raise ValueError(f"{what} is not log-transformed (transform {spec.kind!r})")
    return spec.effective_base


def interpret_rhs(fit: FitResult, term: str, b: LogBase | None = None) -> Interpretation:
    base = _log_base_of(fit.transform_of(term), f"term {term!r}")
    return rhs_interpretation(fit.coef(term), base, b)


def interpret_lhs(fit: FitResult, term: str, b: LogBase | None = None,
                  units: float = 1.0) -> Interpretation:
    base = _log_base_of(fit.outcome_transform, f"outcome {fit.outcome!r}")
    if b is not None and b != base:
        raise ValueError(f"outcome was fit with {base}, not {b}")
    return lhs_interpretation(fit.coef(term), base, units)


@dataclass(frozen=True)
class SimParams:
    beta0: float
    beta1: float
    sigma: float
    p: float = 0.1
    # X = exp(log_mean + log_sd * z)
    log_mean: float = 1.0
    log_sd: float = 1.0


DGPS = {
    "linear-log": SimParams(beta0=1.0, beta1=0.2, sigma=1.0),
    "log-linear": SimParams(beta0=1.0, beta1=2.0, sigma=1.0, log_mean=0.0, log_sd=0.5),
    "log-log": SimParams(beta0=1.0, beta1=0.46, sigma=1.0),
}


def simulate_dataset(seed: int, n: int = 1000, dgp: str = "linear-log",
                     params: SimParams | None = None) -> Dataset:
    """Seeded synthetic data whose DGP matches the fitted model exactly.

    Uses numpy's PCG64 generator seeded with ``seed``. Draws, in order:
    ``n`` standard normals for log X, then ``n`` standard normals for the
    noise, which is added on the transformed outcome scale
    (``log_{1+p}`` for log outcomes).
    """
    if dgp not in DGPS:
        raise ValueError(f"unknown DGP {dgp!r}; choose from {', '.join(DGPS)}")
    if n < 10:
        raise ValueError(f"n must be at least 10, got {n}")
    prm = params or DGPS[dgp]
    b = LogBase(prm.p)
    rng = np.random.Generator(np.random.PCG64(seed))
    x = np.exp(prm.log_mean + prm.log_sd * rng.standard_normal(n))
    noise = prm.sigma * rng.standard_normal(n)
    log_x = np.log(x) / b.ln_base
    if dgp == "linear-log":
        y = prm.beta0 + prm.beta1 * log_x + noise
    elif dgp == "log-linear":
        y = np.exp((prm.beta0 + prm.beta1 * x + noise) * b.ln_base)
    else:
        y = np.exp((prm.beta0 + prm.beta1 * log_x + noise) * b.ln_base)
    return Dataset({"x": x, "y": y})
