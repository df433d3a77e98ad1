"""Scaling experiments: configuration, the S / (C0 X Y) pipeline and its reports."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .arith import FactorTables, build_factor_tables
from .charsum import mean_square
from .errors import ConfigurationError
from .lfunctions import LSeriesAccessor
from .mainterm import ContourResult, ContourSpec, c0_contour, diagonal_scan
from .modform import EigenformCoefficients, lambda_table
from .windows import SmoothWindow

CSV_COLUMNS = ("X", "Y", "S_brute", "C0", "predicted", "ratio", "abs_dev", "seconds")


class Workspace:
    """Lazily built tables shared between checks."""

    def __init__(
        self,
        coeff_limit: int = 10**5,
        factor_limit: int = 2**18 + 1,
        Phi: SmoothWindow | None = None,
        Psi: SmoothWindow | None = None,
        workers: int = 1,
        cache_dir=None,
    ):
        self.coeff_limit = coeff_limit
        self.factor_limit = factor_limit
        self.Phi = Phi or SmoothWindow()
        self.Psi = Psi or SmoothWindow()
        self.workers = workers
        self.cache_dir = cache_dir
        self._contour: dict[float, ContourResult] = {}

    @cached_property
    def coeffs(self) -> EigenformCoefficients:
        return lambda_table(self.coeff_limit, cache_dir=self.cache_dir)

    @cached_property
    def tables(self) -> FactorTables:
        return build_factor_tables(max(self.factor_limit, self.coeff_limit))

    @cached_property
    def acc(self) -> LSeriesAccessor:
        return LSeriesAccessor.from_eigenform(self.coeffs)

    def contour(self, epsilon: float = 0.08) -> ContourResult:
        if epsilon not in self._contour:
            spec = ContourSpec(epsilon=epsilon)
            self._contour[epsilon] = c0_contour(self.Phi, self.Psi, spec, self.acc, self.coeffs, self.tables)
        return self._contour[epsilon]


def decay_slope(Xs, devs) -> float:
    """Least-squares slope of log|ratio - 1| against log X."""
    Xs = np.asarray(Xs, dtype=float)
    devs = np.asarray(devs, dtype=float)
    if Xs.size < 2 or np.any(devs <= 0):
        return float("nan")
    return float(np.polyfit(np.log(Xs), np.log(devs), 1)[0])


# ---------------------------------------------------------------------------
# configuration


@dataclass
class ExperimentConfig:
    """Settings of a scaling run; every field has a ``key=value`` spelling.

    ``y_rule`` is ``sqrt_of_x``, ``fixed:<Y>`` or ``power:<theta>`` (Y = X^theta,
    rounded up). Supports are written ``a,b``; lists are comma separated.
    """

    x_values: list[float] = field(default_factory=lambda: [2.0**e for e in range(14, 19)])
    y_rule: str = "sqrt_of_x"
    phi_support: tuple[float, float] = (0.5, 1.0)
    psi_support: tuple[float, float] = (0.5, 1.0)
    method: str = "sieved"
    c0_method: str = "contour"
    epsilon: float = 0.08
    diag_y: list[float] = field(default_factory=lambda: [2.0**e for e in range(10, 15)])
    workers: int = 1
    tau_cache: str | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not self.x_values:
            raise ConfigurationError("x_values is empty")
        if any(x < 4 for x in self.x_values):
            raise ConfigurationError("every x must be at least 4")
        for name in ("phi_support", "psi_support"):
            a, b = getattr(self, name)
            if not 0 < a < b:
                raise ConfigurationError(f"{name} must satisfy 0 < a < b")
        if self.method not in ("naive", "sieved"):
            raise ConfigurationError(f"unknown method {self.method!r}")
        if self.c0_method not in ("contour", "diagonal", "both"):
            raise ConfigurationError(f"unknown c0_method {self.c0_method!r}")
        if not 0.01 < self.epsilon < 0.15:
            raise ConfigurationError("epsilon must lie in (0.01, 0.15)")
        if self.workers < 1:
            raise ConfigurationError("workers must be at least 1")
        if any(self.y_of(x) < 2 for x in self.x_values):
            raise ConfigurationError("y_rule produces Y < 2")

    def y_of(self, x: float) -> float:
        rule = self.y_rule
        if rule == "sqrt_of_x":
            return float(math.ceil(math.sqrt(x)))
        kind, _, arg = rule.partition(":")
        try:
            val = float(arg)
        except ValueError:
            raise ConfigurationError(f"bad y_rule {rule!r}") from None
        if kind == "fixed":
            return val
        if kind == "power":
            return float(math.ceil(x**val))
        raise ConfigurationError(f"bad y_rule {rule!r}")

    @property
    def Phi(self) -> SmoothWindow:
        return SmoothWindow(*self.phi_support)

    @property
    def Psi(self) -> SmoothWindow:
        return SmoothWindow(*self.psi_support)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            val = getattr(self, f.name)
            if val is None:
                continue
            if isinstance(val, (list, tuple)):
                val = ",".join(repr(float(v)) for v in val)
            lines.append(f"{f.name}={val}")
        return "\n".join(lines) + "\n"


def _parse_floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


_PARSERS = {
    "x_values": _parse_floats,
    "diag_y": _parse_floats,
    "phi_support": lambda t: tuple(_parse_floats(t)),
    "psi_support": lambda t: tuple(_parse_floats(t)),
    "epsilon": float,
    "workers": int,
    "y_rule": str.strip,
    "method": str.strip,
    "c0_method": str.strip,
    "tau_cache": str.strip,
}


def parse_config_text(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Flat ``key=value`` lines; ``#`` starts a comment. Unknown keys are errors."""
    values = asdict(base) if base is not None else {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip()
        if not sep or key not in _PARSERS:
            raise ConfigurationError(f"config line {lineno}: cannot parse {raw!r}")
        try:
            values[key] = _PARSERS[key](val.strip())
        except ValueError as exc:
            raise ConfigurationError(f"config line {lineno}: {exc}") from None
    for key in ("phi_support", "psi_support"):
        if key in values and len(values[key]) != 2:
            raise ConfigurationError(f"{key} needs two numbers")
    return ExperimentConfig(**values)


def load_config(path: str | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text)


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class ExperimentReport:
    records: list[dict]
    decay_slope: float
    C0: float
    C0_method: str
    C0_details: dict
    config_text: str
    versions: dict

    def to_dict(self) -> dict:
        return {
            "records": self.records,
            "decay_slope": self.decay_slope,
            "C0": self.C0,
            "C0_method": self.C0_method,
            "C0_details": self.C0_details,
            "config": self.config_text,
            "versions": self.versions,
        }


def _versions() -> dict:
    return {"quadtwist": __version__, "numpy": np.__version__, "scipy": scipy.__version__, "python": sys.version.split()[0]}


def _workspace(config: ExperimentConfig, extra_x: float = 0.0, extra_y: float = 0.0) -> Workspace:
    ymax = max([config.y_of(x) for x in config.x_values] + list(config.diag_y) + [extra_y])
    xmax = max(config.x_values + [extra_x])
    coeff_limit = max(10**5, int(math.ceil(ymax * config.phi_support[1])) + 1)
    factor_limit = max(coeff_limit, int(math.ceil(xmax * config.psi_support[1])) + 1)
    return Workspace(coeff_limit, factor_limit, config.Phi, config.Psi, config.workers, config.tau_cache)


def compute_c0(config: ExperimentConfig, ws: Workspace) -> tuple[float, dict]:
    details: dict = {}
    value = None
    if config.c0_method in ("contour", "both"):
        res = ws.contour(config.epsilon)
        details["contour"] = res.to_dict()
        value = res.value
    if config.c0_method in ("diagonal", "both"):
        diag = diagonal_scan(config.diag_y, config.Phi, config.Psi, ws.coeffs, ws.tables)
        details["diagonal"] = asdict(diag)
        if value is None:
            value = diag.weighted
        else:
            details["relative_difference"] = abs(diag.weighted - value) / abs(value)
    return float(value), details


def run_verify(config: ExperimentConfig, ws: Workspace | None = None) -> ExperimentReport:
    """C0 once, then S_brute at every (X, Y) of the config, sorted by X."""
    ws = ws or _workspace(config)
    C0, details = compute_c0(config, ws)
    records = []
    for X in sorted(config.x_values):
        Y = config.y_of(X)
        pt = mean_square(X, Y, config.Phi, config.Psi, ws.coeffs, ws.tables, config.method, config.workers)
        predicted = C0 * X * Y
        ratio = pt.value_S / predicted
        rec = {
            "X": X, "Y": Y, "S_brute": pt.value_S, "C0": C0, "C0_method": config.c0_method,
            "predicted": predicted, "ratio": ratio, "abs_dev": abs(ratio - 1), "seconds": pt.wall_time,
        }
        if "diagonal" in details and config.c0_method == "both":
            rec["C0_diagonal"] = details["diagonal"]["weighted"]
        records.append(rec)
    slope = decay_slope([r["X"] for r in records], [r["abs_dev"] for r in records])
    return ExperimentReport(records, slope, C0, config.c0_method, details, config.to_text(), _versions())


def _fmt(v) -> str:
    return f"{v:.17g}" if isinstance(v, float) else str(v)


def emit_report(report: ExperimentReport, fmt: str, path: str | None = None) -> str:
    """Serialize ``report`` as CSV or JSON; write it to ``path`` when given."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rec in report.records:
            w.writerow([_fmt(float(rec[c])) for c in CSV_COLUMNS])
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps(report.to_dict(), indent=2) + "\n"
    else:
        raise ConfigurationError(f"unknown format {fmt!r}")
    if path:
        Path(path).write_text(text)
    return text


def read_csv_report(text: str) -> list[dict]:
    rows = list(csv.DictReader(io.StringIO(text)))
    return [{k: float(v) for k, v in row.items()} for row in rows]
