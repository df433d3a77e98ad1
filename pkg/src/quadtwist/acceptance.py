"""Acceptance checks A1-A8, shared by the test suite and ``quadtwist verify``.

Each check returns a :class:`CriterionResult`. Expensive inputs (coefficient
and factor tables, the L-series accessor, contour values of C0) live in a
:class:`Workspace` so that they are built once per process.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .arith import FactorTables
from .charsum import mean_square
from .gauss import verify_gauss
from .lfunctions import L_symsq, zeta_eval
from .mainterm import (
    diagonal_scan,
    prime_weight_table,
    square_pair_arrays,
    z2_value,
)
from .modform import EigenformCoefficients, hecke_check, lambda_table
from .pipeline import ExperimentConfig, Workspace, decay_slope, run_verify
from .poisson import poisson_check
from .windows import gamma_decay_constant

A5_EXPONENTS = (14, 15, 16, 17, 18)
A4_DIAGONAL_EXPONENTS = (10, 11, 12, 13, 14)
Z2_ORACLE_POINTS = ((2.0, 2.0), (2.0, 3.0), (3.0, 2.0), (2.0 + 1.0j, 2.5 - 0.5j), (1.5, 1.5))


@dataclass
class CriterionResult:
    name: str
    title: str
    passed: bool
    summary: str
    seconds: float
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{self.name} {verdict}  {self.title}: {self.summary} [{self.seconds:.1f} s]"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def check_a1(ws: Workspace) -> CriterionResult:
    """Closed-form Gauss sums against direct sums, odd m <= 2001, |k| <= 60."""
    rep = verify_gauss(2001, 60, ws.tables)
    ok = rep.passed and rep.seconds <= 60
    return CriterionResult(
        "A1", "Gauss equivalence", ok,
        f"{rep.n_checked} pairs, max |diff| {rep.max_deviation:.2e}, {len(rep.failures)} failures",
        0.0, {"max_deviation": rep.max_deviation, "n_checked": rep.n_checked},
    )


@_timed
def check_a2(ws: Workspace) -> CriterionResult:
    """Exact Hecke relations and Deligne's bound for n <= 10^5."""
    t0 = time.perf_counter()
    coeffs = lambda_table(10**5, cache_dir=ws.cache_dir) if ws.coeff_limit != 10**5 else ws.coeffs
    rep = hecke_check(coeffs, ws.tables)
    elapsed = time.perf_counter() - t0
    ok = rep.passed and elapsed <= 60
    return CriterionResult(
        "A2", "Eigenform suite", ok,
        f"N={rep.limit}: multiplicativity {len(rep.multiplicative_failures)} fails, "
        f"recursion {len(rep.recursion_failures)} fails, Deligne {len(rep.deligne_failures)} fails",
        0.0,
    )


@_timed
def check_a3(ws: Workspace) -> CriterionResult:
    """Poisson identity for n in {1, 3, 15, 105}, X in {25, 100}."""
    worst = 0.0
    rows = []
    for n in (1, 3, 15, 105):
        for X in (25, 100):
            chk = poisson_check(ws.Phi, n, X, ws.tables)
            worst = max(worst, chk.relative_residual)
            rows.append((n, X, chk.lhs, chk.rhs, chk.relative_residual))
    return CriterionResult(
        "A3", "Poisson identity", worst <= 1e-6, f"max relative residual {worst:.2e}", 0.0, {"rows": rows}
    )


def z2_direct(u: complex, v: complex, Ymax: int, coeffs: EigenformCoefficients, tables: FactorTables) -> complex:
    """Truncated defining double sum of Z(u, v) over odd n1, n2 <= Ymax with n1 n2 a square."""
    g = prime_weight_table(tables, Ymax)
    pr = square_pair_arrays(Ymax)
    n1 = pr.n1.astype(float)
    n2 = pr.n2.astype(float)
    terms = coeffs.lam[pr.n1] * coeffs.lam[pr.n2] * g[pr.n1] * g[pr.n2] / g[pr.r]
    return complex(np.sum(terms * np.exp(-u * np.log(n1) - v * np.log(n2))))


@_timed
def check_a4(ws: Workspace) -> CriterionResult:
    """Diagonal vs contour C0, epsilon independence, Z2 against the direct Z-sum."""
    t0 = time.perf_counter()
    Ys = [2.0**e for e in A4_DIAGONAL_EXPONENTS]
    diag = diagonal_scan(Ys, ws.Phi, ws.Psi, ws.coeffs, ws.tables)
    c08 = ws.contour(0.08)
    c05 = ws.contour(0.05)
    c10 = ws.contour(0.10)
    rel_diag = abs(diag.weighted - c08.value) / abs(c08.value)
    rel_eps = abs(c05.value - c10.value) / abs(c08.value)

    z2_dev = 0.0
    for u, v in Z2_ORACLE_POINTS:
        direct = z2_direct(u, v, ws.coeff_limit, ws.coeffs, ws.tables)
        glob = zeta_eval(u + v) * L_symsq(2 * u, ws.acc) * L_symsq(2 * v, ws.acc) * L_symsq(u + v, ws.acc)
        z2 = z2_value(u, v, ws.coeffs, ws.tables)
        z2_dev = max(z2_dev, abs(direct / glob - z2) / abs(z2))
    elapsed = time.perf_counter() - t0
    ok = rel_diag <= 0.01 and rel_eps <= 1e-3 and z2_dev <= 1e-6 and elapsed <= 900
    return CriterionResult(
        "A4", "C0 cross-validation", ok,
        f"C0 contour {c08.value:.10e}, diagonal (weighted) {diag.weighted:.10e} rel {rel_diag:.2e}; "
        f"eps 0.05 vs 0.10 rel {rel_eps:.2e}; Z2 oracle max rel {z2_dev:.2e}",
        0.0,
        {
            "C0_contour": c08.value, "C0_diagonal": diag.weighted, "C0_diagonal_fit": diag.fit,
            "diagonal_values": diag.values, "rel_diag": rel_diag, "rel_eps": rel_eps, "z2_dev": z2_dev,
        },
    )


def a5_verdict(Xs, ratios) -> tuple[bool, dict]:
    devs = [abs(r - 1) for r in ratios]
    slope = decay_slope(Xs, devs)
    first_ok = 0.5 <= ratios[0] <= 1.5
    last3 = devs[-3:]
    monotone = all(b < a for a, b in zip(last3, last3[1:]))
    slope_ok = slope <= -0.10
    return first_ok and monotone and slope_ok, {
        "ratio_window_ok": first_ok, "monotone_ok": monotone, "slope_ok": slope_ok, "decay_slope": slope
    }


@_timed
def check_a5(ws: Workspace) -> CriterionResult:
    """S_brute / (C0 X Y) over X = 2^14..2^18 with Y = ceil(sqrt X)."""
    config = ExperimentConfig(
        x_values=[2.0**e for e in A5_EXPONENTS],
        phi_support=ws.Phi.support,
        psi_support=ws.Psi.support,
        workers=ws.workers,
    )
    report = run_verify(config, ws)
    Xs = [r["X"] for r in report.records]
    ratios = [r["ratio"] for r in report.records]
    ok, info = a5_verdict(Xs, ratios)
    shown = ", ".join(f"{r:.4f}" for r in ratios)
    return CriterionResult(
        "A5", "Convergence to C0 X Y", ok,
        f"ratios [{shown}], slope {info['decay_slope']:.3f}, first in [0.5,1.5]: {info['ratio_window_ok']}, "
        f"last three |ratio-1| decreasing: {info['monotone_ok']}",
        0.0, {"ratios": ratios, "S": [r["S_brute"] for r in report.records], "report": report, **info},
    )


@_timed
def check_a6(ws: Workspace) -> CriterionResult:
    """Growth of the square-pair count between 2^8 and 2^13."""
    Ys = [2**e for e in range(8, 14)]
    counts = [len(square_pair_arrays(Y)) for Y in Ys]
    slope = float(np.polyfit(np.log2(Ys), np.log2(counts), 1)[0])
    return CriterionResult(
        "A6", "Square-pair growth", 1.0 <= slope <= 1.2, f"counts {counts}, log2-slope {slope:.4f}", 0.0,
        {"counts": counts, "slope": slope},
    )


@_timed
def check_a7(ws: Workspace) -> CriterionResult:
    """Envelope constant of Gamma(s)(cos +- sin)(pi s/2) / |s|^(Re s - 1/2)."""
    const = gamma_decay_constant()
    return CriterionResult("A7", "Gamma decay", const <= 10, f"fitted constant {const:.4f}", 0.0, {"constant": const})


@_timed
def check_a8(ws: Workspace) -> CriterionResult:
    """Sieved kernel against the naive kernel at (X, Y) = (2^14, 2^7)."""
    X, Y = 2.0**14, 2.0**7
    naive = mean_square(X, Y, ws.Phi, ws.Psi, ws.coeffs, ws.tables, method="naive")
    sieved = min(
        (mean_square(X, Y, ws.Phi, ws.Psi, ws.coeffs, ws.tables, method="sieved") for _ in range(3)),
        key=lambda p: p.wall_time,
    )
    rel = abs(naive.value_S - sieved.value_S) / abs(naive.value_S)
    speedup = naive.wall_time / sieved.wall_time
    return CriterionResult(
        "A8", "Kernel performance", speedup >= 5 and rel <= 1e-9,
        f"speedup {speedup:.1f}x, relative difference {rel:.1e}", 0.0, {"speedup": speedup, "rel": rel},
    )


ALL_CHECKS = {
    "A1": check_a1, "A2": check_a2, "A3": check_a3, "A4": check_a4,
    "A5": check_a5, "A6": check_a6, "A7": check_a7, "A8": check_a8,
}


def run_all(ws: Workspace | None = None, names=None, echo=print) -> list[CriterionResult]:
    ws = ws or Workspace()
    results = []
    for name in names or ALL_CHECKS:
        res = ALL_CHECKS[name](ws)
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
