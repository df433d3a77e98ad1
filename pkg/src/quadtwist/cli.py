"""Command-line front end.

Verbs::

    verify-gauss    closed vs direct Gauss sums
    verify-poisson  both sides of the quadratic-character Poisson identity
    brute           one brute-force S(X, Y)
    c0              the constant C0 by the diagonal or the contour route
    scaling         S(X, Y) / (C0 X Y) over a list of X (plot-ready report)
    verify          every acceptance criterion; the scaling run is one of them

Exit status: 0 when all checks pass, 1 when an acceptance check fails,
2 on a configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .acceptance import run_all
from .charsum import mean_square
from .errors import ConfigurationError, QuadTwistError
from .gauss import verify_gauss
from .mainterm import ContourSpec, c0_contour, diagonal_scan
from .pipeline import (
    ExperimentConfig,
    Workspace,
    _fmt,
    _workspace,
    emit_report,
    load_config,
    run_verify,
)
from .poisson import poisson_check

# ---------------------------------------------------------------------------
# verbs


def _emit(obj, args, csv_rows=None) -> None:
    if args.format == "csv" and csv_rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(csv_rows[0])
        for row in csv_rows[1:]:
            w.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
    else:
        text = json.dumps(obj, indent=2, default=float) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)


def cmd_verify_gauss(args, config: ExperimentConfig) -> int:
    ws = Workspace(coeff_limit=10, factor_limit=args.m_max + 1)
    rep = verify_gauss(args.m_max, args.k_max, ws.tables)
    _emit(
        {"m_max": rep.m_max, "k_max": rep.k_max, "checked": rep.n_checked, "max_deviation": rep.max_deviation,
         "failures": len(rep.failures), "seconds": rep.seconds, "passed": rep.passed},
        args,
    )
    return 0 if rep.passed else 1


def cmd_verify_poisson(args, config: ExperimentConfig) -> int:
    ws = Workspace(coeff_limit=10, factor_limit=max(args.n, 16) + 1)
    chk = poisson_check(config.Phi, args.n, args.x, ws.tables, tol=args.tol)
    ok = chk.relative_residual <= 1e-6
    _emit(
        {"n": chk.n, "X": chk.X, "lhs": chk.lhs, "rhs": chk.rhs, "residual": chk.residual,
         "relative_residual": chk.relative_residual, "k_max": chk.k_max, "passed": ok},
        args,
    )
    return 0 if ok else 1


def cmd_brute(args, config: ExperimentConfig) -> int:
    ws = _workspace(config, extra_x=args.x, extra_y=args.y)
    pt = mean_square(args.x, args.y, config.Phi, config.Psi, ws.coeffs, ws.tables, args.method, args.workers or config.workers)
    d = pt.to_dict()
    _emit(d, args, [list(d), list(d.values())])
    return 0


def cmd_c0(args, config: ExperimentConfig) -> int:
    if args.method == "diagonal":
        ys = [args.y] if args.y else config.diag_y
        ws = _workspace(config, extra_y=max(ys))
        diag = diagonal_scan(ys, config.Phi, config.Psi, ws.coeffs, ws.tables)
        value = diag.values[0] if len(ys) == 1 else diag.weighted
        out = {"method": "diagonal", "value": value, "error_estimate": diag.spread if len(ys) > 1 else None,
               "Y": ys, "values": list(diag.values), "fit": diag.fit}
    else:
        eps = args.epsilon if args.epsilon is not None else config.epsilon
        ws = _workspace(config)
        res = c0_contour(config.Phi, config.Psi, ContourSpec(epsilon=eps), ws.acc, ws.coeffs, ws.tables)
        out = {"method": "contour", **res.to_dict()}
    out["phi_support"] = list(config.phi_support)
    out["psi_support"] = list(config.psi_support)
    args.format = "json"
    _emit(out, args)
    return 0


def cmd_scaling(args, config: ExperimentConfig) -> int:
    report = run_verify(config)
    text = emit_report(report, args.format, args.out)
    sys.stdout.write(text)
    return 0


def cmd_verify(args, config: ExperimentConfig) -> int:
    names = [c.strip() for c in args.criteria.split(",")] if args.criteria else None
    ws = _workspace(config)
    results = run_all(ws, names, echo=lambda line: print(line, flush=True))
    if args.out:
        # the scaling report behind A5 goes to --out
        reports = [r.data["report"] for r in results if "report" in r.data]
        if reports:
            emit_report(reports[0], args.format, args.out)
    ok = all(r.passed for r in results)
    print("ALL PASS" if ok else "SOME CRITERIA FAILED")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument("--workers", type=int, default=None, help="worker processes")
    common.add_argument("--out", help="write the result to this path")
    common.add_argument("--format", choices=("csv", "json"), default="json")

    p = argparse.ArgumentParser(prog="quadtwist", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("verify-gauss", parents=[common], help="closed vs direct Gauss sums")
    s.add_argument("--m-max", type=int, default=2001)
    s.add_argument("--k-max", type=int, default=60)
    s.set_defaults(func=cmd_verify_gauss)

    s = sub.add_parser("verify-poisson", parents=[common], help="Poisson identity for one n, X")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--tol", type=float, default=1e-8)
    s.set_defaults(func=cmd_verify_poisson)

    s = sub.add_parser("brute", parents=[common], help="brute-force S(X, Y)")
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--y", type=float, required=True)
    s.add_argument("--method", choices=("naive", "sieved"), default="sieved")
    s.set_defaults(func=cmd_brute)

    s = sub.add_parser("c0", parents=[common], help="the constant C0")
    s.add_argument("--method", choices=("diagonal", "contour"), default="contour")
    s.add_argument("--y", type=float, default=None, help="single Y for the diagonal route")
    s.add_argument("--epsilon", type=float, default=None, help="contour line offset")
    s.set_defaults(func=cmd_c0)

    s = sub.add_parser("scaling", parents=[common], help="ratio S / (C0 X Y) over the configured X")
    s.set_defaults(func=cmd_scaling)

    s = sub.add_parser("verify", parents=[common], help="run the acceptance criteria")
    s.add_argument("--criteria", help="comma-separated subset, e.g. A1,A3")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigurationError("workers must be at least 1")
            config.workers = args.workers
        return args.func(args, config)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except QuadTwistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
