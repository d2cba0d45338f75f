"""Command-line front end.

Subcommands: verify-gt, verify-convexity, hessian-check, davis-check,
erratum-dkd, eval.  Exit status 0 when every check passes, 1 when a violation
was found (the report is still written), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import Error
from .gt import (
    CampaignConfig,
    CampaignReport,
    convexity_check,
    gt_weak_check,
    run_campaign,
)
from .hermitian import EnsembleSpec
from .logsumexp import dkd_product, lse_hessian_analytic
from .matrixio import load_matrix
from .spectral import builtin, lift, lift_eval

# the analytic-vs-finite-difference comparison has its own floor set by the
# h = 1e-4 stencil; --tol governs only the PSD part of hessian-check
FD_MATCH_TOL = 1e-6

# off-diagonal agreement of D K D with the Hessian is an algebraic identity
OFFDIAG_IDENTITY_TOL = 1e-14

_DEFAULTS = {"dim": 8, "trials": 1000, "ensemble": "gue", "scale": 1.0, "tol": 1e-10}


def _u64(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in unsigned 64 bits, got {text}")
    return value


def _csv_vector(text: str) -> np.ndarray:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--x expects comma-separated reals, got {text!r}")
    return np.asarray(values)


def _campaign_flags(sub: argparse.ArgumentParser, matrices: bool = False) -> None:
    sub.add_argument("--dim", type=int, default=_DEFAULTS["dim"], metavar="N",
                     help="matrix dimension (default 8)")
    sub.add_argument("--trials", type=int, default=_DEFAULTS["trials"], metavar="T",
                     help="number of trials (default 1000)")
    sub.add_argument("--ensemble", choices=("gue", "goe", "diag"),
                     default=_DEFAULTS["ensemble"], help="random ensemble (default gue)")
    sub.add_argument("--scale", type=float, default=_DEFAULTS["scale"], metavar="S",
                     help="ensemble scale (default 1.0)")
    sub.add_argument("--seed", type=_u64, required=True, metavar="U64",
                     help="master seed; fully determines the report")
    sub.add_argument("--tol", type=float, default=_DEFAULTS["tol"], metavar="R",
                     help="check tolerance (default 1e-10)")
    sub.add_argument("--parallel", action="store_true",
                     help="run trials on a thread pool (report is unchanged)")
    sub.add_argument("--out", metavar="PATH", help="write the JSON report here")
    if matrices:
        sub.add_argument("--matrix", metavar="PATH",
                         help="check this matrix file instead of sampling")
        sub.add_argument("--matrix-b", metavar="PATH",
                         help="second matrix file for the single check")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gtcert",
        description="Randomized certification of the Golden-Thompson trace "
        "inequality and the convexity structure behind it.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    p = sub.add_parser("verify-gt", help="certify log tr exp(A+B) <= log tr exp(A) + log tr exp(B)")
    _campaign_flags(p, matrices=True)

    p = sub.add_parser("verify-convexity", help="certify midpoint convexity of log tr exp")
    _campaign_flags(p, matrices=True)

    p = sub.add_parser("hessian-check",
                       help="certify the log-sum-exp Hessian: PSD spectrum and "
                       "agreement with finite differences")
    _campaign_flags(p)

    p = sub.add_parser("davis-check",
                       help="certify unitary invariance of a lifted function and "
                       "its agreement with the diagonal restriction")
    _campaign_flags(p)
    p.add_argument("--fn", default="lse", metavar="NAME",
                   help="built-in function to lift (default lse)")

    p = sub.add_parser("erratum-dkd",
                       help="print the Hessian next to the product D K D and "
                       "their diagonal discrepancy at a given point")
    p.add_argument("--x", type=_csv_vector, required=True, metavar="CSV",
                   help="evaluation point, comma-separated")
    p.add_argument("--out", metavar="PATH", help="write the comparison as JSON")

    p = sub.add_parser("eval", help="evaluate a built-in lifted function on a matrix file")
    p.add_argument("--fn", required=True, metavar="NAME",
                   help="one of lse, max, min, sum, pnorm:<p>")
    p.add_argument("--matrix", required=True, metavar="PATH", help="matrix file")
    p.add_argument("--out", metavar="PATH", help="write {fn, matrix, value} as JSON")

    return parser


def _write_out(path, doc) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(doc, indent=2) + "\n")


def _print_report(report: CampaignReport) -> None:
    cfg = report.config
    ens = cfg.ensemble
    verdict = "PASS" if report.violations == 0 else "FAIL"
    print(
        f"{cfg.check_kind}: ensemble={ens.kind} n={ens.n} scale={ens.scale:g} "
        f"seed={ens.seed} trials={report.trials_run} violations={report.violations} "
        f"worst_slack={report.worst_slack:.6e} worst_trial_seed={report.worst_trial_seed} "
        f"[{verdict}]"
    )


def _ensemble(args) -> EnsembleSpec:
    return EnsembleSpec(args.ensemble, args.dim, args.scale, args.seed)


def _run_campaigns(args, configs) -> int:
    reports = [run_campaign(c) for c in configs]
    for report in reports:
        _print_report(report)
    docs = [r.to_json_dict() for r in reports]
    _write_out(args.out, docs[0] if len(docs) == 1 else docs)
    return 0 if all(r.violations == 0 for r in reports) else 1


def _single_check(args, kind) -> int:
    if not (args.matrix and args.matrix_b):
        print("error: --matrix and --matrix-b must be given together", file=sys.stderr)
        return 2
    a = load_matrix(args.matrix)
    b = load_matrix(args.matrix_b)
    check = gt_weak_check if kind == "GT_WEAK" else convexity_check
    result = check(a, b, args.tol)
    verdict = "PASS" if result.passed else "FAIL"
    print(
        f"{kind}: lhs={result.lhs:.17g} rhs={result.rhs:.17g} "
        f"slack={result.slack:.6e} [{verdict}]"
    )
    _write_out(args.out, {
        "check_kind": kind,
        "mode": "single",
        "lhs": result.lhs,
        "rhs": result.rhs,
        "slack": result.slack,
        "tol": result.tol,
        "pass": result.passed,
    })
    return 0 if result.passed else 1


def _cmd_verify(args, kind) -> int:
    if args.matrix or args.matrix_b:
        return _single_check(args, kind)
    config = CampaignConfig(kind, _ensemble(args), args.trials, args.tol, args.parallel)
    return _run_campaigns(args, [config])


def _cmd_hessian(args) -> int:
    ens = _ensemble(args)
    return _run_campaigns(args, [
        CampaignConfig("HESSIAN_PSD", ens, args.trials, args.tol, args.parallel),
        CampaignConfig("HESSIAN_FD_MATCH", ens, args.trials, FD_MATCH_TOL, args.parallel),
    ])


def _cmd_davis(args) -> int:
    ens = _ensemble(args)
    return _run_campaigns(args, [
        CampaignConfig("UNITARY_INVARIANCE", ens, args.trials, args.tol, args.parallel, fn=args.fn),
        CampaignConfig("DAVIS_RESTRICTION", ens, args.trials, args.tol, args.parallel, fn=args.fn),
    ])


def _format_matrix(m: np.ndarray) -> str:
    return "\n".join("  [" + ", ".join(f"{v:.17g}" for v in row) + "]" for row in m)


def _cmd_erratum(args) -> int:
    hess = lse_hessian_analytic(args.x).entries
    dkd = dkd_product(args.x).entries
    off_mask = ~np.eye(len(args.x), dtype=bool)
    max_offdiag = float(np.max(np.abs(hess - dkd)[off_mask])) if off_mask.any() else 0.0
    diag_diff = np.abs(np.diagonal(dkd) - np.diagonal(hess))
    passed = max_offdiag <= OFFDIAG_IDENTITY_TOL

    print("hessian:")
    print(_format_matrix(hess))
    print("dkd:")
    print(_format_matrix(dkd))
    print(f"max_offdiag_diff={max_offdiag:.6e} (tol {OFFDIAG_IDENTITY_TOL:g})")
    print(f"diag_diff=[{', '.join(f'{v:.17g}' for v in diag_diff)}]")
    print(f"max_diag_diff={float(diag_diff.max()):.17g}")
    print("[PASS]" if passed else "[FAIL]")
    _write_out(args.out, {
        "x": list(args.x),
        "hessian": hess.tolist(),
        "dkd": dkd.tolist(),
        "max_offdiag_diff": max_offdiag,
        "offdiag_tol": OFFDIAG_IDENTITY_TOL,
        "diag_diff": diag_diff.tolist(),
        "max_diag_diff": float(diag_diff.max()),
        "pass": passed,
    })
    return 0 if passed else 1


def _cmd_eval(args) -> int:
    func = lift(builtin(args.fn))
    value = lift_eval(func, load_matrix(args.matrix))
    print(f"{value:.17g}")
    _write_out(args.out, {"fn": func.name, "matrix": args.matrix, "value": value})
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles usage errors and --help itself
        return int(exc.code or 0)
    try:
        if args.command == "verify-gt":
            return _cmd_verify(args, "GT_WEAK")
        if args.command == "verify-convexity":
            return _cmd_verify(args, "MIDPOINT_CONVEXITY")
        if args.command == "hessian-check":
            return _cmd_hessian(args)
        if args.command == "davis-check":
            return _cmd_davis(args)
        if args.command == "erratum-dkd":
            return _cmd_erratum(args)
        if args.command == "eval":
            return _cmd_eval(args)
        raise ValueError(f"unknown command {args.command!r}")
    except (Error, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())
