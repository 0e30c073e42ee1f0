"""Command-line interface: single evaluations, table reproduction, and the
verification suites.

Exit codes: 0 on success, 1 on any suite failure, 2 on usage errors.
All numeric inputs are decimal strings; complex values are 'RE' or 'RE,IM'.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness
from .airy import AiryEvalPolicy, airy_ai, q_airy_limit_q_to_1, xi_map
from .asymptotics import (
    approx_inner,
    approx_outer,
    q_airy_large_z,
    theta_region_approx,
)
from .harness import RunConfig, TableRow, format_scientific, render_rows
from .precision import PrecisionContext
from .qfunctions import (
    EvalPoint,
    QParams,
    q_airy,
    q_airy_poly,
    stieltjes_wigert,
    theta_q,
    weight_w,
)

EVAL_FNS = (
    "sw", "qairy", "qairy-poly", "theta", "ai", "xi", "weight",
    "inner", "outer", "theta-region", "large-z", "limit",
)


def _add_common(p):
    p.add_argument("--prec-bits", type=int, default=256)
    p.add_argument("--tol", default="1e-30")
    p.add_argument("--format", dest="fmt", choices=("text", "json", "csv"), default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qairy")
    sub = ap.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate one function at one point")
    pe.add_argument("--fn", choices=EVAL_FNS, required=True)
    pe.add_argument("--n", type=int, default=50)
    pe.add_argument("--q", default="0.5")
    pe.add_argument("--u", default="1", help="complex as RE or RE,IM")
    pe.add_argument("--t", default="0")
    pe.add_argument("--x", default="1")
    pe.add_argument("--k", default="1", help="weight parameter")
    pe.add_argument("--small-delta", default="0.1")
    pe.add_argument("--digits", type=int, default=15)
    _add_common(pe)

    p1 = sub.add_parser("table1", help="polynomial-vs-approximant verification table")
    p1.add_argument("--n", type=int, default=50)
    p1.add_argument("--q", default="0.5")
    p1.add_argument("--u-list", nargs="+", default=list(harness.TABLE1_U_DEFAULT))
    p1.add_argument("--t-list", nargs="+", default=list(harness.TABLE1_T_DEFAULT))
    p1.add_argument("--paper-style", action="store_true")
    p1.add_argument("--out", default=None)
    p1.add_argument("--workers", type=int, default=1)
    _add_common(p1)

    p2 = sub.add_parser("table2", help="q-Airy-vs-Airy-limit verification table")
    p2.add_argument("--x-list", nargs="+", default=list(harness.TABLE2_X_DEFAULT))
    p2.add_argument("--q-list", nargs="+", default=list(harness.TABLE2_Q_DEFAULT))
    p2.add_argument("--paper-style", action="store_true")
    p2.add_argument("--out", default=None)
    p2.add_argument("--workers", type=int, default=1)
    _add_common(p2)

    pv = sub.add_parser("verify", help="run property suites")
    pv.add_argument(
        "--suite",
        choices=tuple(harness.suite_names()) + ("all",),
        required=True,
    )
    pv.add_argument("--grid", choices=("small", "full"), default="small")
    _add_common(pv)
    return ap


def _eval_row(args) -> TableRow:
    ctx = PrecisionContext(working_bits=args.prec_bits, target_rel_tol=args.tol)
    mp = ctx.context()
    params = QParams(args.q, args.n)
    point = EvalPoint(params, args.u, args.t)
    digits = args.digits
    inputs = {"fn": args.fn, "n": str(args.n), "q": args.q, "u": args.u,
              "t": args.t, "x": args.x}
    region = ""
    bound = ""
    approx = ""
    rel_err = ""

    if args.fn == "sw":
        value = stieltjes_wigert(params, point.z(ctx), ctx)
    elif args.fn == "qairy":
        value = q_airy(ctx.parse_real(args.q), point.z(ctx), ctx)
    elif args.fn == "qairy-poly":
        value = q_airy_poly(params, point.z(ctx), ctx)
    elif args.fn == "theta":
        value = theta_q(ctx.parse_real(args.q), point.z(ctx), ctx)
    elif args.fn == "ai":
        value = airy_ai(args.x, AiryEvalPolicy(), ctx)
    elif args.fn == "xi":
        res = xi_map(args.x, args.q, ctx)
        value = res.xi
    elif args.fn == "weight":
        value = weight_w(args.x, args.k, ctx)
    elif args.fn == "inner":
        rep = approx_inner(point, ctx, with_exact=True)
        value = rep.exact
        approx = format_scientific(rep.approx, digits)
        bound = format_scientific(rep.bound, 3)
        rel_err = format_scientific(rep.realized_rel_err, 3)
        region = rep.region.value
    elif args.fn == "outer":
        rep = approx_outer(point, ctx, with_exact=True)
        value = rep.exact
        approx = format_scientific(rep.approx, digits)
        bound = format_scientific(rep.bound, 3)
        rel_err = format_scientific(rep.realized_rel_err, 3)
        region = rep.region.value
    elif args.fn == "theta-region":
        value = theta_region_approx(point, args.small_delta, ctx)
        region = "THETA"
    elif args.fn == "large-z":
        value = q_airy_large_z(ctx.parse_real(args.q), point.z(ctx), ctx)
    elif args.fn == "limit":
        value = q_airy_limit_q_to_1(args.x, args.q, AiryEvalPolicy(), ctx)
    else:  # pragma: no cover
        raise AssertionError(args.fn)

    return TableRow(
        inputs=inputs,
        true_str=format_scientific(value, digits),
        approx_str=approx,
        rel_err_str=rel_err,
        bound_str=bound,
        region=region,
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "eval":
        row = _eval_row(args)
        _emit(render_rows([row], args.fmt), None)
        return 0

    if args.command in ("table1", "table2"):
        common = dict(
            working_bits=args.prec_bits,
            target_rel_tol=args.tol,
            fmt=args.fmt,
            paper_style=args.paper_style,
            workers=args.workers,
        )
        if args.command == "table1":
            config = RunConfig(
                n=args.n, q=args.q,
                u_list=tuple(args.u_list), t_list=tuple(args.t_list), **common,
            )
            rows = harness.reproduce_table1(config)
        else:
            config = RunConfig(
                x_list=tuple(args.x_list), q_list=tuple(args.q_list), **common,
            )
            rows = harness.reproduce_table2(config)
        _emit(render_rows(rows, args.fmt), args.out)
        return 0

    # verify
    names = harness.suite_names() if args.suite == "all" else (args.suite,)
    config = RunConfig(working_bits=args.prec_bits, target_rel_tol=args.tol)
    ok = True
    for name in names:
        report = harness.run_suite(name, config, grid=args.grid)
        for c in report.checks:
            status = "pass" if c.passed else "FAIL"
            print(f"[{status}] {report.name}: {c.label}  measured={c.measured} "
                  f"threshold={c.threshold}")
        ok = ok and report.passed
        print(f"suite {report.name}: {'pass' if report.passed else 'FAIL'} "
              f"({len(report.checks)} checks)")
    return 0 if ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
