"""Table reproduction, verification suites, and paper-style formatting.

This is the only module that spawns parallel work: table cells are pure
independent computations, evaluated by worker processes when requested and
always reassembled in fixed row order, so output is byte-identical across
worker counts.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import mpmath

from .airy import AiryEvalPolicy, airy_ai, airy_ai_second_derivative, airy_ai_taylor, \
    airy_ai_asymptotic, first_negative_zero, q_airy_limit_q_to_1
from .asymptotics import (
    RegionTag,
    approx_inner,
    approx_outer,
    q_airy_large_z,
)
from .precision import PrecisionContext, q_pochhammer, q_pochhammer_inf, to_decimal_string
from .qfunctions import (
    EvalPoint,
    QParams,
    q_airy,
    stieltjes_wigert,
    symmetry_residual,
)

TABLE1_U_DEFAULT = ("1", "-1", "1,1")
TABLE1_T_DEFAULT = ("0", "0.5", "0.8", "1.0", "1.2", "1.6")
TABLE2_X_DEFAULT = ("0.5", "1.0", "4.0", "10", "20")
TABLE2_Q_DEFAULT = ("0.9", "0.92", "0.94", "0.96", "0.98", "0.99")


@dataclass(frozen=True)
class RunConfig:
    """Grids, precision overrides and output options for a harness run."""

    working_bits: int = 256
    target_rel_tol: str = "1e-30"
    n: int = 50
    q: str = "0.5"
    u_list: tuple = TABLE1_U_DEFAULT
    t_list: tuple = TABLE1_T_DEFAULT
    x_list: tuple = TABLE2_X_DEFAULT
    q_list: tuple = TABLE2_Q_DEFAULT
    fmt: str = "text"
    out: str | None = None
    paper_style: bool = False
    sig_digits: int = 5
    err_digits: int = 3
    workers: int = 1

    def __post_init__(self):
        if self.fmt not in ("text", "json", "csv"):
            raise ValueError("format must be one of text, json, csv")
        for name in ("u_list", "t_list", "x_list", "q_list"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")

    def ctx(self) -> PrecisionContext:
        return PrecisionContext(
            working_bits=self.working_bits, target_rel_tol=self.target_rel_tol
        )


@dataclass(frozen=True)
class TableRow:
    """One table cell, with all numerics rendered as decimal strings."""

    inputs: dict
    true_str: str
    approx_str: str
    rel_err_str: str
    region: str
    bound_str: str = ""


@dataclass(frozen=True)
class CheckResult:
    label: str
    measured: str
    threshold: str
    passed: bool


@dataclass(frozen=True)
class SuiteReport:
    name: str
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


# ---------------------------------------------------------------------------
# formatting


def _decimal_parts(v, sig_digits):
    """(mantissa_str, exponent) of v at sig_digits, normalized d.ddd."""
    s = to_decimal_string(v, sig_digits)
    if s == "0":
        return "0", 0
    mant, exp = s.split("e")
    return mant, int(exp)


def _shift_mantissa(v, shared_exp, sig_digits):
    """Render |v|-independent mantissa of v scaled by 10^-shared_exp."""
    mant, exp = _decimal_parts(v, sig_digits)
    if mant == "0":
        return "0"
    shift = exp - shared_exp
    if shift == 0:
        return mant
    neg = mant.startswith("-")
    digits = mant.replace("-", "").replace(".", "")
    if shift > 0:
        intpart = digits[: 1 + shift].ljust(1 + shift, "0")
        frac = digits[1 + shift :]
    else:
        intpart = "0"
        frac = "0" * (-shift - 1) + digits
    out = intpart + ("." + frac if frac else "")
    return ("-" if neg else "") + out


def format_scientific(v, sig_digits: int, paper_style: bool = False) -> str:
    """Decimal scientific rendering, real or complex.

    Reals: normalized '+-d.ddd...e+-E' ('0' for zero).  Complex: the shared
    exponent of the larger-magnitude component, '(a+bi)eE'; with
    paper_style each component keeps its own normalized mantissa against
    that printed exponent.
    """
    if sig_digits < 1:
        raise ValueError("sig_digits must be >= 1")
    if isinstance(v, (int, float, str)):
        v = mpmath.mpf(v)
    if hasattr(v, "imag") and v.imag != 0:
        re, im = v.real, v.imag
        re_mant, re_exp = _decimal_parts(re, sig_digits)
        im_mant, im_exp = _decimal_parts(im, sig_digits)
        shared = re_exp if abs(re) >= abs(im) else im_exp
        if paper_style:
            a, b = re_mant, im_mant
        else:
            a = _shift_mantissa(re, shared, sig_digits)
            b = _shift_mantissa(im, shared, sig_digits)
        sign = "+" if not b.startswith("-") else ""
        return f"({a}{sign}{b}i)e{shared}"
    x = v.real if hasattr(v, "real") else v
    if x == 0:
        return "0"
    mant, exp = _decimal_parts(x, sig_digits)
    return f"{mant}e{exp}"


# ---------------------------------------------------------------------------
# tables


def _table1_cell(args) -> TableRow:
    (u_s, t_s, n, q_s, bits, tol, sig, errd, paper_style) = args
    ctx = PrecisionContext(working_bits=bits, target_rel_tol=tol)
    params = QParams(q_s, n)
    point = EvalPoint(params, u_s, t_s)
    report = approx_inner(point, ctx, with_exact=True)
    qqn = q_pochhammer(ctx.parse_real(q_s), ctx.parse_real(q_s), n, ctx)
    true_v = report.exact * qqn
    approx_v = report.approx * qqn
    bound_v = report.bound * qqn
    return TableRow(
        inputs={"n": str(n), "q": q_s, "u": u_s, "t": t_s},
        true_str=format_scientific(true_v, sig, paper_style),
        approx_str=format_scientific(approx_v, sig, paper_style),
        rel_err_str=format_scientific(report.realized_rel_err, errd),
        bound_str=format_scientific(abs(bound_v), errd),
        region=report.region.value,
    )


def _table2_cell(args) -> TableRow:
    (x_s, q_s, bits, tol, sig, errd, paper_style) = args
    ctx = PrecisionContext(working_bits=bits, target_rel_tol=tol)
    mp = ctx.context()
    q = ctx.parse_real(q_s)
    x = ctx.parse_real(x_s)
    arg = mp.sqrt(mp.convert(q)) * mp.convert(x)
    true_v = q_airy(q, arg, ctx)
    approx_v = q_airy_limit_q_to_1(x, q, ctx=ctx)
    rel = abs(true_v - approx_v) / abs(true_v)
    return TableRow(
        inputs={"x": x_s, "q": q_s},
        true_str=format_scientific(true_v, sig, paper_style),
        approx_str=format_scientific(approx_v, sig, paper_style),
        rel_err_str=format_scientific(rel, errd),
        region="LIMIT",
    )


def _run_cells(worker, jobs, workers: int):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(worker, jobs))
    return [worker(j) for j in jobs]


def reproduce_table1(config: RunConfig) -> list:
    """True/approx/error grid for (q;q)_n S_n(u q^(-nt); q), inner formula."""
    jobs = [
        (u, t, config.n, config.q, config.working_bits, config.target_rel_tol,
         config.sig_digits, config.err_digits, config.paper_style)
        for u in config.u_list
        for t in config.t_list
    ]
    return _run_cells(_table1_cell, jobs, config.workers)


def reproduce_table2(config: RunConfig) -> list:
    """True/approx/error grid for A_q(sqrt(q) x) against the Airy limit."""
    jobs = [
        (x, q, config.working_bits, config.target_rel_tol,
         config.sig_digits, config.err_digits, config.paper_style)
        for x in config.x_list
        for q in config.q_list
    ]
    return _run_cells(_table2_cell, jobs, config.workers)


# ---------------------------------------------------------------------------
# serialization


def rows_to_json(rows) -> str:
    payload = [
        {
            "inputs": r.inputs,
            "true": r.true_str,
            "approx": r.approx_str,
            "bound": r.bound_str,
            "rel_err": r.rel_err_str,
            "region": r.region,
        }
        for r in rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    keys = sorted({k for r in rows for k in r.inputs})
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys + ["true", "approx", "bound", "rel_err", "region"])
    for r in rows:
        writer.writerow(
            [r.inputs.get(k, "") for k in keys]
            + [r.true_str, r.approx_str, r.bound_str, r.rel_err_str, r.region]
        )
    return buf.getvalue()


def rows_to_text(rows) -> str:
    lines = []
    for r in rows:
        inp = " ".join(f"{k}={v}" for k, v in r.inputs.items())
        lines.append(
            f"{inp:40s} true={r.true_str:>18s} approx={r.approx_str:>18s} "
            f"err={r.rel_err_str:>10s} [{r.region}]"
        )
    return "\n".join(lines) + "\n"


def render_rows(rows, fmt: str) -> str:
    if fmt == "json":
        return rows_to_json(rows)
    if fmt == "csv":
        return rows_to_csv(rows)
    return rows_to_text(rows)


# ---------------------------------------------------------------------------
# verification suites


def _fmt(v) -> str:
    return format_scientific(v, 3) if not isinstance(v, str) else v


def _bounds_suite(config: RunConfig, full: bool) -> SuiteReport:
    ctx = config.ctx()
    mp = ctx.context()
    ns = (50, 100) if full else (50,)
    qs = ("0.3", "0.5", "0.7") if full else ("0.5",)
    us = ("1", "-1", "0,1", "0.7071067811865475244,0.7071067811865475244")
    inner_ts = ("-1", "0", "0.5", "1", "1.2", "1.6", "1.9")
    outer_ts = ("0.5", "1", "2", "3", "4")
    checks = []
    for n in ns:
        for q_s in qs:
            params = QParams(q_s, n)
            for u in us:
                for t in inner_ts:
                    rep = approx_inner(EvalPoint(params, u, t), ctx, with_exact=True)
                    resid = abs(rep.exact - rep.approx)
                    checks.append(
                        CheckResult(
                            f"inner n={n} q={q_s} u={u} t={t}",
                            _fmt(resid),
                            _fmt(rep.bound),
                            bool(resid <= rep.bound),
                        )
                    )
                for t in outer_ts:
                    rep = approx_outer(EvalPoint(params, u, t), ctx, with_exact=True)
                    resid = abs(rep.exact - rep.approx)
                    checks.append(
                        CheckResult(
                            f"outer n={n} q={q_s} u={u} t={t}",
                            _fmt(resid),
                            _fmt(rep.bound),
                            bool(resid <= rep.bound),
                        )
                    )
    return SuiteReport("bounds", tuple(checks))


def _symmetry_suite(config: RunConfig, full: bool) -> SuiteReport:
    ctx = config.ctx()
    mp = ctx.context()
    tol = 100 * ctx.tol_in(mp)
    grid = []
    ns = (1, 5, 20, 50, 100) if full else (1, 5, 50)
    qs = ("0.3", "0.5", "0.7", "0.9") if full else ("0.5", "0.9")
    for n in ns:
        for q_s in qs:
            q = mp.mpf(q_s)
            big = 10 * mp.exp(-2 * n * mp.log(q))
            for z in (mp.mpf(2), -mp.mpf("0.75"), mp.mpc(1, 1), big, -big / 3):
                grid.append((n, q_s, z))
    checks = []
    for n, q_s, z in grid:
        r = symmetry_residual(QParams(q_s, n), z, ctx)
        checks.append(
            CheckResult(
                f"symmetry n={n} q={q_s} |z|={_fmt(abs(z))}",
                _fmt(r),
                _fmt(tol),
                bool(r < tol),
            )
        )
    return SuiteReport("symmetry", tuple(checks))


def _recurrence_suite(config: RunConfig, full: bool) -> SuiteReport:
    ctx = config.ctx()
    mp = ctx.context()
    tol = 100 * ctx.tol_in(mp)
    qs = ("0.2", "0.5", "0.8", "0.95")
    zs = ("1", "-3", "2,5", "0.1", "-20")
    checks = []
    for q_s in qs:
        for z_s in zs:
            q = mp.mpf(q_s)
            z = ctx.parse_complex(z_s)
            a0 = q_airy(q, z, ctx)
            a1 = q_airy(q, q * z, ctx)
            a2 = q_airy(q, q * q * z, ctx)
            resid = abs(a0 - a1 + q * z * a2)
            scale = max(abs(a0), abs(q * z * a2))
            checks.append(
                CheckResult(
                    f"recurrence q={q_s} z={z_s}",
                    _fmt(resid),
                    _fmt(tol * scale),
                    bool(resid <= tol * scale),
                )
            )
    return SuiteReport("recurrence", tuple(checks))


def _limits_suite(config: RunConfig, full: bool) -> SuiteReport:
    ctx = config.ctx()
    mp = ctx.context()
    checks = []
    # Wigert convergence at q = 0.5, x = 1
    q = mp.mpf("0.5")
    qqinf = q_pochhammer_inf(q, q, ctx).value
    aq = q_airy(q, mp.mpf(1), ctx)
    devs = []
    for n in (10, 20, 40, 80):
        sn = stieltjes_wigert(QParams("0.5", n), mp.mpf(1), ctx)
        devs.append(abs(qqinf * sn - aq))
    mono = all(
        mp.log10(devs[i + 1]) < mp.log10(devs[i]) for i in range(len(devs) - 1)
    )
    checks.append(
        CheckResult("wigert monotone n=10..80", _fmt(devs[-1]), "decreasing", mono)
    )
    checks.append(
        CheckResult("wigert n=80", _fmt(devs[-1]), "1e-10", bool(devs[-1] < mp.mpf("1e-10")))
    )
    # exponential limit A_q((1-q)z) -> exp(-z) at q = 0.999
    q = mp.mpf("0.999")
    for z in (mp.mpf(1), mp.mpf(-2), mp.mpc(0, 3)):
        val = q_airy(q, (1 - q) * z, ctx)
        ref = mp.exp(-z)
        dev = abs(val - ref) / abs(ref)
        checks.append(
            CheckResult(
                f"exp-limit z={z}", _fmt(dev), "0.02", bool(dev < mp.mpf("0.02"))
            )
        )
    # large-z theta representation at q = 0.5
    q = mp.mpf("0.5")
    for e in ((40, 80) if full else (40,)):
        z = mp.exp(-e * mp.log(q))
        m = int(mpmath.floor(mp.log(z) / (-2 * mp.log(q))))
        ref = q_airy(q, z, ctx)
        val = q_airy_large_z(q, z, ctx)
        dev = abs(val - ref) / abs(ref)
        thr = mp.exp(mp.mpf("0.9") * m * mp.log(q))
        checks.append(
            CheckResult(f"large-z |z|=q^-{e}", _fmt(dev), _fmt(thr), bool(dev < thr))
        )
    return SuiteReport("limits", tuple(checks))


def _airy_suite(config: RunConfig, full: bool) -> SuiteReport:
    ctx = config.ctx()
    mp = ctx.context()
    policy = AiryEvalPolicy()
    checks = []
    for x_s in ("-25", "-30", "-35"):
        x = mp.mpf(x_s)
        t_val = airy_ai_taylor(x, ctx)
        a_val, _ = airy_ai_asymptotic(x, policy, ctx)
        dev = abs(t_val - a_val) / abs(t_val)
        checks.append(
            CheckResult(
                f"dual-path x={x_s}", _fmt(dev), "1e-20", bool(dev < mp.mpf("1e-20"))
            )
        )
    for x_s in ("-10", "-1", "0", "1", "5"):
        x = mp.mpf(x_s)
        ai = airy_ai_taylor(x, ctx)
        d2 = airy_ai_second_derivative(x, ctx)
        resid = abs(d2 - x * ai) / max(abs(ai), mp.mpf(2) ** (-ctx.working_bits // 2))
        checks.append(
            CheckResult(
                f"ode x={x_s}", _fmt(resid), "1e-10", bool(resid < mp.mpf("1e-10"))
            )
        )
    root = first_negative_zero(policy, ctx)
    dev = abs(root - mp.mpf("-2.338107"))
    checks.append(
        CheckResult("first zero", _fmt(root), "-2.338107 +- 1e-5", bool(dev < mp.mpf("1e-5")))
    )
    return SuiteReport("airy", tuple(checks))


_SUITES = {
    "bounds": _bounds_suite,
    "symmetry": _symmetry_suite,
    "recurrence": _recurrence_suite,
    "limits": _limits_suite,
    "airy": _airy_suite,
}


def run_suite(name: str, config: RunConfig | None = None, grid: str = "small") -> SuiteReport:
    """Execute one named property suite; failures are data, not errors."""
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(_SUITES)}")
    config = config or RunConfig()
    return _SUITES[name](config, grid == "full")


def suite_names():
    return tuple(_SUITES)
