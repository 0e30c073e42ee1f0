"""The q -> 1 limit: the turning-point map xi, a from-scratch real Airy
function, and the composed approximation of A_q(sqrt(q) x).

Ai is evaluated by a Maclaurin series (cancellation at negative arguments
absorbed by precision escalation) below the cutoff and by the standard
large-|x| expansions above it; the two paths overlap so they can be
cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .precision import (
    AsymptoticAccuracyLoss,
    DomainError,
    EscalationExhausted,
    PrecisionContext,
    evaluate_with_escalation,
)
from .quadrature import adaptive_gauss_legendre

_QUAD_REL_TOL = "1e-26"


@dataclass(frozen=True)
class XiResult:
    """xi(x) with the underlying integral and its quadrature error estimate."""

    xi: object
    integral_value: object
    quadrature_error_estimate: object


@dataclass(frozen=True)
class AiryEvalPolicy:
    """Switch-over policy between the Taylor and asymptotic Ai paths."""

    taylor_cutoff: float = 30.0
    asymptotic_terms: int = 12
    overlap_band: tuple = (25.0, 35.0)

    def __post_init__(self):
        lo, hi = self.overlap_band
        if not (lo <= self.taylor_cutoff <= hi):
            raise ValueError("taylor_cutoff must lie inside overlap_band")
        if self.asymptotic_terms < 1:
            raise ValueError("asymptotic_terms must be >= 1")


def xi_map(x, q, ctx: PrecisionContext) -> XiResult:
    """Solve (2/3) xi^(3/2) = I(x) / log(1/q), x > 1/4.

    I(x) = integral_0^{log 4x} arctan(sqrt(e^s - 1)) ds, computed after the
    substitution s = w^2 which makes the integrand analytic at 0.
    """
    mp = ctx.context()
    x = mp.convert(ctx.parse_real(x))
    q = mp.convert(ctx.parse_real(q))
    if not (0 < q < 1):
        raise DomainError(f"q must lie in (0, 1), got {q}")
    if x < mp.mpf(1) / 4:
        raise DomainError("xi_map requires x >= 1/4")
    if x == mp.mpf(1) / 4:
        return XiResult(mp.mpf(0), mp.mpf(0), mp.mpf(0))
    upper = mp.sqrt(mp.log(4 * x))

    def integrand(w):
        return 2 * w * mp.atan(mp.sqrt(mp.expm1(w * w)))

    integral, err = adaptive_gauss_legendre(
        integrand, mp.mpf(0), upper, mp, mp.mpf(_QUAD_REL_TOL)
    )
    log_inv_q = -mp.log(q)
    xi = (3 * integral / (2 * log_inv_q)) ** (mp.mpf(2) / 3)
    return XiResult(xi, integral, err)


def _airy_constants(mp):
    c1 = mp.mpf(3) ** (-mp.mpf(2) / 3) / mp.gamma(mp.mpf(2) / 3)
    c2 = mp.mpf(3) ** (-mp.mpf(1) / 3) / mp.gamma(mp.mpf(1) / 3)
    return c1, c2


def airy_ai_taylor(x, ctx: PrecisionContext):
    """Maclaurin-series path, certified by escalation at any real x."""
    x0 = ctx.parse_real(x)

    def evaluator(mp, trunc_tol):
        xx = mp.convert(x0)
        c1, c2 = _airy_constants(mp)
        x3 = xx ** 3
        f, tf = mp.mpf(1), mp.mpf(1)
        g, tg = xx, xx
        mx = max(abs(c1), abs(c2 * xx))
        k = 1
        while True:
            tf = tf * x3 / ((3 * k) * (3 * k - 1))
            tg = tg * x3 / ((3 * k + 1) * (3 * k))
            f += tf
            g += tg
            mx = max(mx, abs(c1 * tf), abs(c2 * tg))
            if abs(c1 * tf) < trunc_tol * mx and abs(c2 * tg) < trunc_tol * mx:
                break
            k += 1
        return c1 * f - c2 * g, mx

    value, _ = evaluate_with_escalation(evaluator, ctx)
    return value


def _asym_coefficients(mp, count):
    """u_0, ..., u_{count-1} of the Airy asymptotic expansions."""
    u = [mp.mpf(1)]
    for k in range(1, count):
        u.append(
            u[-1] * (6 * k - 1) * (6 * k - 3) * (6 * k - 5) / mp.mpf(216 * k * (2 * k - 1))
        )
    return u

def airy_ai_asymptotic(x, policy: AiryEvalPolicy, ctx: PrecisionContext):
    """Large-|x| expansion; returns (value, relative_error_estimate).

    The error estimate is the magnitude of the first omitted coefficient
    term, the usual optimistic-but-honest measure for these expansions.
    """
    mp = ctx.context()
    xx = mp.convert(ctx.parse_real(x))
    terms = policy.asymptotic_terms
    ax = abs(xx)
    zeta = mp.mpf(2) / 3 * ax ** (mp.mpf(3) / 2)
    root_pi = mp.sqrt(mp.pi)
    quarter = ax ** (mp.mpf(1) / 4)
    if xx > 0:
        u = _asym_coefficients(mp, terms + 1)
        s = mp.mpf(0)
        for k in range(terms):
            s += (-1) ** k * u[k] / zeta ** k
        value = mp.exp(-zeta) * s / (2 * root_pi * quarter)
        err = u[terms] / zeta ** terms
    else:
        u = _asym_coefficients(mp, 2 * terms + 1)
        s_even = mp.mpf(0)
        s_odd = mp.mpf(0)
        for k in range(terms):
            s_even += (-1) ** k * u[2 * k] / zeta ** (2 * k)
            s_odd += (-1) ** k * u[2 * k + 1] / zeta ** (2 * k + 1)
        phase = zeta - mp.pi / 4
        value = (mp.cos(phase) * s_even + mp.sin(phase) * s_odd) / (root_pi * quarter)
        err = u[2 * terms] / zeta ** (2 * terms)
    return value, err


def airy_ai(x, policy: AiryEvalPolicy | None = None, ctx: PrecisionContext | None = None):
    """Real Airy function Ai(x), certified to the context tolerance."""
    policy = policy or AiryEvalPolicy()
    ctx = ctx or PrecisionContext()
    mp = ctx.context()
    xx = mp.convert(ctx.parse_real(x))
    if abs(xx) <= policy.taylor_cutoff:
        return airy_ai_taylor(xx, ctx)
    value, err_est = airy_ai_asymptotic(xx, policy, ctx)
    if err_est <= ctx.tol_in(mp):
        return value
    try:
        return airy_ai_taylor(xx, ctx)
    except EscalationExhausted as exc:
        raise AsymptoticAccuracyLoss(
            f"asymptotic tail {err_est} above tolerance and Taylor escalation exhausted"
        ) from exc


def airy_ai_second_derivative(x, ctx: PrecisionContext):
    """Ai''(x) by term-wise differentiation of the Maclaurin series."""
    x0 = ctx.parse_real(x)

    def evaluator(mp, trunc_tol):
        xx = mp.convert(x0)
        c1, c2 = _airy_constants(mp)
        x3 = xx ** 3
        # d2/dx2 of f = sum c_k x^{3k}: terms c_k (3k)(3k-1) x^{3k-2}, k >= 1
        # d2/dx2 of g = sum d_k x^{3k+1}: terms d_k (3k+1)(3k) x^{3k-1}, k >= 1
        cf, dg = mp.mpf(1), mp.mpf(1)
        f2 = mp.mpf(0)
        g2 = mp.mpf(0)
        mx = mp.mpf(0)
        k = 1
        xf = xx  # x^{3k-2}
        xg = xx * xx  # x^{3k-1}
        while True:
            cf = cf / ((3 * k) * (3 * k - 1))
            dg = dg / ((3 * k + 1) * (3 * k))
            tf = cf * (3 * k) * (3 * k - 1) * xf
            tg = dg * (3 * k + 1) * (3 * k) * xg
            f2 += tf
            g2 += tg
            mx = max(mx, abs(c1 * tf), abs(c2 * tg))
            if abs(c1 * tf) < trunc_tol * max(mx, mp.mpf(1)) and abs(
                c2 * tg
            ) < trunc_tol * max(mx, mp.mpf(1)):
                break
            k += 1
            xf *= x3
            xg *= x3
        return c1 * f2 - c2 * g2, mx

    value, _ = evaluate_with_escalation(evaluator, ctx)
    return value


def first_negative_zero(
    policy: AiryEvalPolicy | None = None, ctx: PrecisionContext | None = None
):
    """First zero of Ai on the negative axis, by bisection on the Taylor path."""
    policy = policy or AiryEvalPolicy()
    ctx = ctx or PrecisionContext()
    mp = ctx.context()
    a, b = mp.mpf(-3), mp.mpf(-2)
    fa = airy_ai_taylor(a, ctx)
    fb = airy_ai_taylor(b, ctx)
    if fa * fb >= 0:
        raise ArithmeticError("no sign change on the bisection bracket")
    target = ctx.tol_in(mp)
    while b - a > target * abs(a):
        m = (a + b) / 2
        fm = airy_ai_taylor(m, ctx)
        if fm == 0:
            return m
        if fa * fm < 0:
            b, fb = m, fm
        else:
            a, fa = m, fm
    return (a + b) / 2


def q_airy_limit_q_to_1(
    x, q, policy: AiryEvalPolicy | None = None, ctx: PrecisionContext | None = None
):
    """Airy-based approximation of A_q(sqrt(q) x) for x > 1/4 as q -> 1."""
    policy = policy or AiryEvalPolicy()
    ctx = ctx or PrecisionContext()
    # pi and log q at escalated precision: the exponent divides by log(1/q),
    # amplifying their error when q is close to 1
    mp = ctx.context(ctx.working_bits + ctx.guard_bits)
    x = mp.convert(ctx.parse_real(x))
    q = mp.convert(ctx.parse_real(q))
    if not (0 < q < 1):
        raise DomainError(f"q must lie in (0, 1), got {q}")
    if x <= mp.mpf(1) / 4:
        raise DomainError("limit formula requires x > 1/4")
    xi = xi_map(x, q, ctx).xi
    xi = mp.convert(xi)
    log_inv_q = -mp.log(q)
    lg = mp.log(x)
    pref = 2 * mp.sqrt(mp.pi) * mp.exp((3 * lg * lg - mp.pi ** 2) / (12 * log_inv_q))
    shape = (xi / (4 * x - 1)) ** (mp.mpf(1) / 4)
    return pref * shape * mp.convert(airy_ai(-xi, policy, ctx))
