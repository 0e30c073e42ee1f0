"""Global approximants for S_n with computable remainder bounds.

The inner formula approximates (q;q)_n S_n(z;q) by A_q(z) for t < 2; the
outer formula approximates it by (-z)^n q^(n^2) A_q(q^(-2n)/z) for t > 0.
Both carry an explicitly evaluable bound on the remainder, exponentially
small in n.  The theta-region formula (1 <= t < 2) and the large-z theta
representation of A_q are provided with heuristic (uncertified) error
scales.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import mpmath

from .precision import DomainError, PrecisionContext, q_pochhammer, q_pochhammer_inf
from .qfunctions import EvalPoint, QParams, q_airy, stieltjes_wigert, theta_q


class RegionTag(enum.Enum):
    INNER = "INNER"
    OUTER = "OUTER"
    THETA = "THETA"


@dataclass(frozen=True)
class ApproxReport:
    """Approximant with its certified remainder bound, on the S_n scale."""

    approx: object
    bound: object
    region: RegionTag
    sigma_or_delta: object
    exact: object = None
    realized_rel_err: object = None


def sigma_of_t(t):
    """max(1/2, 1/2 + t/4); valid for t < 2."""
    t = mpmath.mpf(str(t)) if isinstance(t, str) else mpmath.mpf(t)
    if t >= 2:
        raise DomainError("sigma_of_t requires t < 2")
    half = mpmath.mpf(1) / 2
    return max(half, half + t / 4)


def delta_of_t(t):
    """min(3/2, 1 + t/4); valid for t > 0."""
    t = mpmath.mpf(str(t)) if isinstance(t, str) else mpmath.mpf(t)
    if t <= 0:
        raise DomainError("delta_of_t requires t > 0")
    return min(mpmath.mpf(3) / 2, 1 + t / 4)


def _inner_bracket(mp, q, n, sigma):
    floor_ns = int(mpmath.floor(mp.mpf(n) * mp.convert(sigma)))
    return (
        mp.exp(n * (1 - mp.convert(sigma)) * mp.log(q)) / (1 - q)
        + 2 / (1 - q) * mp.mpf(2) ** (-floor_ns)
    )


def _outer_bracket(mp, q, n, delta):
    floor_nd = int(mpmath.floor(mp.mpf(n) * (2 - mp.convert(delta))))
    return (
        mp.exp(n * (mp.convert(delta) - 1) * mp.log(q)) / (1 - q)
        + 2 / (1 - q) * mp.mpf(2) ** (-floor_nd)
    )


def approx_inner(point: EvalPoint, ctx: PrecisionContext, with_exact: bool = False):
    """Inner-region approximation S_n(z;q) ~ A_q(z) / (q;q)_n with bound."""
    mp = ctx.context()
    params = point.params
    n = params.n
    t = ctx.parse_real(point.t)
    if t >= 2:
        raise DomainError("inner region requires t < 2")
    q = mp.convert(ctx.parse_real(params.q))
    z = point.z(ctx)
    sigma = sigma_of_t(t)
    qqn = q_pochhammer(q, q, n, ctx)
    approx = q_airy(q, z, ctx) / qqn
    scale = q_airy(q, -abs(z), ctx)
    bound = _inner_bracket(mp, q, n, sigma) * scale / qqn
    exact = None
    rel_err = None
    if with_exact:
        exact = stieltjes_wigert(params, z, ctx)
        rel_err = abs(exact - approx) / abs(exact)
    return ApproxReport(approx, bound, RegionTag.INNER, sigma, exact, rel_err)


def approx_outer(point: EvalPoint, ctx: PrecisionContext, with_exact: bool = False):
    """Outer-region approximation with the (-z)^n q^(n^2) prefactor.

    The prefactor is assembled in log space (principal branch) to avoid
    n^2-sized rounding blowup: (-z)^n means exp(n Log(-z)).
    """
    mp = ctx.context()
    params = point.params
    n = params.n
    t = ctx.parse_real(point.t)
    if t <= 0:
        raise DomainError("outer region requires t > 0")
    u = ctx.parse_complex(point.u)
    if u == 0:
        raise DomainError("outer region requires u != 0")
    q = mp.convert(ctx.parse_real(params.q))
    z = point.z(ctx)
    delta = delta_of_t(t)
    qqn = q_pochhammer(q, q, n, ctx)
    w = mp.exp(-2 * n * mp.log(q)) / z
    log_pref = n * mp.log(mp.mpc(-z)) + n * n * mp.log(q) - mp.log(qqn)
    pref = mp.exp(log_pref)
    # drop the spurious imaginary part exp(i n pi) leaves for real z
    if z.imag == 0 and abs(pref.imag) <= abs(pref.real) * mp.mpf(2) ** (
        -(ctx.working_bits // 2)
    ):
        pref = pref.real
    core = q_airy(q, w, ctx)
    approx = pref * core
    scale = q_airy(q, -abs(w), ctx)
    bound = _outer_bracket(mp, q, n, delta) * scale * abs(pref)
    exact = None
    rel_err = None
    if with_exact:
        exact = stieltjes_wigert(params, z, ctx)
        rel_err = abs(exact - approx) / abs(exact)
    return ApproxReport(approx, bound, RegionTag.OUTER, delta, exact, rel_err)


def theta_region_approx(
    point: EvalPoint,
    small_delta,
    ctx: PrecisionContext,
    m_override: int | None = None,
):
    """Theta-type approximation for 1 <= t < 2.

    Returns the approximant only; its error is O(q^(n(l - small_delta)))
    with l = (2-t)/2, a heuristic scale (see theta_region_error_scale),
    not a certified bound.
    """
    mp = ctx.context()
    params = point.params
    n = params.n
    t = mp.convert(ctx.parse_real(point.t))
    if not (1 <= t < 2):
        raise DomainError("theta region requires 1 <= t < 2")
    u = ctx.parse_complex(point.u)
    if u == 0:
        raise DomainError("theta region requires u != 0")
    q = mp.convert(ctx.parse_real(params.q))
    u = mp.convert(u)
    l = (2 - t) / 2
    m = int(mpmath.floor(n * l)) if m_override is None else int(m_override)
    logq = mp.log(q)
    expo = n * n * (1 - t) - m * (n * (2 - t) - m)
    qqn = q_pochhammer(q, q, n, ctx)
    qqinf = q_pochhammer_inf(q, q, ctx).value
    pref = (-u) ** (n - m) * mp.exp(expo * logq) / (qqn * qqinf)
    arg = mp.exp((2 * m - n * (2 - t)) * logq) / (-u)
    return pref * theta_q(q, arg, ctx)


def theta_region_error_scale(params: QParams, t, small_delta, ctx: PrecisionContext):
    """Heuristic magnitude q^(n(l - small_delta)) of the theta-region error."""
    mp = ctx.context()
    t = mp.convert(ctx.parse_real(t))
    q = mp.convert(ctx.parse_real(params.q))
    l = (2 - t) / 2
    d = mp.convert(ctx.parse_real(small_delta))
    return mp.exp(params.n * (l - d) * mp.log(q))


def q_airy_large_z(q, z, ctx: PrecisionContext):
    """Theta representation of A_q(z) for large |z|.

    A_q(z) ~ (-z)^m q^(m^2) / (q;q)_inf * Theta_q(-q^(2m) z) with
    m = floor(ln|z| / (-2 ln q)); stated as z -> infinity, so |z| <= 1 is
    rejected.  The error is O(q^(m(1 - delta))), uncertified.
    """
    mp = ctx.context()
    q = mp.convert(ctx.parse_real(q))
    if not (0 < q < 1):
        raise DomainError(f"q must lie in (0, 1), got {q}")
    z0 = ctx.parse_complex(z)
    z_in = z0.real if z0.imag == 0 else mp.convert(z0)
    if abs(z_in) <= 1:
        raise DomainError("large-z representation requires |z| > 1")
    m = int(mpmath.floor(mp.log(abs(z_in)) / (-2 * mp.log(q))))
    qqinf = q_pochhammer_inf(q, q, ctx).value
    q2m = q ** (2 * m)
    return (-z_in) ** m * q ** (m * m) / qqinf * theta_q(q, -q2m * z_in, ctx)
