"""Exact series/product evaluation of the q-objects.

Stieltjes-Wigert polynomials S_n, the q-Airy (Ramanujan) function A_q and
its truncation A_{q,n}, the bilateral theta sum, the p_n normalization,
the log-normal weight, and the inner/outer symmetry residual.  Every sum
runs under the cancellation-certified escalation engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath

from .precision import (
    DomainError,
    NonConvergent,
    PrecisionContext,
    evaluate_with_escalation,
    q_pochhammer,
    q_pochhammer_inf,
)

_MAX_SERIES_TERMS = 2_000_000


@dataclass(frozen=True)
class QParams:
    """Base q in (0, 1) and polynomial degree n."""

    q: object
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("degree n must be non-negative")
        q = mpmath.mpf(str(self.q)) if isinstance(self.q, str) else mpmath.mpf(self.q)
        if not (0 < q < 1):
            raise DomainError(f"q must lie in (0, 1), got {self.q}")


@dataclass(frozen=True)
class EvalPoint:
    """Scaled coordinate z = u * q^(-n t)."""

    params: QParams
    u: object
    t: object

    def z(self, ctx: PrecisionContext):
        mp = ctx.context()
        q = ctx.parse_real(self.params.q)
        u = ctx.parse_complex(self.u)
        t = ctx.parse_real(self.t)
        return u * mp.exp(-self.params.n * t * mp.log(q))


def stieltjes_wigert(params: QParams, z, ctx: PrecisionContext):
    """S_n(z; q) = sum_{j=0}^{n} q^(j^2) / ((q;q)_j (q;q)_{n-j}) (-z)^j."""
    n = params.n
    q0 = ctx.parse_real(params.q)
    z0 = ctx.parse_complex(z)
    real = z0.imag == 0
    z_in = z0.real if real else z0

    def evaluator(mp, trunc_tol):
        q = mp.convert(q0)
        zz = mp.convert(z_in)
        table = [mp.mpf(1)]
        qm = mp.mpf(1)
        for _ in range(n):
            qm *= q
            table.append(table[-1] * (1 - qm))
        s = mp.mpf(0) if real else mp.mpc(0)
        mx = mp.mpf(0)
        power = mp.mpf(1) if real else mp.mpc(1)
        qj2 = mp.mpf(1)
        qodd = q
        for j in range(n + 1):
            term = qj2 / (table[j] * table[n - j]) * power
            s += term
            mx = max(mx, abs(term))
            power *= -zz
            qj2 *= qodd
            qodd *= q * q
        return s, mx

    value, _ = evaluate_with_escalation(evaluator, ctx)
    return value


def _q_airy_sum(mp, q, z, trunc_tol, max_k=None, real=False):
    """Shared A_q partial-sum loop with a hump-aware stopping rule.

    Terms grow until k* ~ ln|z| / (2 ln(1/q)), so smallness of a term is
    only a valid stop once q^(2k+1)|z|/(1-q^(k+1)) < 1; two consecutive
    sub-threshold terms are required past that point.
    """
    s = mp.mpf(0) if real else mp.mpc(0)
    mx = mp.mpf(0)
    abs_z = abs(z)
    poch = mp.mpf(1)
    power = mp.mpf(1) if real else mp.mpc(1)
    qk2 = mp.mpf(1)
    qodd = q
    qk1 = q
    q2k1 = q
    hits = 0
    k = 0
    while True:
        term = qk2 / poch * power
        s += term
        mx = max(mx, abs(term))
        if max_k is not None and k >= max_k:
            break
        past_hump = q2k1 * abs_z < 1 - qk1
        if past_hump and abs(term) < trunc_tol * max(mx, abs(s)):
            hits += 1
            if hits >= 2:
                break
        else:
            hits = 0
        k += 1
        if k > _MAX_SERIES_TERMS:
            raise NonConvergent("q-Airy series did not stabilize")
        power *= -z
        qk2 *= qodd
        qodd *= q * q
        poch *= 1 - qk1
        qk1 *= q
        q2k1 *= q * q
    return s, mx


def q_airy(q, z, ctx: PrecisionContext):
    """A_q(z) = sum_{k>=0} q^(k^2) / (q;q)_k (-z)^k."""
    q0 = ctx.parse_real(q)
    if not (0 < q0 < 1):
        raise DomainError(f"q must lie in (0, 1), got {q}")
    z0 = ctx.parse_complex(z)
    real = z0.imag == 0
    z_in = z0.real if real else z0

    def evaluator(mp, trunc_tol):
        return _q_airy_sum(mp, mp.convert(q0), mp.convert(z_in), trunc_tol, real=real)

    value, _ = evaluate_with_escalation(evaluator, ctx)
    return value


def q_airy_poly(params: QParams, z, ctx: PrecisionContext):
    """A_{q,n}(z): the A_q series truncated at k = n."""
    q0 = ctx.parse_real(params.q)
    z0 = ctx.parse_complex(z)
    real = z0.imag == 0
    z_in = z0.real if real else z0

    def evaluator(mp, trunc_tol):
        return _q_airy_sum(
            mp, mp.convert(q0), mp.convert(z_in), trunc_tol, max_k=params.n, real=real
        )

    value, _ = evaluate_with_escalation(evaluator, ctx)
    return value


def theta_q(q, z, ctx: PrecisionContext):
    """Bilateral theta sum over k in Z of q^(k^2) z^k, truncated per tail.

    By the triple product factorization the sum vanishes identically at
    z = -q^(2k+1), k integer; those points are detected up front and return
    an exact 0 (the series cancels pairwise there, so no truncation of it
    can be certified to a relative tolerance).
    """
    q0 = ctx.parse_real(q)
    if not (0 < q0 < 1):
        raise DomainError(f"q must lie in (0, 1), got {q}")
    z0 = ctx.parse_complex(z)
    if z0 == 0:
        raise DomainError("theta_q requires z != 0")
    real = z0.imag == 0
    z_in = z0.real if real else z0
    if real and z_in < 0:
        mp0 = ctx.context()
        j = int(mpmath.nint(mp0.log(-z_in) / mp0.log(mp0.convert(q0))))
        if j % 2 != 0 and mp0.convert(q0) ** j == -z_in:
            return mp0.mpf(0)

    def evaluator(mp, trunc_tol):
        q_ = mp.convert(q0)
        zz = mp.convert(z_in)
        s = (mp.mpf(1) if real else mp.mpc(1))
        mx = mp.mpf(1)
        scale = max(abs(zz), 1 / abs(zz))
        zp = zz
        zm = 1 / zz
        qk2 = q_
        qodd = q_ ** 3
        q2k1 = q_
        hits = 0
        k = 1
        while True:
            tp = qk2 * zp
            tm = qk2 * zm
            s += tp + tm
            mx = max(mx, abs(tp), abs(tm))
            past_hump = q2k1 * scale < 1
            if past_hump and max(abs(tp), abs(tm)) < trunc_tol * max(mx, abs(s)):
                hits += 1
                if hits >= 2:
                    break
            else:
                hits = 0
            k += 1
            if k > _MAX_SERIES_TERMS:
                raise NonConvergent("theta series did not stabilize")
            zp *= zz
            zm /= zz
            qk2 *= qodd
            qodd *= q_ * q_
            q2k1 *= q_ * q_
        return s, mx

    value, _ = evaluate_with_escalation(evaluator, ctx)
    return value


def sw_p(params: QParams, x, ctx: PrecisionContext):
    """p_n(x) = (-1)^n q^(n/2 + 1/4) sqrt((q;q)_n) S_n(q^(1/2) x; q)."""
    mp = ctx.context()
    q = mp.convert(ctx.parse_real(params.q))
    x0 = ctx.parse_complex(x)
    x_in = x0.real if x0.imag == 0 else x0
    n = params.n
    logq = mp.log(q)
    # fractional powers of q via exp(log q * e): one well-tested path
    pref = mp.exp((mp.mpf(n) / 2 + mp.mpf(1) / 4) * logq) * mp.sqrt(
        q_pochhammer(q, q, n, ctx)
    )
    if n % 2:
        pref = -pref
    root_q = mp.exp(logq / 2)
    return pref * stieltjes_wigert(params, root_q * x_in, ctx)


def symmetry_residual(params: QParams, z, ctx: PrecisionContext):
    """Relative residual of S_n(z;q) = (-z q^n)^n S_n(1/(z q^(2n)); q)."""
    mp = ctx.context()
    z0 = ctx.parse_complex(z)
    if z0 == 0:
        raise DomainError("symmetry relation requires z != 0")
    z_in = z0.real if z0.imag == 0 else z0
    q = mp.convert(ctx.parse_real(params.q))
    n = params.n
    lhs = stieltjes_wigert(params, z_in, ctx)
    qn = q ** n
    mapped = 1 / (z_in * qn * qn)
    rhs = (-z_in * qn) ** n * stieltjes_wigert(params, mapped, ctx)
    if lhs == 0:
        # at an exact zero the residual degenerates; report the absolute gap
        return abs(lhs - rhs)
    return abs(lhs - rhs) / abs(lhs)


def weight_w(x, k, ctx: PrecisionContext):
    """w(x) = k pi^(-1/2) exp(-k^2 log^2 x) on x > 0."""
    mp = ctx.context()
    x = mp.convert(ctx.parse_real(x))
    k = mp.convert(ctx.parse_real(k))
    if x <= 0:
        raise DomainError("weight_w requires x > 0")
    if k <= 0:
        raise DomainError("weight_w requires k > 0")
    lg = mp.log(x)
    return k / mp.sqrt(mp.pi) * mp.exp(-(k * k) * (lg * lg))
