"""Arbitrary-precision arithmetic layer.

Provides the precision context threaded through every evaluation, the
q-shifted factorials, the cancellation-aware escalation engine, and exact
decimal serialization.  All numerics are backed by mpmath working contexts
cloned per call; the global mpmath state is never touched, so everything
here is safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from typing import Callable, Tuple

import mpmath


class DomainError(ValueError):
    """Input outside the documented domain of an operation."""


class NonConvergent(ArithmeticError):
    """An infinite product or series cannot be truncated within budget."""


class EscalationExhausted(ArithmeticError):
    """Precision escalation hit max_escalations without certification."""


class AsymptoticAccuracyLoss(ArithmeticError):
    """Neither the asymptotic nor the escalated Taylor path reached the target."""


def make_context(bits: int):
    """Fresh mpmath working context at the given binary precision."""
    ctx = mpmath.mp.clone()
    ctx.prec = int(bits)
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision, target accuracy and escalation policy.

    ``working_bits`` is the starting binary precision; documented output
    accuracy is always relative to ``target_rel_tol``, never to
    ``working_bits`` alone (the escalation engine raises the working
    precision as needed).
    """

    working_bits: int = 256
    target_rel_tol: str = "1e-30"
    max_escalations: int = 8
    guard_bits: int = 32

    def __post_init__(self):
        if self.working_bits < 64:
            raise ValueError("working_bits must be >= 64")
        if self.max_escalations < 1:
            raise ValueError("max_escalations must be >= 1")
        if self.guard_bits < 0:
            raise ValueError("guard_bits must be >= 0")
        tol = mpmath.mpf(str(self.target_rel_tol))
        if not (0 < tol < 1):
            raise ValueError("target_rel_tol must lie in (0, 1)")

    @property
    def tol_bits(self) -> int:
        """ceil(log2(1/target_rel_tol))."""
        tol = mpmath.mpf(str(self.target_rel_tol))
        return int(mpmath.ceil(-mpmath.log(tol, 2)))

    def context(self, bits: int | None = None):
        return make_context(self.working_bits if bits is None else bits)

    def tol_in(self, mp):
        return mp.mpf(str(self.target_rel_tol))

    def parse_real(self, value):
        """Round a decimal string (or number) once at working_bits.

        Escalated re-runs convert the result losslessly, so every internal
        reuse sees the identical rounded value.
        """
        mp = self.context()
        return mp.mpf(value if not isinstance(value, str) else value.strip())

    def parse_complex(self, value):
        mp = self.context()
        if isinstance(value, str):
            s = value.strip()
            if "," in s:
                re_s, im_s = s.split(",", 1)
                return mp.mpc(mp.mpf(re_s.strip()), mp.mpf(im_s.strip()))
            return mp.mpc(mp.mpf(s))
        return mp.convert(value)


@dataclass(frozen=True)
class ConditionReport:
    """Cancellation diagnostics attached to an escalated evaluation."""

    max_term_magnitude: object
    result_magnitude: object
    cancellation_bits: int
    escalations_used: int


def _cancellation_bits(mp, max_term, result_mag) -> int | None:
    """Bits lost to cancellation; None means total loss (zero result)."""
    if max_term == 0:
        return 0
    if result_mag == 0:
        return None
    ratio = max_term / result_mag
    if ratio <= 1:
        return 0
    return int(mpmath.ceil(mp.log(ratio, 2)))


def evaluate_with_escalation(evaluator: Callable, ctx: PrecisionContext):
    """Certify a series evaluation against cancellation.

    ``evaluator(mp, trunc_tol)`` must evaluate the series in the working
    context ``mp``, truncating when terms fall below ``trunc_tol`` relative
    to the running scale, and return ``(value, max_term_magnitude)``.

    Runs at ``ctx.working_bits`` first; whenever the observed cancellation
    plus the tolerance and guard bits exceed the current precision, re-runs
    at the required precision with a truncation tolerance tightened by the
    cancellation factor (so the truncated tail is small relative to the
    final result, not just to the largest term).
    """
    bits = ctx.working_bits
    extra_trunc_bits = 0
    zero_runs = 0
    for used in range(ctx.max_escalations + 1):
        mp = make_context(bits)
        trunc_tol = ctx.tol_in(mp) / mp.mpf(2) ** extra_trunc_bits
        value, max_term = evaluator(mp, trunc_tol)
        result_mag = abs(value)
        cb = _cancellation_bits(mp, max_term, result_mag)
        if cb is not None:
            needed = cb + ctx.tol_bits + ctx.guard_bits
            # certified only if both round-off (working precision) and the
            # truncated tail (trunc_tol * max_term) are small vs the result
            if needed <= bits and cb <= extra_trunc_bits:
                report = ConditionReport(max_term, result_mag, cb, used)
                return value, report
            bits = max(bits, needed)
            extra_trunc_bits = cb + 2
        else:
            # Exact zero under total cancellation: two bit-exact zero results
            # at different precisions certify a true zero of the sum.
            zero_runs += 1
            if zero_runs >= 2:
                report = ConditionReport(max_term, result_mag, bits, used)
                return value, report
            bits = bits + ctx.tol_bits + ctx.guard_bits
            extra_trunc_bits = bits
    raise EscalationExhausted(
        f"not certified to {ctx.target_rel_tol} after "
        f"{ctx.max_escalations} escalations (last precision {bits} bits)"
    )


def _check_q(q) -> None:
    if not (0 < q < 1):
        raise DomainError(f"q must lie in (0, 1), got {q}")


def q_pochhammer(a, q, n: int, ctx: PrecisionContext):
    """(a; q)_n = prod_{j=0}^{n-1} (1 - a q^j), ascending j."""
    if n < 0:
        raise DomainError("n must be non-negative")
    mp = ctx.context()
    a = mp.convert(a)
    q = mp.convert(q)
    _check_q(q)
    prod = mp.mpc(1) if isinstance(a, mp.mpc) else mp.mpf(1)
    qj = mp.mpf(1)
    for _ in range(n):
        prod *= 1 - a * qj
        qj *= q
    return prod


@dataclass(frozen=True)
class InfiniteProduct:
    """Truncated infinite q-product with its relative tail bound."""

    value: object
    tail_bound: object
    terms: int


def q_pochhammer_inf(a, q, ctx: PrecisionContext) -> InfiniteProduct:
    """(a; q)_inf, truncated at the first m with |a| q^m < tol (1-q)/4."""
    mp = ctx.context()
    a = mp.convert(a)
    q = mp.convert(q)
    _check_q(q)
    if q >= 1 - mp.mpf(2) ** (-ctx.working_bits):
        raise NonConvergent("q too close to 1 for the precision budget")
    tol = ctx.tol_in(mp)
    abs_a = abs(a)
    if abs_a == 0:
        return InfiniteProduct(mp.mpf(1), mp.mpf(0), 0)
    cutoff = tol * (1 - q) / 4
    if abs_a < cutoff:
        m = 0
    else:
        m = int(mpmath.ceil(mp.log(cutoff / abs_a) / mp.log(q)))
        m = max(m, 0)
    prod = mp.mpc(1) if isinstance(a, mp.mpc) else mp.mpf(1)
    qj = mp.mpf(1)
    for _ in range(m):
        prod *= 1 - a * qj
        qj *= q
    # |log of the dropped factors| <= sum_{j>=m} |a| q^j / (1 - |a| q^m)
    rest = abs_a * qj
    tail = 2 * rest / (1 - q) if rest < mp.mpf("0.5") else mp.mpf(1)
    return InfiniteProduct(prod, tail, m)


def to_decimal_string(x, sig_digits: int | None = None) -> str:
    """Serialize an mpf as '+-d.ddd...e+-E'.

    With the default ``sig_digits=None`` the exact (finite) decimal
    expansion of mantissa * 2^exponent is emitted, so ``format -> parse``
    round-trips bit-exactly into any context of at least the value's own
    precision.  An explicit ``sig_digits`` rounds half-to-even.
    """
    if not mpmath.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    sign, man, exp, bc = x._mpf_
    if man == 0:
        return "0"
    if sig_digits is None:
        e = int(exp)
        ndigits = len(str(int(man))) + (abs(e) if e < 0 else int(e * 0.30103) + 1) + 5
        with localcontext() as dc:
            dc.prec = ndigits
            d = Decimal(int(man)) * (Decimal(2) ** e)
            if sign:
                d = -d
            d = d.normalize()
        return format(d, "e")
    if sig_digits < 1:
        raise ValueError("sig_digits must be >= 1")
    with localcontext() as dc:
        dc.prec = sig_digits + 15
        d = Decimal(int(man)) * (Decimal(2) ** int(exp))
        if sign:
            d = -d
    with localcontext() as dc:
        dc.prec = sig_digits
        dc.rounding = ROUND_HALF_EVEN
        d = +d
    return format(d, "e")


def from_decimal_string(s: str, mp):
    """Parse a decimal string into the given working context."""
    return mp.mpf(s.strip())
