"""The xi map, the from-scratch Airy function, and the composed limit formula."""

import mpmath
import pytest

from qairy import (
    AiryEvalPolicy,
    DomainError,
    PrecisionContext,
    airy_ai,
    airy_ai_asymptotic,
    airy_ai_second_derivative,
    airy_ai_taylor,
    first_negative_zero,
    q_airy,
    q_airy_limit_q_to_1,
    xi_map,
)
from qairy.quadrature import adaptive_gauss_legendre, gauss_legendre_rule

CTX = PrecisionContext()

# Independent oracle for xi(x=1, q=0.9): composite Simpson with 2^16 panels
# on 2 w atan(sqrt(exp(w^2) - 1)) over [0, sqrt(log 4)] at 60 decimal digits
# (Simpson discretization error ~2e-21), frozen once.
XI_1_09_ORACLE = "5.93248003375735894526532423242014078247"


def test_policy_validation():
    with pytest.raises(ValueError):
        AiryEvalPolicy(taylor_cutoff=50.0)
    with pytest.raises(ValueError):
        AiryEvalPolicy(asymptotic_terms=0)


def test_gauss_legendre_rule_integrates_polynomials_exactly():
    mp = CTX.context()
    nodes, weights = gauss_legendre_rule(15, mp)
    # degree-29 polynomial x^28 on [-1, 1]: exact value 2/29
    total = sum(w * x ** 28 for x, w in zip(nodes, weights))
    assert abs(total - mp.mpf(2) / 29) < mp.mpf("1e-70")


def test_adaptive_quadrature_error_estimate():
    mp = CTX.context()
    value, err = adaptive_gauss_legendre(
        lambda w: mp.exp(-w * w), mp.mpf(0), mp.mpf(3), mp, mp.mpf("1e-40")
    )
    ref = mp.sqrt(mp.pi) / 2 * mp.erf(mp.mpf(3))
    assert abs(value - ref) < mp.mpf("1e-38")
    assert err < mp.mpf("1e-38")


def test_xi_at_the_left_endpoint_and_domain():
    mp = CTX.context()
    res = xi_map(mp.mpf(1) / 4, "0.9", CTX)
    assert res.xi == 0 and res.integral_value == 0
    with pytest.raises(DomainError):
        xi_map("0.2", "0.9", CTX)
    with pytest.raises(DomainError):
        xi_map("1", "1.5", CTX)


def test_xi_against_frozen_simpson_oracle():
    mp = CTX.context()
    res = xi_map("1", "0.9", CTX)
    assert abs(res.xi - mp.mpf(XI_1_09_ORACLE)) < mp.mpf("1e-20")
    assert res.quadrature_error_estimate < mp.mpf("1e-24")


def test_xi_defining_relation_and_monotonicity():
    mp = CTX.context()
    prev = mp.mpf(0)
    for x_s in ("0.3", "0.5", "1", "4", "20"):
        res = xi_map(x_s, "0.9", CTX)
        lhs = mp.mpf(2) / 3 * res.xi ** mp.mpf("1.5")
        rhs = res.integral_value / mp.log(1 / mp.mpf("0.9"))
        assert abs(lhs - rhs) < mp.mpf("1e-24") * max(rhs, 1)
        assert res.xi > prev
        prev = res.xi


def test_xi_scaling_in_q():
    mp = CTX.context()
    q1, q2 = mp.mpf("0.9"), mp.mpf("0.5")
    r = xi_map("2", q2, CTX).xi / xi_map("2", q1, CTX).xi
    expected = (mp.log(1 / q1) / mp.log(1 / q2)) ** (mp.mpf(2) / 3)
    assert abs(r - expected) < mp.mpf("1e-24") * expected


def test_airy_at_zero_against_quadrature_gamma_oracle():
    mp = CTX.context()
    # Gamma(2/3) = (3/2) int_0^inf exp(-v^(3/2)) dv = 3 int_0^inf y exp(-y^3) dy
    # (t = v^(3/2), then v = y^2, leaving an entire integrand)
    gamma23, _ = adaptive_gauss_legendre(
        lambda y: 3 * y * mp.exp(-y ** 3),
        mp.mpf(0),
        mp.mpf(16),
        mp,
        mp.mpf("1e-40"),
    )
    ref = mp.mpf(3) ** (-mp.mpf(2) / 3) / gamma23
    got = airy_ai("0", AiryEvalPolicy(), CTX)
    assert abs(got - ref) < mp.mpf("1e-30") * ref


@pytest.mark.parametrize("x_s", ["-35", "-30", "-25"])
def test_airy_dual_path_agreement(x_s):
    mp = CTX.context()
    t_val = airy_ai_taylor(x_s, CTX)
    a_val, err = airy_ai_asymptotic(x_s, AiryEvalPolicy(), CTX)
    assert err < mp.mpf("1e-20")
    assert abs(t_val - a_val) / abs(t_val) < mp.mpf("1e-20")


def test_airy_positive_axis_paths_agree():
    mp = CTX.context()
    t_val = airy_ai_taylor("32", CTX)
    hybrid = airy_ai("32", AiryEvalPolicy(), CTX)
    assert abs(t_val - hybrid) / abs(t_val) < mp.mpf("1e-20")


@pytest.mark.parametrize("x_s", ["-10", "-1", "0", "1", "5"])
def test_airy_ode_residual(x_s):
    mp = CTX.context()
    ai = airy_ai_taylor(x_s, CTX)
    d2 = airy_ai_second_derivative(x_s, CTX)
    scale = max(abs(ai), mp.mpf(2) ** (-CTX.working_bits // 2))
    assert abs(d2 - mp.mpf(x_s) * ai) / scale < mp.mpf("1e-10")


def test_first_negative_zero():
    mp = CTX.context()
    root = first_negative_zero(AiryEvalPolicy(), CTX)
    assert abs(root - mp.mpf("-2.338107")) < mp.mpf("1e-5")
    assert abs(airy_ai_taylor(root, CTX)) < mp.mpf("1e-25")


def test_limit_formula_domain():
    with pytest.raises(DomainError):
        q_airy_limit_q_to_1("0.25", "0.9", ctx=CTX)
    with pytest.raises(DomainError):
        q_airy_limit_q_to_1("1", "1.1", ctx=CTX)


def test_limit_formula_against_the_series():
    mp = CTX.context()
    q = mp.mpf("0.9")
    x = mp.mpf("0.5")
    approx = q_airy_limit_q_to_1(x, q, ctx=CTX)
    true = q_airy(q, mp.sqrt(q) * x, CTX)
    assert abs(approx - mp.mpf("-2.320e-3")) < mp.mpf("0.001e-3")
    rel = abs(true - approx) / abs(true)
    assert mp.mpf("0.0015") < rel < mp.mpf("0.0030")


def test_limit_error_decreases_as_q_rises():
    mp = CTX.context()
    x = mp.mpf(1)
    prev = mp.inf
    for q_s in ("0.9", "0.92", "0.94", "0.96", "0.98", "0.99"):
        q = mp.mpf(q_s)
        true = q_airy(q, mp.sqrt(q) * x, CTX)
        approx = q_airy_limit_q_to_1(x, q, ctx=CTX)
        rel = abs(true - approx) / abs(true)
        assert rel < prev
        prev = rel
    assert prev < mp.mpf("0.0003")
