"""Arbitrary-precision Stieltjes-Wigert polynomials, the q-Airy function,
and certified global asymptotic approximants."""

from .precision import (
    AsymptoticAccuracyLoss,
    ConditionReport,
    DomainError,
    EscalationExhausted,
    InfiniteProduct,
    NonConvergent,
    PrecisionContext,
    evaluate_with_escalation,
    from_decimal_string,
    make_context,
    q_pochhammer,
    q_pochhammer_inf,
    to_decimal_string,
)
from .qfunctions import (
    EvalPoint,
    QParams,
    q_airy,
    q_airy_poly,
    stieltjes_wigert,
    sw_p,
    symmetry_residual,
    theta_q,
    weight_w,
)
from .asymptotics import (
    ApproxReport,
    RegionTag,
    approx_inner,
    approx_outer,
    delta_of_t,
    q_airy_large_z,
    sigma_of_t,
    theta_region_approx,
    theta_region_error_scale,
)
from .airy import (
    AiryEvalPolicy,
    XiResult,
    airy_ai,
    airy_ai_asymptotic,
    airy_ai_second_derivative,
    airy_ai_taylor,
    first_negative_zero,
    q_airy_limit_q_to_1,
    xi_map,
)
from .harness import (
    CheckResult,
    RunConfig,
    SuiteReport,
    TableRow,
    format_scientific,
    reproduce_table1,
    reproduce_table2,
    run_suite,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
