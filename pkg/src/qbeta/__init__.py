"""qbeta: numerical q-series kernels and an identity verification harness.

The library evaluates q-shifted factorials, quadratic h-products, basic
hypergeometric series (including very-well-poised ones), Askey-Wilson
polynomials with their weight and norms, and the q-beta integrals built from
them.  A registry pairs each supported identity's two sides with a domain
predicate and a deterministic sampler; the CLI drives suite runs.
"""

from .qcore import (
    ConvergenceError,
    DomainError,
    EvalResult,
    aw_constant,
    check_base,
    h_product,
    h_product_multi,
    qpoch,
    qpoch_multi,
)
from .hyperseries import (
    SeriesSpec,
    VWPSpec,
    phi_eval,
    prop32_bound,
    rescaled_terminating_phi,
    term_ratio_bound,
    terminating_phi,
    very_well_poised_sum,
    vwp_eval,
)
from .askey_wilson import (
    AWParams,
    DeltaSeq,
    aw_norm,
    aw_poly,
    aw_weight,
    delta_seq,
    gen_func_rhs,
    gen_func_series,
)
from .quadrature import Integrand, QuadResult, integrate, nr_integrand, thm18_integrand
from .identities import (
    REDUCTIONS,
    REGISTRY,
    IdentityReport,
    IdentitySpec,
    ParameterPoint,
    andrews_watson_sum,
    catalogue,
    check,
    reduce_check,
    run_reduction,
    verma_jain_sum,
)

__version__ = "0.1.0"

__all__ = [
    "AWParams", "ConvergenceError", "DeltaSeq", "DomainError", "EvalResult",
    "Integrand", "IdentityReport", "IdentitySpec", "ParameterPoint",
    "QuadResult", "REDUCTIONS", "REGISTRY", "SeriesSpec", "VWPSpec",
    "andrews_watson_sum", "aw_constant", "aw_norm", "aw_poly", "aw_weight",
    "catalogue", "check", "check_base", "delta_seq", "gen_func_rhs",
    "gen_func_series", "h_product", "h_product_multi", "integrate",
    "nr_integrand", "phi_eval", "prop32_bound", "qpoch", "qpoch_multi",
    "reduce_check", "rescaled_terminating_phi", "run_reduction",
    "term_ratio_bound", "terminating_phi", "thm18_integrand",
    "very_well_poised_sum", "vwp_eval", "__version__",
]
