"""Numerical laboratory for Sudler products, figure-eight Jones values,
and the arithmetic of their continued-fraction renormalization."""

from sudlerlab.cfrac import (
    CFExpansion,
    ConvergentTable,
    OstrowskiRep,
    cf_expand,
    cf_tail,
    convergents,
    drop_first_digit_map,
    interval_Ik,
    ostrowski_decode,
    ostrowski_encode,
    ostrowski_enumerate,
    parse_alpha,
    rationals_in_interval,
)
from sudlerlab.dist import (
    EmpiricalDist,
    StableLaw,
    estimate_D,
    farey_enumerate,
    ks_compare,
    stable_cdf,
    stable_density,
    statistic_logJ,
    statistic_partial_quotients,
    sweep,
)
from sudlerlab.errors import (
    EnumerationCapError,
    PoleError,
    PrecondError,
    QuadratureError,
    ZeroFactorError,
)
from sudlerlab.jones import (
    HValue,
    h_eval,
    jones_J,
    m_k,
    psi_heuristic,
    telescoping_logJ,
    vol_41,
)
from sudlerlab.trig import (
    EpsilonVector,
    LogNumber,
    cotangent_V,
    cotangent_sum,
    epsilon_vector,
    epsilon_vector_primed,
    explicit_formula_eval,
    kubert_rhs,
    log_f,
    product_form_eval,
    product_form_logs,
    ql_diff_check,
    shifted_sudler,
    sudler_prefix_logmags,
)

__version__ = "0.1.0"

__all__ = [
    "CFExpansion",
    "ConvergentTable",
    "OstrowskiRep",
    "cf_expand",
    "cf_tail",
    "convergents",
    "drop_first_digit_map",
    "interval_Ik",
    "ostrowski_decode",
    "ostrowski_encode",
    "ostrowski_enumerate",
    "parse_alpha",
    "rationals_in_interval",
    "EmpiricalDist",
    "StableLaw",
    "estimate_D",
    "farey_enumerate",
    "ks_compare",
    "stable_cdf",
    "stable_density",
    "statistic_logJ",
    "statistic_partial_quotients",
    "sweep",
    "EnumerationCapError",
    "PoleError",
    "PrecondError",
    "QuadratureError",
    "ZeroFactorError",
    "HValue",
    "h_eval",
    "jones_J",
    "m_k",
    "psi_heuristic",
    "telescoping_logJ",
    "vol_41",
    "EpsilonVector",
    "LogNumber",
    "cotangent_V",
    "cotangent_sum",
    "epsilon_vector",
    "epsilon_vector_primed",
    "explicit_formula_eval",
    "kubert_rhs",
    "log_f",
    "product_form_eval",
    "product_form_logs",
    "ql_diff_check",
    "shifted_sudler",
    "sudler_prefix_logmags",
]
