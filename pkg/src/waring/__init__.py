"""Exact Waring rank of binary forms.

Computes the least number of d-th powers of linear forms summing to a
given degree-d homogeneous polynomial in two variables, classifies the
form within the rank stratification, and produces a verified
high-precision decomposition.  Rank decisions are exact (arbitrary
precision rational arithmetic); numeric evidence comes from an
independent least-squares oracle.
"""

__version__ = "0.1.0"

from .apolarity import (
    ApolarBasis,
    apolar_generator,
    apolar_pairing,
    apolar_space,
    border_rank,
    catalecticant,
    discriminant,
    is_squarefree,
)
from .decompose import (
    Decomposition,
    VerificationReport,
    decompose,
    projective_roots,
    separation_bound,
    solve_weights,
    verify_decomposition,
)
from .errors import (
    BadPrimeError,
    InvalidInputError,
    NumericError,
    ParseError,
    SamplingError,
    VerificationError,
    WaringError,
)
from .expr import FormExpression, form_to_text, parse_expression, parse_form
from .forms import (
    BinaryForm,
    ComplexPoint,
    DualCoordinates,
    apply_gl2,
    chordal_distance,
    coeffs_from_dual,
    dual_coords,
    evaluate,
    expand_power_sum,
    form_from_coeffs,
    linear_form,
    monomial,
    power_sum_form,
)
from .linalg import (
    RationalMatrix,
    nullspace,
    random_prime,
    rank_exact,
    rank_modular,
    rank_modular_auto,
)
from .oracle import FitResult, fit_residual, jacobian_error, numeric_fit, oracle_rank_upper
from .sylvester import (
    Classification,
    RankCase,
    RankResult,
    classify,
    closure_ranks,
    sample_degenerate,
    sample_generic_rank,
    waring_rank,
)

__all__ = [
    "ApolarBasis",
    "BadPrimeError",
    "BinaryForm",
    "Classification",
    "ComplexPoint",
    "Decomposition",
    "DualCoordinates",
    "FitResult",
    "FormExpression",
    "InvalidInputError",
    "NumericError",
    "ParseError",
    "RankCase",
    "RankResult",
    "RationalMatrix",
    "SamplingError",
    "VerificationError",
    "VerificationReport",
    "WaringError",
    "apolar_generator",
    "apolar_pairing",
    "apolar_space",
    "apply_gl2",
    "border_rank",
    "catalecticant",
    "chordal_distance",
    "classify",
    "closure_ranks",
    "coeffs_from_dual",
    "decompose",
    "discriminant",
    "dual_coords",
    "evaluate",
    "expand_power_sum",
    "fit_residual",
    "form_from_coeffs",
    "form_to_text",
    "is_squarefree",
    "jacobian_error",
    "linear_form",
    "monomial",
    "nullspace",
    "numeric_fit",
    "oracle_rank_upper",
    "parse_expression",
    "parse_form",
    "power_sum_form",
    "projective_roots",
    "random_prime",
    "rank_exact",
    "rank_modular",
    "rank_modular_auto",
    "sample_degenerate",
    "sample_generic_rank",
    "separation_bound",
    "solve_weights",
    "verify_decomposition",
    "waring_rank",
]
