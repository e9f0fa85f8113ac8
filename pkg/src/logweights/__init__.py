"""Log-scale weight-sequence analysis toolkit.

Weight sequences and their quotients, associated weight functions and Young
conjugates, associated weight matrices, growth-condition checkers with
three-valued finite-horizon verdicts, and a generator for the staircase
counter-example separating the matrix-level moderate-growth conditions from
the quotient/root comparison properties.
"""

from .conditions import (
    admissibility_bundle,
    beta_gamma,
    condv_propagation,
    equlemma_check,
    growth_flags,
    liminf_ratio_estimate,
    matrix_mg,
    mg_battery,
    moderate_growth_index,
    quotient_root_comparison,
)
from .counterexample import (
    PiecewiseLinearLogSpec,
    block_sums,
    build_counterexample,
    validate_schedule,
    witness_divergence,
)
from .matrices import (
    WeightMatrix,
    build_associated_matrix,
    matrices_equivalent,
    matrix_from_json,
    matrix_from_sequences,
    matrix_relation,
    matrix_to_json,
    mg_union,
    quotient_identity_suite,
    shifted_matrix,
)
from .sequences import (
    QuotientView,
    WeightSequence,
    compare,
    make_family,
    pi_transform,
    quotients,
    sequence_from_json,
    sequence_to_json,
    validate_lc,
)
from .verdicts import ConditionReport, OutOfRangeError, Verdict
from .weights import (
    AssociatedWeightFunction,
    LogPowerWeight,
    check_weight_conditions,
    omega_eval,
    omega_eval_log,
    omega_integral_form,
    omega_integral_form_log,
    reconstruct_sequence,
    sigma_count,
    sigma_count_log,
    young_conjugate,
    young_conjugate_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "AssociatedWeightFunction",
    "ConditionReport",
    "LogPowerWeight",
    "OutOfRangeError",
    "PiecewiseLinearLogSpec",
    "QuotientView",
    "Verdict",
    "WeightMatrix",
    "WeightSequence",
    "admissibility_bundle",
    "beta_gamma",
    "block_sums",
    "build_associated_matrix",
    "build_counterexample",
    "check_weight_conditions",
    "compare",
    "condv_propagation",
    "equlemma_check",
    "growth_flags",
    "liminf_ratio_estimate",
    "make_family",
    "matrices_equivalent",
    "matrix_from_json",
    "matrix_from_sequences",
    "matrix_mg",
    "matrix_relation",
    "matrix_to_json",
    "mg_battery",
    "mg_union",
    "moderate_growth_index",
    "omega_eval",
    "omega_eval_log",
    "omega_integral_form",
    "omega_integral_form_log",
    "pi_transform",
    "quotient_identity_suite",
    "quotient_root_comparison",
    "quotients",
    "reconstruct_sequence",
    "sequence_from_json",
    "sequence_to_json",
    "shifted_matrix",
    "sigma_count",
    "sigma_count_log",
    "validate_lc",
    "validate_schedule",
    "witness_divergence",
    "young_conjugate",
    "young_conjugate_oracle",
]
