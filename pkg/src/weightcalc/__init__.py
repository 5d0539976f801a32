"""Numerical calculus of weight sequences and weight functions.

The package computes, at desk scale and in the log domain, the standard
transforms of the ultradifferentiable-weight toolbox: associated weight
functions, conjugate sequences and conjugate weight functions, generalized
Legendre envelopes, growth indices, Matuszewska indices, and the associated
weight matrices of Braun-Meise-Taylor weights; a verification suite checks
the calculus' identities and inequalities on concrete families.
"""

from .errors import (
    CapacityError,
    DomainError,
    DomainExhaustedError,
    FormatError,
    PreconditionError,
    UsageError,
    WeightCalcError,
    WellDefinednessError,
)
from .grids import DEFAULT_GRID, DEFAULT_TAIL, GridSpec, TailWindow
from .sequences import (
    MatuszewskaEstimate,
    RelationVerdict,
    UniformBoundResult,
    WeightSequence,
    almost_decreasing_regularize,
    check_moderate_growth,
    conjugate_sequence,
    exp_power,
    factorial_sequence,
    from_log_values,
    gevrey,
    is_log_convex,
    is_strong_log_convex,
    log_convex_minorant,
    matuszewska,
    normalize_head,
    pointwise_product,
    pointwise_quotient,
    qgevrey,
    relation,
    small_sequence,
    uniform_bound,
)
from .functions import (
    FunctionRelationVerdict,
    GrowthIndexEstimate,
    SlowVariationReport,
    WeightFunction,
    associated,
    biconjugate,
    conjugate,
    counting,
    envelope_lower,
    envelope_upper,
    from_samples,
    gamma_indices,
    identity_weight,
    integral_form,
    log_power_weight,
    normalized,
    power_substitution,
    power_weight,
    recover_sequence,
    relation_fn,
    slowly_varying_sequence_test,
)
from .bmt import (
    BMTReport,
    WeightMatrix,
    associated_matrix,
    bmt_report,
    conjugate_matrix,
    constancy_check,
    phi_star,
    phi_star_many,
)
from .checks import CheckReport, available_checks, run_all, run_check

__version__ = "0.1.0"
