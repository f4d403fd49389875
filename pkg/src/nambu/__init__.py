"""Exact computer algebra for Nambu brackets given by polynomial multivector fields."""
from .core import (
    BracketStructure,
    RankReport,
    bracket,
    conformal_check,
    flat,
    hamiltonian_vf,
    is_casimir,
    j_map_at,
    lie_bracket,
    lie_derivative_multivector,
    rank_form_at,
    rank_multivector_at,
    schouten_nijenhuis,
    sharp,
)
from .exterior import (
    DifferentialForm,
    MultiVectorField,
    VectorField,
    exterior_derivative,
    homotopy,
    interior_form,
    interior_vector,
    levi_civita_parity,
    pairing,
    sorted_sign,
    wedge,
)
from .identities import (
    EnumerationStrategy,
    NotApplicable,
    WeightsLambda,
    WeightsMu,
    check_casimir_integrability_at,
    check_fahi,
    check_fai,
    check_fi,
    check_gapi,
    check_gapi_signed,
    check_gpi,
    check_involution_sn,
    check_mgapi,
    check_mgpi,
    check_nested_integrability_at,
    check_pairwise_decomp_identity,
    check_scaled_fai,
    check_weighted_fahi,
    check_weighted_fai,
    check_weighted_gapi,
    check_weighted_gpi,
    fi_function,
    gapi_weights_to_fai_weights,
    nested_distribution_at,
)
from .poly import Polynomial, Rational, variables
from .structures import (
    CoordinateChange,
    MuSystem,
    NotDecomposable,
    cartesian_product,
    decompose_at,
    darboux_multivector,
    det_bracket,
    mu_constraint_kernel,
    plucker_decomposable_at,
    pre_comb_at,
    random_decomposable,
    random_multivector,
    weinstein_split,
)
from .verdict import Verdict, Witness

__version__ = "0.1.0"

__all__ = [
    "BracketStructure",
    "CoordinateChange",
    "DifferentialForm",
    "EnumerationStrategy",
    "MuSystem",
    "MultiVectorField",
    "NotApplicable",
    "NotDecomposable",
    "Polynomial",
    "RankReport",
    "Rational",
    "VectorField",
    "Verdict",
    "WeightsLambda",
    "WeightsMu",
    "Witness",
    "bracket",
    "cartesian_product",
    "check_casimir_integrability_at",
    "check_fahi",
    "check_fai",
    "check_fi",
    "check_gapi",
    "check_gapi_signed",
    "check_gpi",
    "check_involution_sn",
    "check_mgapi",
    "check_mgpi",
    "check_nested_integrability_at",
    "check_pairwise_decomp_identity",
    "check_scaled_fai",
    "check_weighted_fahi",
    "check_weighted_fai",
    "check_weighted_gapi",
    "check_weighted_gpi",
    "conformal_check",
    "darboux_multivector",
    "decompose_at",
    "det_bracket",
    "exterior_derivative",
    "fi_function",
    "flat",
    "gapi_weights_to_fai_weights",
    "hamiltonian_vf",
    "homotopy",
    "interior_form",
    "interior_vector",
    "is_casimir",
    "j_map_at",
    "levi_civita_parity",
    "lie_bracket",
    "lie_derivative_multivector",
    "mu_constraint_kernel",
    "nested_distribution_at",
    "pairing",
    "plucker_decomposable_at",
    "pre_comb_at",
    "random_decomposable",
    "random_multivector",
    "rank_form_at",
    "rank_multivector_at",
    "schouten_nijenhuis",
    "sharp",
    "sorted_sign",
    "variables",
    "wedge",
    "weinstein_split",
]
