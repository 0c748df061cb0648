"""Multilinear Muckenhoupt weight calculus on finite periodic dyadic grids.

Exponents cross the boundary as exact strings ("2", "4/3", "inf",
"1/p=3/2"); grid functions are flat numpy arrays over the 2^(d*L) finest
cells in row-major order.
"""

from aprlab._core import (
    ap_constant,
    apr_constant,
    derived_scales,
    dual_reciprocal,
    exponent_roundtrip,
    extrapolation_path,
    haar,
    hl_maximal,
    lemma_main_forward,
    lp_norm,
    mixed_norm,
    multilinear_constant,
    offdiag_targets,
    power_weight,
    prec,
    preceq_star,
    random_a1_weight,
    random_shift_apply,
    rdf_case,
    reciprocal_sum,
    run_experiment,
    sparse_form_json,
    sparse_generate_json,
    sparse_verify_json,
    square_function,
    verify_suite,
)

__all__ = [
    "ap_constant",
    "apr_constant",
    "derived_scales",
    "dual_reciprocal",
    "exponent_roundtrip",
    "extrapolation_path",
    "haar",
    "hl_maximal",
    "lemma_main_forward",
    "lp_norm",
    "mixed_norm",
    "multilinear_constant",
    "offdiag_targets",
    "power_weight",
    "prec",
    "preceq_star",
    "random_a1_weight",
    "random_shift_apply",
    "rdf_case",
    "reciprocal_sum",
    "run_experiment",
    "sparse_form_json",
    "sparse_generate_json",
    "sparse_verify_json",
    "square_function",
    "verify_suite",
]
