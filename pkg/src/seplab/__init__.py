"""Exact-arithmetic laboratory for separating modules.

Sparse polynomials over the rationals or a prime field, group actions on
their coefficient spaces, rank-based complexity measures, easy-class circuit
samplers, separation experiments, and finite-field function-space tools —
everything computed exactly, no floats anywhere.
"""

from .errors import InfeasibleError
from .field import Field, RATIONALS, field_from_name, prime_field
from .poly import (
    Poly,
    add,
    coefficient_of,
    constant,
    derivative,
    evaluate,
    grlex_key,
    monomial,
    monomials_exact,
    monomials_upto,
    multiply,
    negate,
    partial_derivative,
    poly_from_json,
    poly_to_json,
    power,
    restrict,
    scalar_multiply,
    substitute,
    substitute_affine,
    substitute_linear,
    subtract,
    variable,
    zero,
)
from .linalg import (
    identity_matrix,
    is_invertible,
    mat_mul,
    mat_vec,
    rank,
    right_kernel,
    rref,
)
from .measures import (
    MeasureReport,
    compute_measure,
    dim_partials,
    hessian,
    hessian_rank_at,
    partial_deriv_matrix,
    shifted_partials_matrix,
    shifted_partials_rank,
)
from .groups import (
    CoeffMap,
    GroupElement,
    InvarianceReport,
    affine_element,
    apply,
    compose,
    enumerate_invertible,
    enumerate_permutations,
    identity_element,
    induced_coeff_map,
    invariance_check,
    linear_element,
    permutation_element,
    random_invertible,
    random_permutation,
)
from .functions import (
    determinant_poly,
    elementary_symmetric,
    from_spec,
    mod3_multilinear,
    permanent_poly,
    random_dense_poly,
)
from .circuits import (
    Depth3Circuit,
    Depth4Circuit,
    EasySampler,
    NWBoundReport,
    circuit_from_json,
    circuit_to_json,
    expand,
    sample_depth3,
    sample_depth4,
    sampler_from_spec,
    transform_depth3,
    verify_nw_bound,
)
from .sepmod import (
    Ambient,
    ClosureReport,
    ExplicitSpan,
    MinorsOfMeasure,
    ModuleEvaluation,
    ProductModule,
    SeparationReport,
    evaluate_module,
    explicit_product,
    explicit_span,
    group_closure,
    in_span,
    minors_explicit,
    module_product,
    poly_det,
    poly_matrix_minors,
    run_separation,
    symbolic_partial_deriv_matrix,
    vanishes_on,
)
from .f2lab import (
    AgreementReport,
    GKReport,
    SubspaceOverFq,
    TruthTable,
    distance_to_degree,
    format_table,
    function_monomials,
    gk_intersection_test,
    gl_points,
    index_point,
    intersect_all,
    multilinear_to_truth_table,
    parse_table,
    point_index,
    reduce_pointwise,
    table_from_int,
    subspace_from_polys,
    subspace_intersection,
    truth_table,
    truth_table_to_multilinear,
    vanishing_ideal_basis,
)
from .seeding import derive_seed, trial_rng

__version__ = "0.1.0"
