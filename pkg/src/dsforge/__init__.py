"""Exact-arithmetic decision procedures for products of matrices in
prescribed conjugacy class closures, built on the root system of a
star-shaped graph."""

from .classes import (
    ClassSpec,
    ClassesError,
    JordanForm,
    TypeData,
    ZetaData,
    class_from_jordan,
    class_to_jordan,
    reduce_sequence,
    validate_class,
    xi_bracket,
    zeta_star,
)
from .closure import (
    ClosureError,
    TripleCertificate,
    build_triple,
    closure_contains,
    gh_leq,
    jordan_matrix,
    jordan_of_matrix,
    verify_triple,
)
from .convolution import (
    CollapsingReport,
    ConvolutionError,
    Representation,
    collapsing_status,
    convolve,
    r0_prime,
    rv_prime,
)
from .linalg import (
    LinalgError,
    Matrix,
    Subspace,
    char_poly,
    determinant,
    generated_algebra_dim,
    hom_space,
    inverse,
    nullspace,
    rank,
    solve,
)
from .roots import (
    DimVector,
    RootClass,
    RootsError,
    Weights,
    classify,
    enumerate_positive_roots_below,
    is_strict,
    p_form,
    pairing,
    q_form,
    reflect,
)
from .scalar import (
    FieldOrderError,
    Scalar,
    ScalarError,
    ScalarParseError,
    format_scalar,
    parse_scalar,
)
from .solver import (
    DecompositionSearch,
    Problem,
    SolverError,
    Verdict,
    conjecture_condition,
    construct_rigid,
    decide_closure_additive,
    decide_closure_multiplicative,
    decide_rigid,
    enumerate_admissible_decompositions,
    generic_xi,
    in_S_xi,
    verify_solution,
)

__version__ = "1.0.0"
