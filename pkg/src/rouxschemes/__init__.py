"""Exact tools for commutative association schemes and roux matrices."""

from .exact import (
    Cyclotomic,
    ExactMatrix,
    GaussianRational,
    InconsistentSystem,
    ModularSolver,
    conj,
    exact_str,
    ldl_hermitian,
    mat_inverse,
    parse_exact,
    solve_exact,
    sqrt_in_cyclotomic,
)
from .groups import AbelianGroup, abelian_groups_of_order, group_from_spec
from .schemes import (
    LocalNotScheme,
    NonGroupClosure,
    SchemeTable,
    ThinRadical,
    group_scheme,
    local_restrict,
    orbital_scheme,
    thin_radical,
    valencies,
    validate_scheme,
)
from .isomorphism import scheme_isomorphic
from .spectra import (
    EigenData,
    FieldTooLarge,
    IrrationalEigenvalue,
    KreinTensor,
    NegativeKrein,
    VerificationFailed,
    eigen_compute,
    eigen_from_tensor,
    krein_params,
    roux_detect,
    roux_eigen_closed,
    simplify_scalar,
)
from .roux import (
    ClassCountMismatch,
    IncompatiblePair,
    PrecisionTooLow,
    RouxMatrix,
    amorphic_pseudocyclic_check,
    build_roux_matrix,
    char_evaluate,
    compat_check,
    decompose,
    drackn_params,
    etf_export,
    find_labelings,
    lift_scheme,
    verify_roux,
)
from .triple import (
    LocalNotClosed,
    TripleSolver,
    TripleTensor,
    local_params_from_triples,
    tensor_from_eigen,
    triple_bruteforce,
    triple_regular_check,
    triple_report,
    triple_solve,
)
from .constructions import (
    Indivisible,
    NotPrime,
    TooLarge,
    build_corpus,
    bundled_examples,
    cyclotomic_scheme,
    field_build,
    sl23_scheme,
)
from .hoggar import GramInconsistent, PipelineReport, StageMismatch, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "ClassCountMismatch",
    "Cyclotomic",
    "EigenData",
    "ExactMatrix",
    "FieldTooLarge",
    "GaussianRational",
    "GramInconsistent",
    "IncompatiblePair",
    "InconsistentSystem",
    "Indivisible",
    "IrrationalEigenvalue",
    "KreinTensor",
    "LocalNotClosed",
    "LocalNotScheme",
    "ModularSolver",
    "NegativeKrein",
    "NonGroupClosure",
    "NotPrime",
    "PipelineReport",
    "PrecisionTooLow",
    "RouxMatrix",
    "SchemeTable",
    "StageMismatch",
    "ThinRadical",
    "TooLarge",
    "TripleSolver",
    "TripleTensor",
    "VerificationFailed",
    "abelian_groups_of_order",
    "amorphic_pseudocyclic_check",
    "build_corpus",
    "build_roux_matrix",
    "bundled_examples",
    "char_evaluate",
    "compat_check",
    "conj",
    "cyclotomic_scheme",
    "decompose",
    "drackn_params",
    "eigen_compute",
    "eigen_from_tensor",
    "etf_export",
    "exact_str",
    "field_build",
    "find_labelings",
    "group_from_spec",
    "group_scheme",
    "krein_params",
    "ldl_hermitian",
    "lift_scheme",
    "local_params_from_triples",
    "local_restrict",
    "mat_inverse",
    "orbital_scheme",
    "parse_exact",
    "roux_detect",
    "roux_eigen_closed",
    "run_pipeline",
    "scheme_isomorphic",
    "simplify_scalar",
    "sl23_scheme",
    "solve_exact",
    "sqrt_in_cyclotomic",
    "tensor_from_eigen",
    "thin_radical",
    "triple_bruteforce",
    "triple_regular_check",
    "triple_report",
    "triple_solve",
    "valencies",
    "validate_scheme",
    "verify_roux",
]
