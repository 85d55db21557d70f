from .numbers import (
    Rational,
    GaussianRational,
    Cyclotomic,
    conj,
    is_zero,
    as_rational,
    as_gaussian,
    to_complex,
    exact_str,
    parse_exact,
    gaussian_str,
    cyclotomic_str,
    cyclotomic_polynomial,
    sqrt_in_cyclotomic,
    euler_phi,
)
from .matrix import (
    ExactMatrix,
    SingularMatrix,
    NotHermitian,
    InconsistentSystem,
    LdlResult,
    SolveResult,
    mat_inverse,
    null_space,
    ldl_hermitian,
    solve_exact,
)
from .modular import ModularSolver

__all__ = [
    "Rational",
    "GaussianRational",
    "Cyclotomic",
    "conj",
    "is_zero",
    "as_rational",
    "as_gaussian",
    "to_complex",
    "exact_str",
    "parse_exact",
    "gaussian_str",
    "cyclotomic_str",
    "cyclotomic_polynomial",
    "sqrt_in_cyclotomic",
    "euler_phi",
    "ExactMatrix",
    "SingularMatrix",
    "NotHermitian",
    "InconsistentSystem",
    "LdlResult",
    "SolveResult",
    "mat_inverse",
    "null_space",
    "ldl_hermitian",
    "solve_exact",
    "ModularSolver",
]
