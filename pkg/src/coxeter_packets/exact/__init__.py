"""Exact integer and finite-field linear algebra."""
from .fields import (
    FieldElement,
    FiniteField,
    field_of_order,
    finite_field,
    is_prime,
    matrix_rank_mod,
    matrix_rank_mod_q,
    prime_power,
)
from .intmatrix import (
    Cokernel,
    FiniteAbelianGroup,
    IntMatrix,
    SmithForm,
    cokernel,
    in_integer_span,
    integer_inverse,
    kernel_basis,
    prime_factors,
    rational_nullspace,
    smith_normal_form,
    solve_integer,
    solve_rational,
)

__all__ = [
    "Cokernel",
    "FieldElement",
    "FiniteAbelianGroup",
    "FiniteField",
    "IntMatrix",
    "SmithForm",
    "cokernel",
    "field_of_order",
    "finite_field",
    "in_integer_span",
    "integer_inverse",
    "is_prime",
    "kernel_basis",
    "matrix_rank_mod",
    "matrix_rank_mod_q",
    "prime_factors",
    "prime_power",
    "rational_nullspace",
    "smith_normal_form",
    "solve_integer",
    "solve_rational",
]
