"""Exact integer and rational linear algebra.

Everything here works on Python ints and ``fractions.Fraction``; there is no
floating point anywhere in the package.
"""

from .lp import EQ, GE, LPResult, RationalLP, lp_max_slack
from .matrix import (
    IntMatrix,
    clear_denominators,
    dot,
    is_primitive,
    primitive,
    rational_rank,
    row_echelon,
)
from .snf import (
    Cokernel,
    SnfDecomposition,
    cokernel,
    hermite_rows,
    kernel_basis,
    smith_normal_form,
    solve_rational,
    unimodular_inverse,
)

__all__ = [
    "EQ", "GE", "Cokernel", "IntMatrix", "LPResult", "RationalLP", "SnfDecomposition",
    "clear_denominators", "cokernel", "dot", "hermite_rows", "is_primitive", "kernel_basis",
    "lp_max_slack", "primitive", "rational_rank", "row_echelon", "smith_normal_form",
    "solve_rational", "unimodular_inverse",
]
