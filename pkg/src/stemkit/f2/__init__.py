"""Exact linear algebra over GF(2) and GF(2)[tau]."""

from .bitmatrix import RREF, BitMatrix, Echelon, kernel_basis, pack_bits, rank, rref, solve_in_span, unpack_bits
from .taupoly import (
    ONE,
    TAU,
    ZERO,
    GradedMatrix,
    SmithForm,
    TauPoly,
    TauPolyMatrix,
    graded_smith,
    matmul,
    smith_normal_form,
    smith_reduce,
)

__all__ = [
    "BitMatrix",
    "Echelon",
    "GradedMatrix",
    "ONE",
    "RREF",
    "SmithForm",
    "TAU",
    "TauPoly",
    "TauPolyMatrix",
    "ZERO",
    "graded_smith",
    "kernel_basis",
    "matmul",
    "pack_bits",
    "rank",
    "rref",
    "smith_normal_form",
    "smith_reduce",
    "solve_in_span",
    "unpack_bits",
]
