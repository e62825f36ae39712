"""Exact rational linear algebra: sparse RREF, subspaces, truncated series."""
from ceppa.exactlin._backend import BACKEND
from ceppa.exactlin.matrix import (
    RREF,
    RationalMatrix,
    Subspace,
    Vector,
    axpy,
    echelon_rows,
    lin_comb,
    nilpotent_block_sizes,
    nullspace,
    rref,
)
from ceppa.exactlin.poly import PolyMatrix, series_inverse

__all__ = [
    "BACKEND",
    "RREF",
    "PolyMatrix",
    "RationalMatrix",
    "Subspace",
    "Vector",
    "axpy",
    "echelon_rows",
    "lin_comb",
    "nilpotent_block_sizes",
    "nullspace",
    "rref",
    "series_inverse",
]
