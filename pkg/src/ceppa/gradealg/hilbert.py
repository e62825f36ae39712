"""Predicted matrix Hilbert series of the centrally extended preprojective algebra."""
from __future__ import annotations

from fractions import Fraction

from ceppa.exactlin import PolyMatrix, series_inverse
from ceppa.rootsys import CartanDatum, build_root_system


def socle_degree(h: int) -> int:
    return 2 * (h - 2)


def hilbert_matrix_predicted(datum: CartanDatum) -> PolyMatrix:
    """``(1 - t^{2h}) / (1 - t^2) * (1 - C t + t^2)^{-1}`` truncated two past the socle.

    Entry ``(i, j)`` is the Hilbert series of ``e_i A e_j``; the series is
    symmetric so the index order does not matter.
    """
    h = build_root_system(datum).h
    r = datum.rank
    top = socle_degree(h)
    trunc = top + 2
    c = datum.adjacency
    base = PolyMatrix(
        [
            [[int(i == j) for j in range(r)] for i in range(r)],
            [[-c[i][j] for j in range(r)] for i in range(r)],
            [[int(i == j) for j in range(r)] for i in range(r)],
        ],
        trunc,
    )
    inv = series_inverse(base, trunc)
    # (1 - t^{2h}) / (1 - t^2) = 1 + t^2 + ... + t^{2h-2}
    scalar = [Fraction(int(k % 2 == 0 and k <= 2 * h - 2)) for k in range(trunc + 1)]
    out = inv.scalar_series(scalar)
    for k, coeff in enumerate(out.coeffs):
        for row in coeff:
            for v in row:
                if v.denominator != 1 or v < 0:
                    raise ArithmeticError(f"coefficient {v} of t^{k} is not a nonnegative integer")
                if k > top and v:
                    raise ArithmeticError(f"nonzero coefficient above the socle degree at t^{k}")
    return out
