"""Square matrices of truncated power series in one variable ``t``."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ceppa.errors import SingularConstantTerm
from ceppa.exactlin.matrix import RationalMatrix, rref

Dense = list[list[Fraction]]


def _zero(n: int) -> Dense:
    return [[Fraction(0)] * n for _ in range(n)]


def _mul(a: Dense, b: Dense) -> Dense:
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n) if a[i][k] and b[k][j]), Fraction(0))
             for j in range(n)] for i in range(n)]


def _add_into(acc: Dense, a: Dense, scale: Fraction = Fraction(1)) -> None:
    n = len(acc)
    for i in range(n):
        for j in range(n):
            if a[i][j]:
                acc[i][j] += scale * a[i][j]


def _inverse(a: Dense) -> Dense:
    n = len(a)
    aug = RationalMatrix.from_dense([list(a[i]) + [int(i == j) for j in range(n)] for i in range(n)])
    red = rref(aug, verify=False)
    if red.pivots != tuple(range(n)):
        raise SingularConstantTerm("constant term is not invertible")
    return [[red.rows[i].get(n + j, Fraction(0)) for j in range(n)] for i in range(n)]


class PolyMatrix:
    """``coeffs[k]`` is the dense n x n coefficient of ``t**k``; degrees > ``trunc`` dropped."""

    def __init__(self, coeffs: Sequence[Sequence[Sequence]], trunc: int):
        if not coeffs:
            raise ValueError("need at least the constant coefficient")
        n = len(coeffs[0])
        self.n = n
        self.trunc = trunc
        self.coeffs: list[Dense] = []
        for k in range(trunc + 1):
            if k < len(coeffs):
                self.coeffs.append([[Fraction(v) for v in row] for row in coeffs[k]])
            else:
                self.coeffs.append(_zero(n))

    @classmethod
    def identity(cls, n: int, trunc: int) -> "PolyMatrix":
        return cls([[[int(i == j) for j in range(n)] for i in range(n)]], trunc)

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[Sequence]], trunc: int) -> "PolyMatrix":
        """Build from ``entries[i][j]`` = coefficient list of the (i, j) polynomial."""
        n = len(entries)
        coeffs = [[[entries[i][j][k] if k < len(entries[i][j]) else 0 for j in range(n)]
                   for i in range(n)] for k in range(trunc + 1)]
        return cls(coeffs, trunc)

    def entry(self, i: int, j: int) -> list[Fraction]:
        """Coefficients of the (i, j) entry, trailing zeros stripped."""
        out = [c[i][j] for c in self.coeffs]
        while out and not out[-1]:
            out.pop()
        return out

    def coefficient(self, k: int) -> Dense:
        return self.coeffs[k] if k <= self.trunc else _zero(self.n)

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        trunc = min(self.trunc, other.trunc)
        out = [_zero(self.n) for _ in range(trunc + 1)]
        for i in range(trunc + 1):
            for j in range(trunc + 1 - i):
                _add_into(out[i + j], _mul(self.coeffs[i], other.coeffs[j]))
        return PolyMatrix(out, trunc)

    def scalar_series(self, series: Sequence) -> "PolyMatrix":
        """Multiply by a scalar power series given by its coefficients."""
        out = [_zero(self.n) for _ in range(self.trunc + 1)]
        for i, s in enumerate(series[: self.trunc + 1]):
            if s:
                for j in range(self.trunc + 1 - i):
                    _add_into(out[i + j], self.coeffs[j], Fraction(s))
        return PolyMatrix(out, self.trunc)

    def evaluate(self, t) -> Dense:
        t = Fraction(t)
        acc = _zero(self.n)
        for k, c in enumerate(self.coeffs):
            _add_into(acc, c, t ** k)
        return acc

    def trace(self) -> list[Fraction]:
        return [sum((c[i][i] for i in range(self.n)), Fraction(0)) for c in self.coeffs]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix) or self.n != other.n:
            return False
        t = min(self.trunc, other.trunc)
        return self.coeffs[: t + 1] == other.coeffs[: t + 1]

    def __repr__(self) -> str:
        return f"PolyMatrix(n={self.n}, trunc={self.trunc})"


def series_inverse(p: PolyMatrix, trunc: int) -> PolyMatrix:
    """``X`` with ``p * X == I`` modulo ``t**(trunc + 1)``."""
    p = PolyMatrix(p.coeffs, trunc)
    inv0 = _inverse(p.coeffs[0])
    x = [inv0]
    for k in range(1, trunc + 1):
        acc = _zero(p.n)
        for j in range(1, k + 1):
            if any(any(row) for row in p.coeffs[j]):
                _add_into(acc, _mul(p.coeffs[j], x[k - j]))
        x.append([[-v for v in row] for row in _mul(inv0, acc)])
    return PolyMatrix(x, trunc)
