"""Sparse exact rational matrices, reduced row echelon form, subspaces."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Optional, Sequence

from ceppa.errors import NotNilpotent
from ceppa.exactlin import _backend

Vector = dict  # column index -> nonzero Fraction


def clean(vec: Mapping[int, Fraction]) -> Vector:
    return {k: Fraction(v) for k, v in vec.items() if v}


def axpy(y: Vector, a: Fraction, x: Mapping[int, Fraction]) -> None:
    """In place ``y += a*x`` dropping entries that cancel."""
    if not a:
        return
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


def lin_comb(terms: Iterable[tuple[Fraction, Mapping[int, Fraction]]]) -> Vector:
    out: Vector = {}
    for a, x in terms:
        axpy(out, a, x)
    return out


class RationalMatrix:
    """Row-sparse matrix over Q; ``rows[i]`` maps column -> nonzero Fraction."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Optional[Sequence[Mapping[int, Fraction]]] = None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            self.rows = [dict() for _ in range(nrows)]
        else:
            if len(rows) != nrows:
                raise ValueError(f"expected {nrows} rows, got {len(rows)}")
            self.rows = [clean(r) for r in rows]
            for r in self.rows:
                if r and (min(r) < 0 or max(r) >= ncols):
                    raise IndexError("column index out of range")

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "RationalMatrix":
        data = [list(row) for row in data]
        ncols = len(data[0]) if data else 0
        return cls(len(data), ncols, [{j: Fraction(v) for j, v in enumerate(row) if v} for row in data])

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Mapping[tuple[int, int], Fraction]) -> "RationalMatrix":
        m = cls(nrows, ncols)
        for (i, j), v in entries.items():
            if v:
                m.rows[i][j] = Fraction(v)
        return m

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping[int, Fraction]]) -> "RationalMatrix":
        m = cls(nrows, len(columns))
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    m.rows[i][j] = Fraction(v)
        return m

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, [{i: Fraction(1)} for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return {(i, j): v for i, row in enumerate(self.rows) for j, v in row.items()}

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i].get(j, Fraction(0))

    def to_dense(self) -> list[list[Fraction]]:
        return [[row.get(j, Fraction(0)) for j in range(self.ncols)] for row in self.rows]

    def columns(self) -> list[Vector]:
        cols: list[Vector] = [dict() for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                cols[j][i] = v
        return cols

    def transpose(self) -> "RationalMatrix":
        t = RationalMatrix(self.ncols, self.nrows)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                t.rows[j][i] = v
        return t

    def apply(self, vec: Mapping[int, Fraction]) -> Vector:
        out: Vector = {}
        for i, row in enumerate(self.rows):
            s = sum((v * vec[j] for j, v in row.items() if j in vec), Fraction(0))
            if s:
                out[i] = s
        return out

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = RationalMatrix(self.nrows, other.ncols)
        for i, row in enumerate(self.rows):
            acc: Vector = {}
            for k, v in row.items():
                axpy(acc, v, other.rows[k])
            out.rows[i] = acc
        return out

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = RationalMatrix(self.nrows, self.ncols, self.rows)
        for i, row in enumerate(other.rows):
            axpy(out.rows[i], Fraction(1), row)
        return out

    def scale(self, a) -> "RationalMatrix":
        a = Fraction(a)
        return RationalMatrix(self.nrows, self.ncols, [{j: a * v for j, v in r.items()} for r in self.rows])

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.shape == other.shape and self.rows == other.rows

    def is_zero(self) -> bool:
        return not any(self.rows)

    def rank(self) -> int:
        return rref(self).rank

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        cmap = {c: k for k, c in enumerate(cols)}
        return RationalMatrix(
            len(rows),
            len(cols),
            [{cmap[j]: v for j, v in self.rows[i].items() if j in cmap} for i in rows],
        )

    def __repr__(self) -> str:
        return f"RationalMatrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self.rows))})"


@dataclass(frozen=True)
class RREF:
    ncols: int
    pivots: tuple[int, ...]
    rows: tuple[Vector, ...]  # pivot entry 1, zero at every other pivot column
    nullspace: tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def nullity(self) -> int:
        return len(self.nullspace)


def _integer_rows(rows: Iterable[Mapping[int, Fraction]]):
    out = []
    for row in rows:
        if not row:
            continue
        cols = sorted(row)
        den = lcm(*(Fraction(row[c]).denominator for c in cols))
        out.append((cols, [int(row[c] * den) for c in cols]))
    return out


def echelon_rows(rows: Iterable[Mapping[int, Fraction]], ncols: int, backend: Optional[str] = None) -> list[Vector]:
    """RREF basis (pivot 1) of the span of sparse rational rows."""
    result = _backend.echelon(_integer_rows(rows), ncols, backend)
    out = []
    for cols, vals in result:
        p = vals[0]
        out.append({c: Fraction(v, p) for c, v in zip(cols, vals)})
    return out


def rref(m: RationalMatrix, verify: bool = True, backend: Optional[str] = None) -> RREF:
    rows = echelon_rows(m.rows, m.ncols, backend)
    pivots = tuple(min(r) for r in rows)
    pivot_set = set(pivots)
    null: dict[int, Vector] = {f: {f: Fraction(1)} for f in range(m.ncols) if f not in pivot_set}
    for p, row in zip(pivots, rows):
        for c, v in row.items():
            if c != p:
                null[c][p] = -v
    nullspace = tuple(null[f] for f in sorted(null))
    if verify and nullspace:
        by_col: dict[int, list[tuple[int, Fraction]]] = {}
        for k, vec in enumerate(nullspace):
            for c, v in vec.items():
                by_col.setdefault(c, []).append((k, v))
        for row in m.rows:
            acc: dict[int, Fraction] = {}
            for c, v in row.items():
                for k, w in by_col.get(c, ()):
                    acc[k] = acc.get(k, 0) + v * w
            if any(acc.values()):
                raise ArithmeticError("nullspace check failed")
    return RREF(m.ncols, pivots, tuple(rows), nullspace)


class Subspace:
    """Subspace of Q^n stored by its canonical RREF basis."""

    __slots__ = ("n", "rows", "_pivot_row")

    def __init__(self, n: int, rref_rows: Sequence[Vector]):
        self.n = n
        self.rows = tuple(rref_rows)
        self._pivot_row = {min(r): r for r in self.rows}

    @classmethod
    def span(cls, vectors: Iterable[Mapping[int, Fraction]], n: int) -> "Subspace":
        return cls(n, echelon_rows(vectors, n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [{i: Fraction(1)} for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(self._pivot_row)

    def complement(self) -> list[int]:
        """Coordinates whose unit vectors give a basis of Q^n / self."""
        return [i for i in range(self.n) if i not in self._pivot_row]

    def reduce(self, vec: Mapping[int, Fraction]) -> Vector:
        out = dict(vec)
        for p, row in self._pivot_row.items():
            a = vec.get(p)
            if a:
                axpy(out, -a, row)
        return out

    def __contains__(self, vec: Mapping[int, Fraction]) -> bool:
        return not self.reduce(vec)

    def coordinates(self, vec: Mapping[int, Fraction]) -> list[Fraction]:
        """Coefficients of a member of the subspace in the RREF basis."""
        if self.reduce(vec):
            raise ValueError("vector is not in the subspace")
        return [vec.get(min(r), Fraction(0)) for r in self.rows]

    def annihilator(self) -> "Subspace":
        """Functionals (as vectors) vanishing on the subspace."""
        return Subspace.span(rref(RationalMatrix(len(self.rows), self.n, self.rows)).nullspace, self.n)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.n == other.n and self.rows == other.rows

    def __le__(self, other: "Subspace") -> bool:
        return all(r in other for r in self.rows)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in Q^{self.n})"


def nullspace(m: RationalMatrix) -> Subspace:
    return Subspace.span(rref(m).nullspace, m.ncols)


def nilpotent_block_sizes(op: RationalMatrix) -> list[int]:
    """Jordan block sizes of a nilpotent operator from the ranks of its powers."""
    n = op.nrows
    if op.ncols != n:
        raise ValueError("operator must be square")
    ranks = [n]
    power = RationalMatrix.identity(n)
    while ranks[-1] > 0:
        if len(ranks) > n:
            raise NotNilpotent(f"rank of powers stalls at {ranks[-1]}")
        power = power @ op
        r = power.rank()
        if r == ranks[-1]:
            raise NotNilpotent(f"rank of powers stalls at {r}")
        ranks.append(r)
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
    sizes: list[int] = []
    for k in range(1, len(ranks)):
        sizes += [k] * (at_least[k - 1] - at_least[k])
    return sorted(sizes)
