"""Degree-by-degree exact construction of graded quotient algebras.

Two builders produce the same canonical basis (non-leading monomials for the
graded-lex order with ``z`` greatest):

``recursive`` (default)
    Degree ``d`` is computed as the cokernel of
    ``Rel (x) A[<d] -> W (x) A[<d]`` where ``W`` are all generators including
    ``z`` and ``Rel`` includes the commutators ``[z, g]``.  Columns are pairs
    ``(letter, basis element)``; only lower-degree normal forms are needed.

``free``
    The ideal slice of degree ``d`` is spanned by every product
    ``u * relation * v * z^k`` of free monomials, reduced against all free
    monomials of degree ``d``.  Exponentially larger; kept as an oracle.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from ceppa.errors import BudgetExceeded, DegreeOverflow
from ceppa.exactlin import RationalMatrix, Subspace, Vector, axpy, echelon_rows, rref
from ceppa.gradealg.presentation import Monomial, Presentation

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 2_000_000
Z = -1  # letter id of the central generator in column keys


def default_budget() -> int:
    return int(os.environ.get("CEPPA_BUDGET", DEFAULT_BUDGET))


@dataclass
class Element:
    """Homogeneous element: coordinates over the canonical basis of one degree."""

    degree: int
    coeffs: Vector

    def __add__(self, other: "Element") -> "Element":
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        if self.degree != other.degree:
            raise ValueError("cannot add elements of different degrees")
        out = dict(self.coeffs)
        axpy(out, Fraction(1), other.coeffs)
        return Element(self.degree, out)

    def __neg__(self) -> "Element":
        return Element(self.degree, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, a) -> "Element":
        a = Fraction(a)
        if not a:
            return Element(self.degree, {})
        return Element(self.degree, {k: a * v for k, v in self.coeffs.items()})

    def __bool__(self) -> bool:
        return bool(self.coeffs)


def free_monomial_counts(p: Presentation, max_degree: int) -> list[int]:
    """Number of free (normalized) monomials in each degree ``0..max_degree``."""
    r = len(p.vertices)
    # words[d][h][t]: composable words of degree d from t to h
    words = [[[int(h == t) for t in range(r)] for h in range(r)]]
    for d in range(1, max_degree + 1):
        w = [[0] * r for _ in range(r)]
        for g in p.letters:
            gen = p.generators[g]
            if gen.degree <= d:
                prev = words[d - gen.degree]
                for t in range(r):
                    w[gen.head][t] += prev[gen.tail][t]
        words.append(w)
    zdeg = p.zdeg
    counts = []
    for d in range(max_degree + 1):
        total = 0
        k = 0
        while True:
            rest = d - k * (zdeg or 0)
            if rest < 0:
                break
            total += sum(map(sum, words[rest]))
            if not zdeg:
                break
            k += 1
        counts.append(total)
    return counts


def check_budget(p: Presentation, max_degree: int, budget: Optional[int] = None) -> list[int]:
    budget = default_budget() if budget is None else budget
    counts = free_monomial_counts(p, max_degree)
    for d, c in enumerate(counts):
        if c > budget:
            raise BudgetExceeded(d, c, budget)
    return counts


class GradedQuotient:
    """A graded quotient algebra truncated at ``max_degree``."""

    method = "abstract"

    def __init__(self, presentation: Presentation, max_degree: int):
        self.presentation = presentation
        self.max_degree = max_degree
        self.basis: list[list[Monomial]] = []
        self.index: list[dict[Monomial, int]] = []
        self._nf_cache: dict[Monomial, Vector] = {}
        self._prod_cache: dict[tuple[int, int, int, int], Vector] = {}

    # basic data -----------------------------------------------------------

    def dim(self, d: int) -> int:
        if d < 0:
            return 0
        if d > self.max_degree:
            if self.vanishes_above_max():
                return 0
            raise DegreeOverflow(f"degree {d} exceeds the built range 0..{self.max_degree}")
        return len(self.basis[d])

    def dims(self) -> list[int]:
        return [len(b) for b in self.basis]

    @property
    def total_dim(self) -> int:
        return sum(self.dims())

    def vanishes_above_max(self) -> bool:
        """True when the top ``max generator degree`` slices are zero, hence all higher ones."""
        k = self.presentation.max_generator_degree
        return self.max_degree + 1 >= k and all(
            not self.basis[d] for d in range(self.max_degree - k + 1, self.max_degree + 1)
        )

    @property
    def top_degree(self) -> int:
        nonzero = [d for d, b in enumerate(self.basis) if b]
        return max(nonzero) if nonzero else -1

    def dimension_table(self) -> dict[tuple[int, int, int], int]:
        """``(tail, head, degree) -> dim e_head A[degree] e_tail``."""
        table: dict[tuple[int, int, int], int] = {}
        r = len(self.presentation.vertices)
        for d, basis in enumerate(self.basis):
            for t in range(r):
                for h in range(r):
                    table[(t, h, d)] = 0
            for m in basis:
                table[(m.tail, m.head, d)] += 1
        return table

    def block(self, d: int, head: int, tail: int) -> list[int]:
        return [k for k, m in enumerate(self.basis[d]) if m.head == head and m.tail == tail]

    def diagonal(self, d: int) -> list[int]:
        """Basis indices of the R-invariant part (closed paths) in degree ``d``."""
        if d < 0 or d > self.max_degree:
            return []
        return [k for k, m in enumerate(self.basis[d]) if m.head == m.tail]

    # normal forms and products --------------------------------------------

    def nf(self, m: Monomial) -> Vector:
        if m.degree > self.max_degree:
            if self.vanishes_above_max():
                return {}
            raise DegreeOverflow(f"degree {m.degree} exceeds the built range 0..{self.max_degree}")
        hit = self._nf_cache.get(m)
        if hit is None:
            hit = self._compute_nf(m)
            self._nf_cache[m] = hit
        return hit

    def _compute_nf(self, m: Monomial) -> Vector:
        raise NotImplementedError

    def element(self, m: Monomial) -> Element:
        return Element(m.degree, dict(self.nf(m)))

    def basis_element(self, d: int, k: int) -> Element:
        return Element(d, {k: Fraction(1)})

    def zero(self, d: int) -> Element:
        return Element(d, {})

    def generator(self, g: int, vertex: Optional[int] = None) -> Element:
        """The generator ``g``; for the central one, ``z e_vertex`` (or ``z`` if vertex is None)."""
        p = self.presentation
        if p.generators[g].central:
            verts = range(len(p.vertices)) if vertex is None else [vertex]
            out = self.zero(p.zdeg)
            for v in verts:
                out = out + self.element(p.monomial((), 1, v))
            return out
        return self.element(p.monomial((g,)))

    def idempotent(self, i: int) -> Element:
        return self.element(self.presentation.monomial((), 0, i))

    def unit(self) -> Element:
        out = self.zero(0)
        for i in range(len(self.presentation.vertices)):
            out = out + self.idempotent(i)
        return out

    def z_power(self, s: int, vertex: int) -> Element:
        return self.element(self.presentation.monomial((), s, vertex))

    def mul_basis(self, d1: int, i: int, d2: int, j: int) -> Vector:
        key = (d1, i, d2, j)
        hit = self._prod_cache.get(key)
        if hit is not None:
            return hit
        x, y = self.basis[d1][i], self.basis[d2][j]
        if x.tail != y.head:
            out: Vector = {}
        elif d1 + d2 > self.max_degree:
            if not self.vanishes_above_max():
                raise DegreeOverflow(f"product of degree {d1 + d2} exceeds the built range")
            out = {}
        else:
            out = self.nf(Monomial(x.head, y.tail, x.word + y.word, x.zpow + y.zpow, d1 + d2))
        self._prod_cache[key] = out
        return out

    def product(self, x: Element, y: Element) -> Element:
        d = x.degree + y.degree
        if d > self.max_degree and not self.vanishes_above_max():
            raise DegreeOverflow(f"product of degree {d} exceeds the built range 0..{self.max_degree}")
        out: Vector = {}
        for i, a in x.coeffs.items():
            for j, b in y.coeffs.items():
                axpy(out, a * b, self.mul_basis(x.degree, i, y.degree, j))
        return Element(d, out)

    def commutator(self, x: Element, y: Element) -> Element:
        return self.product(x, y) - self.product(y, x)


class _RecursiveQuotient(GradedQuotient):
    method = "recursive"

    def __init__(self, presentation: Presentation, max_degree: int):
        super().__init__(presentation, max_degree)
        # left[d][(letter, b)] = normal form of letter * basis[d - deg letter][b]
        self.left: list[dict[tuple[int, int], Vector]] = []
        self._build()

    def _letter_degree(self, letter: int) -> int:
        p = self.presentation
        return p.zdeg if letter == Z else p.generators[letter].degree

    def _split(self, m: Monomial) -> tuple[int, Monomial]:
        """Write ``m = letter * rest`` choosing the first word letter, else ``z``."""
        p = self.presentation
        if m.word:
            g = m.word[0]
            gen = p.generators[g]
            rest_head = gen.tail
            return g, Monomial(rest_head, m.tail, m.word[1:], m.zpow, m.degree - gen.degree)
        return Z, Monomial(m.head, m.tail, (), m.zpow - 1, m.degree - p.zdeg)

    def _compute_nf(self, m: Monomial) -> Vector:
        if m.degree == 0:
            return {self.index[0][m]: Fraction(1)}
        letter, rest = self._split(m)
        left = self.left[m.degree]
        out: Vector = {}
        for b, c in self.nf(rest).items():
            axpy(out, c, left[(letter, b)])
        return out

    def _build(self) -> None:
        p = self.presentation
        r = len(p.vertices)
        e = [p.monomial((), 0, i) for i in range(r)]
        self.basis.append(e)
        self.index.append({m: k for k, m in enumerate(e)})
        self.left.append({})
        letters = list(p.letters) + ([Z] if p.central_index is not None else [])
        for d in range(1, self.max_degree + 1):
            cols: list[tuple[int, int]] = []
            monos: list[Monomial] = []
            for letter in letters:
                ld = self._letter_degree(letter)
                if ld > d:
                    continue
                for b, bm in enumerate(self.basis[d - ld]):
                    if letter == Z:
                        monos.append(Monomial(bm.head, bm.tail, bm.word, bm.zpow + 1, d))
                    else:
                        gen = p.generators[letter]
                        if gen.tail != bm.head:
                            continue
                        monos.append(Monomial(gen.head, bm.tail, (letter,) + bm.word, bm.zpow, d))
                    cols.append((letter, b))
            # descending graded-lex order; z-columns first among equal monomials
            order = sorted(range(len(cols)), key=lambda k: (monos[k].key(), cols[k][0] == Z), reverse=True)
            cols = [cols[k] for k in order]
            monos = [monos[k] for k in order]
            col_index = {c: k for k, c in enumerate(cols)}

            def expand(letter: int, vec: Mapping[int, Fraction], coef: Fraction, row: Vector) -> None:
                for b, c in vec.items():
                    k = col_index[(letter, b)]
                    s = row.get(k, 0) + coef * c
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)

            rows: list[Vector] = []
            for rel in p.relations:
                if rel.degree > d:
                    continue
                for b, bm in enumerate(self.basis[d - rel.degree]):
                    if bm.head != rel.tail:
                        continue
                    row: Vector = {}
                    for c, m in rel.terms:
                        prod_m = Monomial(m.head, bm.tail, m.word + bm.word, m.zpow + bm.zpow, d)
                        letter, rest = self._split(prod_m)
                        expand(letter, self.nf(rest), c, row)
                    if row:
                        rows.append(row)
            if p.central_index is not None:
                zd = p.zdeg
                for g in p.letters:
                    gen = p.generators[g]
                    if gen.degree + zd > d:
                        continue
                    for b, bm in enumerate(self.basis[d - gen.degree - zd]):
                        if bm.head != gen.tail:
                            continue
                        row = {}
                        gb = Monomial(gen.head, bm.tail, (g,) + bm.word, bm.zpow, d - zd)
                        zb = Monomial(bm.head, bm.tail, bm.word, bm.zpow + 1, d - gen.degree)
                        expand(Z, self.nf(gb), Fraction(1), row)
                        expand(g, self.nf(zb), Fraction(-1), row)
                        if row:
                            rows.append(row)
            red = echelon_rows(rows, len(cols))
            pivot_row = {min(row): row for row in red}
            basis = [monos[k] for k in range(len(cols)) if k not in pivot_row]
            if len(set(basis)) != len(basis):
                raise AssertionError(f"degree {d}: canonical basis monomials are not distinct")
            bindex = {m: k for k, m in enumerate(basis)}
            col_to_basis = {k: bindex[monos[k]] for k in range(len(cols)) if k not in pivot_row}
            left: dict[tuple[int, int], Vector] = {}
            for k, c in enumerate(cols):
                row = pivot_row.get(k)
                if row is None:
                    left[c] = {col_to_basis[k]: Fraction(1)}
                else:
                    left[c] = {col_to_basis[j]: -v for j, v in row.items() if j != k}
            self.basis.append(basis)
            self.index.append(bindex)
            self.left.append(left)
            log.debug("degree %d: %d columns, %d rows, dim %d", d, len(cols), len(rows), len(basis))


class _FreeQuotient(GradedQuotient):
    method = "free"

    def __init__(self, presentation: Presentation, max_degree: int):
        super().__init__(presentation, max_degree)
        self._reduce: list[dict[Monomial, Vector]] = []
        self._build()

    def _compute_nf(self, m: Monomial) -> Vector:
        d = m.degree
        k = self.index[d].get(m)
        if k is not None:
            return {k: Fraction(1)}
        return self._reduce[d][m]

    def _words(self) -> list[list[tuple[int, ...]]]:
        """Nonempty composable words by degree."""
        p = self.presentation
        words: list[list[tuple[int, ...]]] = [[] for _ in range(self.max_degree + 1)]
        for d in range(1, self.max_degree + 1):
            for g in p.letters:
                gen = p.generators[g]
                if gen.degree > d:
                    continue
                if gen.degree == d:
                    words[d].append((g,))
                for w in words[d - gen.degree]:
                    if p.generators[w[0]].head == gen.tail:
                        words[d].append((g,) + w)
        return words

    def _build(self) -> None:
        p = self.presentation
        gens = p.generators
        r = len(p.vertices)
        zd = p.zdeg
        words = self._words()

        def mono(word, zpow, vertex=None) -> Monomial:
            deg = sum(gens[g].degree for g in word) + (zpow * zd if zpow else 0)
            if word:
                return Monomial(gens[word[0]].head, gens[word[-1]].tail, word, zpow, deg)
            return Monomial(vertex, vertex, (), zpow, deg)

        # (degree) -> list of (word or None for idempotent, head, tail)
        def paths(deg: int):
            if deg == 0:
                return [((), i, i) for i in range(r)]
            return [(w, gens[w[0]].head, gens[w[-1]].tail) for w in words[deg]]

        for d in range(self.max_degree + 1):
            monos: list[Monomial] = []
            k = 0
            while True:
                rest = d - k * (zd or 0)
                if rest < 0:
                    break
                for w, h, t in paths(rest):
                    monos.append(mono(w, k, h))
                if not zd:
                    break
                k += 1
            if d:
                monos.sort(key=Monomial.key, reverse=True)  # degree 0 stays in vertex order
            col = {m: j for j, m in enumerate(monos)}
            rows: list[Vector] = []
            for rel in p.relations:
                extra = d - rel.degree
                if extra < 0:
                    continue
                for zk in range(0, (extra // zd if zd else 0) + 1):
                    rem = extra - zk * (zd or 0)
                    for du in range(rem + 1):
                        for u, uh, ut in paths(du):
                            if ut != rel.head:
                                continue
                            for v, vh, vt in paths(rem - du):
                                if vh != rel.tail:
                                    continue
                                row: Vector = {}
                                for c, m in rel.terms:
                                    mm = mono(u + m.word + v, m.zpow + zk, uh)
                                    j = col[mm]
                                    s = row.get(j, 0) + c
                                    if s:
                                        row[j] = s
                                    else:
                                        row.pop(j, None)
                                if row:
                                    rows.append(row)
            red = echelon_rows(rows, len(monos))
            pivot_row = {min(row): row for row in red}
            basis = [m for j, m in enumerate(monos) if j not in pivot_row]
            bindex = {m: j for j, m in enumerate(basis)}
            reduce: dict[Monomial, Vector] = {}
            for j, row in pivot_row.items():
                reduce[monos[j]] = {bindex[monos[c]]: -v for c, v in row.items() if c != j}
            self.basis.append(basis)
            self.index.append(bindex)
            self._reduce.append(reduce)
            log.debug("free degree %d: %d monomials, %d rows, dim %d", d, len(monos), len(rows), len(basis))


def build_graded(
    p: Presentation,
    max_degree: int,
    budget: Optional[int] = None,
    method: str = "recursive",
) -> GradedQuotient:
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    p.validate()
    check_budget(p, max_degree, budget)
    if method == "recursive":
        return _RecursiveQuotient(p, max_degree)
    if method == "free":
        return _FreeQuotient(p, max_degree)
    raise ValueError(f"unknown method {method!r}")


# subspaces of a degree slice ------------------------------------------------


def commutator_subspace(gq: GradedQuotient, d: int) -> Subspace:
    """``[A, A]`` in degree ``d`` as a subspace of the canonical coordinates.

    Spanned by ``[e_i, y]`` (all off-diagonal basis elements) and ``[g, y]``
    for non-central generators ``g``; these span all commutators because
    ``[xy, w] = [x, yw] + [y, wx]``.
    """
    if d > gq.max_degree:
        raise DegreeOverflow(f"degree {d} exceeds the built range 0..{gq.max_degree}")
    p = gq.presentation
    vecs: list[Vector] = []
    for k, m in enumerate(gq.basis[d]):
        if m.head != m.tail:
            vecs.append({k: Fraction(1)})
    for g in p.letters:
        gd = p.generators[g].degree
        if gd > d:
            continue
        ge = gq.generator(g)
        for j in range(gq.dim(d - gd)):
            c = gq.commutator(ge, gq.basis_element(d - gd, j))
            if c:
                vecs.append(c.coeffs)
    return Subspace.span(vecs, gq.dim(d))


def commutator_subspace_all_pairs(gq: GradedQuotient, d: int) -> Subspace:
    """Same subspace from every pair of basis elements (quadratic; for cross-checks)."""
    vecs = []
    for d1 in range(d + 1):
        for i in range(gq.dim(d1)):
            for j in range(gq.dim(d - d1)):
                c = gq.commutator(gq.basis_element(d1, i), gq.basis_element(d - d1, j))
                if c:
                    vecs.append(c.coeffs)
    return Subspace.span(vecs, gq.dim(d))


def center_subspace(gq: GradedQuotient, d: int) -> Subspace:
    """Center of the algebra in degree ``d``: elements commuting with every generator."""
    p = gq.presentation
    n = gq.dim(d)
    diag = gq.diagonal(d)  # commuting with every e_i forces block-diagonal support
    columns: list[Vector] = []
    gens = [(g, gq.generator(g)) for g in p.letters]
    for k in diag:
        x = gq.basis_element(d, k)
        col: Vector = {}
        offset = 0
        for g, ge in gens:
            target = d + p.generators[g].degree
            c = gq.commutator(x, ge)
            for j, v in c.coeffs.items():
                col[offset + j] = v
            offset += gq.dim(target)
        columns.append(col)
    height = max([max(c) for c in columns if c], default=-1) + 1
    m = RationalMatrix.from_columns(height, columns)
    kernel = rref(m).nullspace
    return Subspace.span(({diag[i]: v for i, v in vec.items()} for vec in kernel), n)
