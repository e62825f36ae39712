"""Trace, center, commutator quotient and the three-term complex of a built A^mu."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from ceppa.errors import (
    ComplexNotChain,
    DegeneratePairing,
    DegreeOverflow,
    MissingTopDegree,
    NonUniqueTrace,
    NoSolution,
    NotADerivation,
    TheoremViolation,
)
from ceppa.exactlin import RationalMatrix, Subspace, Vector, axpy, nilpotent_block_sizes, rref
from ceppa.gradealg import (
    Element,
    GradedQuotient,
    build_graded,
    center_subspace,
    commutator_subspace,
    hilbert_matrix_predicted,
    preprojective_presentation,
    socle_degree,
)
from ceppa.lietheory import path_trace
from ceppa.rootsys import CartanDatum, RootSystem, Weight, build_root_system, random_regular_weight


def _root_system(gq: GradedQuotient) -> RootSystem:
    datum = gq.presentation.datum
    if datum is None:
        raise ValueError("the presentation carries no Cartan datum")
    return build_root_system(datum)


def _mu(gq: GradedQuotient) -> Weight:
    mu = gq.presentation.mu
    if mu is None:
        raise ValueError("the presentation carries no weight (is this A_0?)")
    return mu


def top_degree(gq: GradedQuotient) -> int:
    return socle_degree(_root_system(gq).h)


def build_algebra(datum: CartanDatum, mu: Optional[Weight] = None, budget: Optional[int] = None,
                  method: str = "recursive", reverse: Sequence[int] = ()) -> GradedQuotient:
    """A^mu built two degrees past its socle so vanishing there is verified."""
    h = build_root_system(datum).h
    p = preprojective_presentation(datum, mu, reverse=reverse)
    return build_graded(p, socle_degree(h) + 2, budget=budget, method=method)


# trace ---------------------------------------------------------------------


@dataclass
class TraceVector:
    values: tuple[Fraction, ...]  # t_i = Tr(z^{h-2} e_i)
    functional: Vector  # trace on the canonical basis of the top degree
    pegged_vertex: Optional[int]  # vertex whose value equals eps_i * path_trace(i)
    normalization: str

    def __iter__(self):
        return iter(self.values)


def trace_functional(gq: GradedQuotient) -> TraceVector:
    """The unique (up to scale) trace, pegged to the signed path sum at the first usable vertex."""
    rs = _root_system(gq)
    top = socle_degree(rs.h)
    if gq.max_degree < top or not gq.basis[top]:
        raise MissingTopDegree(f"algebra is not built through degree {top}")
    ann = commutator_subspace(gq, top).annihilator()
    if ann.dim != 1:
        raise NonUniqueTrace(f"space of traces on degree {top} has dimension {ann.dim}")
    psi = dict(ann.rows[0])
    socle = [gq.z_power(rs.h - 2, i).coeffs for i in range(rs.rank)]
    raw = [sum((psi.get(k, 0) * v for k, v in s.items()), Fraction(0)) for s in socle]
    mu = gq.presentation.mu
    peg = None
    scale = Fraction(1)
    if mu is not None:
        for i in range(rs.rank):
            target = rs.epsilon[i] * path_trace(rs, mu, i)
            if raw[i] and target:
                peg, scale = i, target / raw[i]
                break
    if peg is None:
        first = next(i for i, v in enumerate(raw) if v)
        scale = 1 / raw[first]
        note = f"t_{first + 1} = 1"
    else:
        note = f"t_{peg + 1} = eps_{peg + 1} * path_trace({peg + 1})"
    return TraceVector(
        tuple(v * scale for v in raw),
        {k: v * scale for k, v in psi.items()},
        peg,
        note,
    )


def trace_of(tv: TraceVector, x: Element, top: int) -> Fraction:
    if x.degree != top:
        return Fraction(0)
    return sum((tv.functional.get(k, 0) * v for k, v in x.coeffs.items()), Fraction(0))


# graded data ----------------------------------------------------------------


@dataclass
class SliceData:
    commutators: list[Subspace]
    centers: list[Subspace]

    @property
    def p(self) -> list[int]:
        return [s.n - s.dim for s in self.commutators]

    @property
    def p_star(self) -> list[int]:
        return [s.dim for s in self.centers]


def slice_data(gq: GradedQuotient, top: Optional[int] = None) -> SliceData:
    top = top_degree(gq) if top is None else top
    if gq.max_degree < top:
        raise MissingTopDegree(f"algebra is not built through degree {top}")
    return SliceData(
        [commutator_subspace(gq, d) for d in range(top + 1)],
        [center_subspace(gq, d) for d in range(top + 1)],
    )


@dataclass
class Pairing:
    grams: dict[int, list[list[Fraction]]]  # degree of the center side -> Gram matrix
    samples: int
    nondegenerate: bool


def pairing_check(gq: GradedQuotient, tv: Optional[TraceVector] = None, data: Optional[SliceData] = None,
                  samples: int = 200, seed: int = 0) -> Pairing:
    """Gram matrices of ``Tr(xy)`` between ``Z[d]`` and ``(A/[A,A])[top - d]``."""
    top = top_degree(gq)
    tv = trace_functional(gq) if tv is None else tv
    data = slice_data(gq, top) if data is None else data
    grams: dict[int, list[list[Fraction]]] = {}
    for d in range(top + 1):
        zbasis = [Element(d, dict(v)) for v in data.centers[d].rows]
        qcoords = data.commutators[top - d].complement()
        if len(zbasis) != len(qcoords):
            raise DegeneratePairing(
                f"dim Z[{d}] = {len(zbasis)} but dim (A/[A,A])[{top - d}] = {len(qcoords)}"
            )
        gram = [[trace_of(tv, gq.product(x, gq.basis_element(top - d, q)), top) for q in qcoords]
                for x in zbasis]
        grams[d] = gram
        if gram and rref(RationalMatrix.from_dense(gram), verify=False).rank != len(gram):
            raise DegeneratePairing(f"Gram matrix between Z[{d}] and (A/[A,A])[{top - d}] is singular")
    # the center pairs to zero with commutators
    rng = random.Random(seed)
    count = 0
    for _ in range(samples):
        d = rng.randrange(top + 1)
        if not data.centers[d].dim:
            continue
        d1 = rng.randrange(top - d + 1)
        d2 = top - d - d1
        if not gq.dim(d1) or not gq.dim(d2):
            continue
        x = Element(d, dict(rng.choice(data.centers[d].rows)))
        y1 = gq.basis_element(d1, rng.randrange(gq.dim(d1)))
        y2 = gq.basis_element(d2, rng.randrange(gq.dim(d2)))
        count += 1
        if trace_of(tv, gq.product(x, gq.commutator(y1, y2)), top):
            raise DegeneratePairing("a central element pairs nontrivially with a commutator")
    return Pairing(grams, count, True)


def _z_operator(gq: GradedQuotient, spaces: Sequence[Subspace], quotient: bool) -> RationalMatrix:
    """Multiplication by ``z`` on the graded space ``sum_d spaces[d]`` (or on the quotients)."""
    z = gq.generator(gq.presentation.central_index)
    zdeg = gq.presentation.zdeg
    offsets, total = [], 0
    for s in spaces:
        offsets.append(total)
        total += (s.n - s.dim) if quotient else s.dim
    m = RationalMatrix(total, total)
    for d, s in enumerate(spaces):
        if quotient:
            vectors = [{k: Fraction(1)} for k in s.complement()]
        else:
            vectors = [dict(v) for v in s.rows]
        for col, v in enumerate(vectors):
            image = gq.product(z, Element(d, v))
            t = d + zdeg
            if t >= len(spaces) or not image:
                continue
            target = spaces[t]
            if quotient:
                red = target.reduce(image.coeffs)
                pos = {k: n for n, k in enumerate(target.complement())}
                coords = {pos[k]: c for k, c in red.items()}
            else:
                coords = {n: c for n, c in enumerate(target.coordinates(image.coeffs)) if c}
            for row, c in coords.items():
                m.rows[offsets[t] + row][offsets[d] + col] = c
    return m


@dataclass
class GradedTraceData:
    p: list[int]  # dims of (A/[A,A])[d], d = 0 .. top
    p_star: list[int]  # dims of Z[d]
    center_blocks: list[int]
    quotient_blocks: list[int]
    exponents: list[int]
    N: int
    rank: int
    h: int
    problems: list[str] = field(default_factory=list)

    @property
    def top(self) -> int:
        return socle_degree(self.h)

    def palindrome_ok(self) -> bool:
        return self.p_star == self.p[::-1]

    def even_support_ok(self) -> bool:
        return not any(self.p[1::2]) and not any(self.p_star[1::2])

    def hilbert_identity_ok(self) -> bool:
        """``t^2 p*(t) + p(t) = r (1 - t^{2h}) / (1 - t^2)``."""
        size = self.top + 3
        lhs = [0] * size
        for d, v in enumerate(self.p):
            lhs[d] += v
        for d, v in enumerate(self.p_star):
            lhs[d + 2] += v
        rhs = [self.rank * int(d % 2 == 0 and d <= 2 * self.h - 2) for d in range(size)]
        return lhs == rhs


def graded_trace_data(gq: GradedQuotient, data: Optional[SliceData] = None, verify: bool = True) -> GradedTraceData:
    """Hilbert polynomials of A/[A,A] and Z and the Jordan types of ``z`` on both."""
    rs = _root_system(gq)
    top = socle_degree(rs.h)
    data = slice_data(gq, top) if data is None else data
    out = GradedTraceData(
        p=data.p,
        p_star=data.p_star,
        center_blocks=nilpotent_block_sizes(_z_operator(gq, data.centers, quotient=False)),
        quotient_blocks=nilpotent_block_sizes(_z_operator(gq, data.commutators, quotient=True)),
        exponents=list(rs.exponents),
        N=rs.N,
        rank=rs.rank,
        h=rs.h,
    )
    if sum(out.p) != rs.N or sum(out.p_star) != rs.N:
        out.problems.append(f"dim A/[A,A] = {sum(out.p)}, dim Z = {sum(out.p_star)}, N = {rs.N}")
    if out.center_blocks != out.exponents:
        out.problems.append(f"z on Z has blocks {out.center_blocks}")
    if out.quotient_blocks != out.exponents:
        out.problems.append(f"z on A/[A,A] has blocks {out.quotient_blocks}")
    if not out.palindrome_ok():
        out.problems.append("p and p* are not palindromes of each other")
    if not out.even_support_ok():
        out.problems.append("odd degrees occur in p or p*")
    if not out.hilbert_identity_ok():
        out.problems.append("t^2 p* + p differs from r (1 - t^{2h}) / (1 - t^2)")
    if verify and out.problems:
        raise TheoremViolation("; ".join(out.problems))
    return out


# membership -----------------------------------------------------------------


def e_membership_bruteforce(gq: GradedQuotient, s: int, commutators: Optional[Subspace] = None) -> Subspace:
    """``{phi : z^s sum_i eps_i phi_i e_i in [A, A]}`` as a subspace of Q^r."""
    rs = _root_system(gq)
    if 2 * s > socle_degree(rs.h) or 2 * s > gq.max_degree:
        raise DegreeOverflow(f"s = {s} is beyond the socle")
    comm = commutator_subspace(gq, 2 * s) if commutators is None else commutators
    cols = []
    for i in range(rs.rank):
        v = gq.z_power(s, i).coeffs
        cols.append(comm.reduce({k: rs.epsilon[i] * c for k, c in v.items()}))
    m = RationalMatrix.from_columns(gq.dim(2 * s), cols)
    return Subspace.span(rref(m).nullspace, rs.rank)


# B algebra --------------------------------------------------------------------


def b_commutator_dimensions(gq: GradedQuotient) -> list[int]:
    """``dim (B/[B,B])[2p]`` for every even degree that was built."""
    return [gq.dim(d) - commutator_subspace(gq, d).dim for d in range(0, gq.max_degree + 1, 2)]


# the complex 0 -> D0 -> D1 -> D2 -> 0 ----------------------------------------


@dataclass
class ComplexDegree:
    degree: int
    dims: tuple[int, int, int]
    ranks: tuple[int, int]
    euler_predicted: int

    @property
    def homology(self) -> tuple[int, int, int]:
        (n0, n1, n2), (r0, r1) = self.dims, self.ranks
        return n0 - r0, n1 - r0 - r1, n2 - r1

    @property
    def euler(self) -> int:
        n0, n1, n2 = self.dims
        return n0 - n1 + n2


class _Complex:
    def __init__(self, gq: GradedQuotient):
        self.gq = gq
        p = gq.presentation
        self.letters = p.letters
        self.pairs = p.arrow_pairs
        self.gens = {g: gq.generator(g) for g in self.letters}

    def d0_space(self, d: int) -> list[int]:
        return self.gq.diagonal(d - 2)

    def d1_space(self, d: int) -> list[tuple[int, int]]:
        """Pairs ``(letter b, basis index of y)`` with ``y`` in ``e_tail(b) A e_head(b)`` of degree ``d-1``."""
        gq = self.gq
        gens = gq.presentation.generators
        out = []
        if d - 1 < 0 or d - 1 > gq.max_degree:
            return out
        for b in self.letters:
            out += [(b, k) for k in gq.block(d - 1, gens[b].tail, gens[b].head)]
        return out

    def d2_space(self, d: int) -> list[int]:
        return self.gq.diagonal(d)

    def d0_image(self, x: Element, d1_index: Mapping[tuple[int, int], int]) -> Vector:
        """``sum_a [x, a] (x) a* - [x, a*] (x) a`` in D1 coordinates."""
        out: Vector = {}
        for a, astar in self.pairs:
            for g, slot, sign in ((a, astar, 1), (astar, a, -1)):
                c = self.gq.commutator(x, self.gens[g])
                for k, v in c.coeffs.items():
                    axpy(out, Fraction(sign) * v, {d1_index[(slot, k)]: Fraction(1)})
        return out

    def d1_image(self, b: int, y: Element, d2_index: Mapping[int, int]) -> Vector:
        c = self.gq.commutator(y, self.gens[b])
        return {d2_index[k]: v for k, v in c.coeffs.items()}

    def matrices(self, d: int) -> tuple[RationalMatrix, RationalMatrix, tuple[int, int, int]]:
        gq = self.gq
        s0, s1, s2 = self.d0_space(d), self.d1_space(d), self.d2_space(d)
        i1 = {key: n for n, key in enumerate(s1)}
        i2 = {k: n for n, k in enumerate(s2)}
        m0 = RationalMatrix.from_columns(len(s1), [self.d0_image(gq.basis_element(d - 2, k), i1) for k in s0])
        m1 = RationalMatrix.from_columns(
            len(s2), [self.d1_image(b, gq.basis_element(d - 1, k), i2) for b, k in s1]
        )
        return m0, m1, (len(s0), len(s1), len(s2))


def complex_homology(gq: GradedQuotient) -> list[ComplexDegree]:
    """Dimensions, ranks and homology of the complex in every degree ``0 .. top + 2``."""
    rs = _root_system(gq)
    top = socle_degree(rs.h)
    if gq.max_degree < top + 2:
        raise MissingTopDegree(f"algebra must be built through degree {top + 2}")
    hm = hilbert_matrix_predicted(rs.datum)
    c = rs.datum.adjacency
    r = rs.rank
    cx = _Complex(gq)
    out = []
    for d in range(top + 3):
        m0, m1, dims = cx.matrices(d)
        if m0.ncols and m1.ncols and not (m1 @ m0).is_zero():
            raise ComplexNotChain(f"d1 d0 is nonzero in degree {d}")
        predicted = sum(hm.coefficient(d)[i][i] for i in range(r))
        if d >= 1:
            cd = hm.coefficient(d - 1)
            predicted -= sum(c[i][j] * cd[i][j] for i in range(r) for j in range(r))
        if d >= 2:
            predicted += sum(hm.coefficient(d - 2)[i][i] for i in range(r))
        ranks = (m0.rank() if m0.ncols and m0.nrows else 0, m1.rank() if m1.ncols and m1.nrows else 0)
        out.append(ComplexDegree(d, dims, ranks, int(predicted)))
    return out


# derivations ------------------------------------------------------------------


def ad_images(gq: GradedQuotient, x: Element) -> dict[int, Element]:
    """Images ``[x, g]`` of every arrow generator: the inner derivation ``ad x``."""
    return {g: gq.commutator(x, gq.generator(g)) for g in gq.presentation.letters}


def _derivation_shift(gq: GradedQuotient, images: Mapping[int, Element]) -> Optional[int]:
    gens = gq.presentation.generators
    shifts = {img.degree - gens[g].degree for g, img in images.items() if img}
    if len(shifts) > 1:
        raise NotADerivation("images have inconsistent degree shifts")
    return shifts.pop() if shifts else None


def _apply_derivation(gq: GradedQuotient, images: Mapping[int, Element], word: Sequence[int], zpow: int,
                      head: int, shift: int) -> Element:
    p = gq.presentation
    out = gq.zero(sum(p.generators[g].degree for g in word) + zpow * (p.zdeg or 0) + shift)
    gens = [gq.generator(g) for g in word]
    for pos, g in enumerate(word):
        img = images.get(g)
        if not img:
            continue
        term = gq.z_power(zpow, head) if zpow else gq.idempotent(head)
        for q, ge in enumerate(gens):
            term = gq.product(term, img if q == pos else ge)
        out = out + term
    return out


def inner_derivation_witness(gq: GradedQuotient, images: Mapping[int, Element]) -> Element:
    """Solve ``d0(y) = x_D`` for a derivation ``D`` given on arrows (``D z = 0``, ``D e_i = 0``)."""
    p = gq.presentation
    gens = p.generators
    for g in p.letters:
        img = images.get(g)
        if img and any(
            (gq.basis[img.degree][k].head, gq.basis[img.degree][k].tail) != (gens[g].head, gens[g].tail)
            for k in img.coeffs
        ):
            raise NotADerivation(f"image of {gens[g].name} is not in e_head A e_tail")
    shift = _derivation_shift(gq, images)
    if shift is None:
        return gq.zero(0)
    for rel in p.relations:
        acc = gq.zero(rel.degree + shift)
        for c, m in rel.terms:
            acc = acc + _apply_derivation(gq, images, m.word, m.zpow, m.head, shift).scale(c)
        if acc:
            raise NotADerivation("derivation does not preserve a defining relation")
    d = shift + 2
    cx = _Complex(gq)
    s0, s1 = cx.d0_space(d), cx.d1_space(d)
    i1 = {key: n for n, key in enumerate(s1)}
    target: Vector = {}
    for a, astar in p.arrow_pairs:
        for g, slot, sign in ((a, astar, 1), (astar, a, -1)):
            img = images.get(g)
            if img:
                for k, v in img.coeffs.items():
                    axpy(target, Fraction(sign) * v, {i1[(slot, k)]: Fraction(1)})
    cols = [cx.d0_image(gq.basis_element(shift, k), i1) for k in s0]
    # solve sum_k y_k col_k = target via the nullspace of [cols | -target]
    m = RationalMatrix.from_columns(len(s1), cols + [{k: -v for k, v in target.items()}])
    solution = next((v for v in rref(m).nullspace if v.get(len(cols))), None)
    if solution is None:
        raise NoSolution("no y with ad y = D; the complex would have first homology")
    lead = solution[len(cols)]
    y = Element(shift, {s0[k]: v / lead for k, v in solution.items() if k < len(cols)})
    for g in p.letters:
        img = images.get(g) or gq.zero(gens[g].degree + shift)
        if (gq.commutator(y, gq.generator(g)) - img).coeffs:
            raise NoSolution(f"witness fails on {gens[g].name}")
    return y


# weights ----------------------------------------------------------------------


@dataclass
class SampledWeight:
    mu: Weight
    seed: int
    attempts: int
    algebra: Optional[GradedQuotient] = None


def sample_mu(datum: CartanDatum, seed: int, build: bool = True, budget: Optional[int] = None,
              max_attempts: int = 20) -> SampledWeight:
    """Seeded random regular integer weight; redrawn until the trace is unique if ``build``."""
    rs = build_root_system(datum)
    for attempt in range(max_attempts):
        mu = random_regular_weight(rs, seed + 7919 * attempt)
        if not build:
            return SampledWeight(mu, seed, attempt + 1)
        gq = build_algebra(datum, mu, budget=budget)
        try:
            trace_functional(gq)
        except NonUniqueTrace:
            continue
        return SampledWeight(mu, seed, attempt + 1, gq)
    raise NonUniqueTrace(f"no weight with a unique trace in {max_attempts} draws")
