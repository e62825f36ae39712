"""The negative nilpotent subalgebra n of an ADE Lie algebra and its root-poset operators.

``F_alpha`` (alpha a positive root) has weight ``-alpha``.  Structure constants
come from the bimultiplicative asymmetry function ``eps`` with
``eps(a_i, a_i) = -1``, ``eps(a_i, a_j) = -1`` for adjacent ``i < j`` and ``+1``
otherwise, so ``[F_a, F_b] = eps(a, b) F_{a+b}`` whenever ``a + b`` is a root.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence

from ceppa.errors import InconsistentScaling, IrregularWeight, JacobiFailure, NonGenericLambda
from ceppa.exactlin import RationalMatrix, Subspace, Vector, axpy, rref
from ceppa.rootsys import Root, RootSystem, Weight, inner, is_regular


def asymmetry(rs: RootSystem, alpha: Root, beta: Root) -> int:
    """Value of the asymmetry function on a pair of root-lattice vectors."""
    adj = rs.datum.adjacency
    r = rs.rank
    exp = 0
    for i in range(r):
        ai = alpha.coords[i]
        if not ai:
            continue
        exp += ai * beta.coords[i]
        for j in range(i + 1, r):
            if adj[i][j]:
                exp += ai * beta.coords[j]
    return -1 if exp % 2 else 1


@dataclass
class NilpotentAlgebra:
    rs: RootSystem
    # (index a, index b) -> (sign, index of a+b) for every pair with a+b a root
    table: dict[tuple[int, int], tuple[int, int]]

    @property
    def dim(self) -> int:
        return self.rs.N

    def c(self, a: int, b: int) -> int:
        hit = self.table.get((a, b))
        return hit[0] if hit else 0

    def bracket_basis(self, a: int, b: int) -> Vector:
        hit = self.table.get((a, b))
        return {hit[1]: Fraction(hit[0])} if hit else {}

    def bracket(self, x: Vector, y: Vector) -> Vector:
        out: Vector = {}
        for a, u in x.items():
            for b, v in y.items():
                hit = self.table.get((a, b))
                if hit:
                    axpy(out, u * v * hit[0], {hit[1]: Fraction(1)})
        return out

    def simple_index(self, i: int) -> int:
        return self.rs.index(self.rs.simple(i))

    def principal(self) -> Vector:
        """``F = sum_i eps_i F_i``."""
        return {self.simple_index(i): Fraction(e) for i, e in enumerate(self.rs.epsilon)}


def build_nilpotent(rs: RootSystem, samples: int = 0, seed: int = 0) -> NilpotentAlgebra:
    """Structure constants of n, with antisymmetry, Jacobi, Serre and generation verified.

    Jacobi is checked on every triple whose weights sum to a root (all other
    triples vanish term by term); ``samples`` extra uniformly random triples
    are checked as well.
    """
    roots = rs.positive_roots
    table: dict[tuple[int, int], tuple[int, int]] = {}
    for a, alpha in enumerate(roots):
        for b, beta in enumerate(roots):
            s = alpha + beta
            if rs.is_root(s):
                table[(a, b)] = (asymmetry(rs, alpha, beta), rs.index(s))
    na = NilpotentAlgebra(rs, table)
    verify_nilpotent(na, samples, seed)
    return na


def _jacobi(na: NilpotentAlgebra, a: int, b: int, c: int) -> Vector:
    x, y, z = ({a: Fraction(1)}, {b: Fraction(1)}, {c: Fraction(1)})
    out = na.bracket(na.bracket(x, y), z)
    axpy(out, Fraction(1), na.bracket(na.bracket(y, z), x))
    axpy(out, Fraction(1), na.bracket(na.bracket(z, x), y))
    return out


def verify_nilpotent(na: NilpotentAlgebra, samples: int = 0, seed: int = 0) -> dict[str, int]:
    """Raise JacobiFailure unless n is a Lie algebra with the expected presentation."""
    rs = na.rs
    roots = rs.positive_roots
    n = len(roots)
    stats = {"pairs": 0, "triples": 0, "samples": 0}
    for (a, b), (sign, _) in na.table.items():
        stats["pairs"] += 1
        if na.c(b, a) != -sign:
            raise JacobiFailure(f"antisymmetry fails on ({roots[a]}, {roots[b]})")
    for (a, b), (_, ab) in na.table.items():
        for c in range(n):
            if rs.is_root(roots[ab] + roots[c]):
                stats["triples"] += 1
                if _jacobi(na, a, b, c):
                    raise JacobiFailure(f"Jacobi fails on ({roots[a]}, {roots[b]}, {roots[c]})")
    rng = random.Random(seed)
    for _ in range(samples):
        a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        stats["samples"] += 1
        if _jacobi(na, a, b, c):
            raise JacobiFailure(f"Jacobi fails on ({roots[a]}, {roots[b]}, {roots[c]})")
    adj = rs.datum.adjacency
    for i in range(rs.rank):
        fi = {na.simple_index(i): Fraction(1)}
        for j in range(rs.rank):
            if i == j:
                continue
            fj = {na.simple_index(j): Fraction(1)}
            once = na.bracket(fi, fj)
            if adj[i][j]:
                if not once or na.bracket(fi, once):
                    raise JacobiFailure(f"Serre relation fails for adjacent ({i + 1}, {j + 1})")
            elif once:
                raise JacobiFailure(f"[F_{i + 1}, F_{j + 1}] should vanish")
    reached = {na.simple_index(i) for i in range(rs.rank)}
    for alpha in roots:
        a = rs.index(alpha)
        if a in reached:
            continue
        for i in range(rs.rank):
            beta = alpha - rs.simple(i)
            if rs.is_root(beta) and rs.index(beta) in reached and na.c(na.simple_index(i), rs.index(beta)):
                reached.add(a)
                break
    if len(reached) != n:
        raise JacobiFailure("simple generators do not generate n")
    return stats


def lusztig_rescale(na: NilpotentAlgebra, epsilon: Optional[Sequence[int]] = None) -> list[Fraction]:
    """Scalars ``c_alpha`` with ``[F_i, c_a F_a] = eps_i c_{a+a_i} F_{a+a_i}``; ``c`` is 1 on simple roots."""
    rs = na.rs
    eps = tuple(rs.epsilon if epsilon is None else epsilon)
    if any(eps[i] != -eps[j] for i, j in rs.datum.edges):
        raise InconsistentScaling("epsilon is not a bipartite colouring")
    scale: dict[int, Fraction] = {}
    for alpha in rs.positive_roots:
        a = rs.index(alpha)
        if alpha.height == 1:
            scale[a] = Fraction(1)
            continue
        for i in range(rs.rank):
            beta = alpha - rs.simple(i)
            if not rs.is_root(beta):
                continue
            b = rs.index(beta)
            value = scale[b] * na.c(na.simple_index(i), b) / eps[i]
            if a not in scale:
                scale[a] = value
            elif scale[a] != value:
                raise InconsistentScaling(f"decompositions of {alpha} disagree")
    return [scale[k] for k in range(rs.N)]


def _check_mu(rs: RootSystem, mu: Weight) -> None:
    if not is_regular(mu, rs):
        raise IrregularWeight(f"mu = ({mu}) is not regular")


def L_operator(
    na: NilpotentAlgebra,
    mu: Weight,
    lam: Optional[Weight] = None,
    scaling: Optional[Sequence[Fraction]] = None,
) -> RationalMatrix:
    """Matrix of ``ad(-h_lam + F) ad(h_mu)^{-1}`` on n (``lam`` absent means 0).

    Columns are images of basis vectors; with ``scaling`` the basis is
    ``F'_a = c_a F_a``.
    """
    rs = na.rs
    _check_mu(rs, mu)
    eps = rs.epsilon
    n = rs.N
    scale = [Fraction(1)] * n if scaling is None else list(scaling)
    m = RationalMatrix(n, n)
    simples = [na.simple_index(i) for i in range(rs.rank)]
    for a, alpha in enumerate(rs.positive_roots):
        inv = -1 / inner(mu, alpha)
        if lam is not None:
            d = inv * inner(lam, alpha)  # ad(-h_lam) F_a = (lam, a) F_a
            if d:
                m.rows[a][a] = d
        for i, s in enumerate(simples):
            hit = na.table.get((s, a))
            if hit:
                sign, target = hit
                # F'_a -> c_a inv eps_i sign F_target = c_a / c_target inv eps_i sign F'_target
                m.rows[target][a] = inv * eps[i] * sign * scale[a] / scale[target]
    return m


@dataclass
class HeightSpaces:
    rs: RootSystem
    roots_by_height: list[list[Root]]  # index k holds roots of height k (entry 0 empty)
    T: list[RationalMatrix]  # T[k] maps height k to height k+1; T[0] unused

    def operator(self, k: int) -> RationalMatrix:
        return self.T[k]

    def chain(self, s: int) -> RationalMatrix:
        """``T_s ... T_1`` (identity on V_1 for ``s = 0``)."""
        out = RationalMatrix.identity(len(self.roots_by_height[1]))
        for k in range(1, s + 1):
            out = self.T[k] @ out
        return out


def t_matrices(rs: RootSystem, mu: Weight) -> HeightSpaces:
    """``(T_k f)(g) = sum_{j : g - a_j root} f(g - a_j) / (mu, g - a_j)`` for ``k = 1 .. h-2``."""
    _check_mu(rs, mu)
    by_height = [[]] + [rs.by_height(k) for k in range(1, rs.h)]
    by_height[1] = [rs.simple(i) for i in range(rs.rank)]  # V_1 is indexed by vertex
    T: list[RationalMatrix] = [RationalMatrix(0, 0)]
    for k in range(1, rs.h - 1):
        src = {a: n for n, a in enumerate(by_height[k])}
        tgt = by_height[k + 1]
        m = RationalMatrix(len(tgt), len(src))
        for row, gamma in enumerate(tgt):
            for j in range(rs.rank):
                beta = gamma - rs.simple(j)
                if beta in src:
                    m.rows[row][src[beta]] = 1 / inner(mu, beta)
        T.append(m)
    return HeightSpaces(rs, by_height, T)


def height_blocks(rs: RootSystem, op: RationalMatrix, k: int) -> RationalMatrix:
    """Block of an N x N operator from height ``k`` to height ``k + 1``."""
    rows = [rs.index(a) for a in rs.by_height(k + 1)]
    if k == 1:
        cols = [rs.index(rs.simple(i)) for i in range(rs.rank)]
    else:
        cols = [rs.index(a) for a in rs.by_height(k)]
    return op.submatrix(rows, cols)


def _phi_vector(phi: Sequence) -> Vector:
    return {i: Fraction(v) for i, v in enumerate(phi) if v}


def t_kernel(hs: HeightSpaces, s: int) -> Subspace:
    r = hs.rs.rank
    if s >= hs.rs.h - 1:
        return Subspace.full(r)
    return Subspace.span(rref(hs.chain(s)).nullspace, r)


def membership(rs: RootSystem, mu: Weight, phi: Sequence, s: int, hs: Optional[HeightSpaces] = None) -> bool:
    """Whether ``T_s ... T_1 phi = 0``."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    if len(phi) != rs.rank:
        raise ValueError(f"phi needs {rs.rank} coordinates")
    hs = t_matrices(rs, mu) if hs is None else hs
    if s >= rs.h - 1:
        return True
    return not hs.chain(s).apply(_phi_vector(phi))


def lie_kernel(na: NilpotentAlgebra, mu: Weight, s: int, op: Optional[RationalMatrix] = None) -> Subspace:
    """``{phi : L^s (sum phi_i F_i) = 0}`` computed in the Chevalley basis."""
    rs = na.rs
    op = L_operator(na, mu) if op is None else op
    cols = []
    for i in range(rs.rank):
        v: Vector = {na.simple_index(i): Fraction(1)}
        for _ in range(s):
            v = op.apply(v)
        cols.append(v)
    m = RationalMatrix.from_columns(rs.N, cols)
    return Subspace.span(rref(m).nullspace, rs.rank)


def membership_lie(na: NilpotentAlgebra, mu: Weight, phi: Sequence, s: int) -> bool:
    """Whether ``L^s (sum_i phi_i F_i) = 0``."""
    op = L_operator(na, mu)
    v = {na.simple_index(i): Fraction(x) for i, x in enumerate(phi) if x}
    for _ in range(s):
        v = op.apply(v)
    return not v


def _chain_sums(rs: RootSystem, i: int, weight) -> Fraction:
    acc: dict[Root, Fraction] = {rs.simple(i): Fraction(1)}
    for k in range(1, rs.h - 1):
        for beta in rs.by_height(k):
            w = acc.get(beta)
            if not w:
                continue
            step = w * weight(beta)
            for j in range(rs.rank):
                gamma = beta + rs.simple(j)
                if rs.is_root(gamma):
                    acc[gamma] = acc.get(gamma, 0) + step
    return acc.get(rs.theta, Fraction(0))


def path_trace(rs: RootSystem, mu: Weight, i: int) -> Fraction:
    """Sum over increasing chains from ``a_i`` to the highest root of ``prod 1/(mu, beta_k)``.

    The product runs over every root of the chain except the last.
    """
    _check_mu(rs, mu)
    return _chain_sums(rs, i, lambda beta: 1 / inner(mu, beta))


def count_paths(rs: RootSystem, i: int) -> int:
    """Number of chains from ``a_i`` to the highest root adding one simple root per step."""
    return int(_chain_sums(rs, i, lambda beta: Fraction(1)))


def rho_path_trace(rs: RootSystem, i: int) -> Fraction:
    return Fraction(count_paths(rs, i), factorial(rs.h - 2))


# W(lambda) conditions ------------------------------------------------------


def eigen_ratios(rs: RootSystem, mu: Weight, lam: Weight) -> list[Fraction]:
    return [-inner(lam, a) / inner(mu, a) for a in rs.positive_roots]


def is_generic_lambda(rs: RootSystem, mu: Weight, lam: Weight) -> bool:
    ratios = eigen_ratios(rs, mu, lam)
    return len(set(ratios)) == len(ratios)


def random_generic_lambda(
    rs: RootSystem, mu: Weight, seed: int, lo: int = 1, hi: int = 100, tries: int = 1000
) -> Weight:
    """Integer weight with coordinates in ``[lo, hi]`` whose eigenvalue ratios are distinct."""
    rng = random.Random(seed)
    for _ in range(tries):
        lam = Weight(tuple(Fraction(rng.randint(lo, hi)) for _ in range(rs.rank)))
        if is_generic_lambda(rs, mu, lam):
            return lam
    raise NonGenericLambda(f"no generic lambda found in {tries} draws")


def _require_generic(rs: RootSystem, mu: Weight, lam: Weight) -> None:
    _check_mu(rs, mu)
    if not is_generic_lambda(rs, mu, lam):
        raise NonGenericLambda(f"lambda = ({lam}) has repeated eigenvalue ratios")


def coefficient_index(rs: RootSystem, i: int, k: int) -> int:
    """Column of the coefficient of ``z^k`` in ``f_i`` (``0 <= k <= h-2``)."""
    return i * (rs.h - 1) + k


def w_lambda_matrix(rs: RootSystem, mu: Weight, lam: Weight) -> RationalMatrix:
    """One row per positive root ``a``: ``sum_i f_i(x_a) eps_i a_i``, ``x_a = -(lam,a)/(mu,a)``."""
    _require_generic(rs, mu, lam)
    eps = rs.epsilon
    ncols = rs.rank * (rs.h - 1)
    m = RationalMatrix(rs.N, ncols)
    for row, (alpha, x) in enumerate(zip(rs.positive_roots, eigen_ratios(rs, mu, lam))):
        for i in range(rs.rank):
            ai = alpha.coords[i]
            if not ai:
                continue
            p = Fraction(1)
            for k in range(rs.h - 1):
                v = p * eps[i] * ai
                if v:
                    m.rows[row][coefficient_index(rs, i, k)] = v
                p *= x
    return m


def w_lambda_operator_matrix(na: NilpotentAlgebra, mu: Weight, lam: Weight) -> RationalMatrix:
    """Columns ``L_lam^k F_i``: the map ``f -> sum_i f_i(L_lam) F_i``."""
    rs = na.rs
    _require_generic(rs, mu, lam)
    op = L_operator(na, mu, lam)
    cols: list[Vector] = [dict() for _ in range(rs.rank * (rs.h - 1))]
    for i in range(rs.rank):
        v: Vector = {na.simple_index(i): Fraction(1)}
        for k in range(rs.h - 1):
            cols[coefficient_index(rs, i, k)] = v
            v = op.apply(v)
    return RationalMatrix.from_columns(rs.N, cols)


def _flatten(rs: RootSystem, f: Sequence[Sequence]) -> Vector:
    if len(f) != rs.rank:
        raise ValueError(f"need {rs.rank} polynomials")
    out: Vector = {}
    for i, poly in enumerate(f):
        if len(poly) > rs.h - 1:
            raise ValueError(f"f_{i + 1} has degree above {rs.h - 2}")
        for k, c in enumerate(poly):
            if c:
                out[coefficient_index(rs, i, k)] = Fraction(c)
    return out


def w_lambda_eval(rs: RootSystem, mu: Weight, lam: Weight, f: Sequence[Sequence]) -> bool:
    """True iff every root condition vanishes; ``f[i]`` lists coefficients, constant first."""
    return not w_lambda_matrix(rs, mu, lam).apply(_flatten(rs, f))


def w_lambda_operator_eval(na: NilpotentAlgebra, mu: Weight, lam: Weight, f: Sequence[Sequence]) -> bool:
    return not w_lambda_operator_matrix(na, mu, lam).apply(_flatten(na.rs, f))


def w_lambda_solutions(m: RationalMatrix) -> Subspace:
    return Subspace.span(rref(m).nullspace, m.ncols)
