import math
import random
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ceppa.errors import InconsistentScaling, IrregularWeight, NonGenericLambda
from ceppa.exactlin import RationalMatrix, Subspace, rref
from ceppa.lietheory import (
    L_operator,
    asymmetry,
    build_nilpotent,
    count_paths,
    eigen_ratios,
    height_blocks,
    is_generic_lambda,
    lie_kernel,
    lusztig_rescale,
    membership,
    membership_lie,
    path_trace,
    random_generic_lambda,
    rho_path_trace,
    t_kernel,
    t_matrices,
    w_lambda_eval,
    w_lambda_matrix,
    w_lambda_operator_eval,
    w_lambda_operator_matrix,
    w_lambda_solutions,
)
from ceppa.rootsys import SUPPORTED_TYPES, Weight, inner, rho, root_counts, root_system

ALL = [pytest.param(f, n, id=f"{f}{n}") for f, n in SUPPORTED_TYPES]


@lru_cache(maxsize=None)
def nil(family, rank):
    return build_nilpotent(root_system(family, rank))


def enumerate_chains(rs, i):
    """Every chain a_i = b_1 < ... < b_{h-1} = theta adding one simple root per step."""
    out = []

    def walk(chain):
        last = chain[-1]
        if last == rs.theta:
            out.append(list(chain))
            return
        for j in range(rs.rank):
            nxt = last + rs.simple(j)
            if rs.is_root(nxt):
                walk(chain + [nxt])

    walk([rs.simple(i)])
    return out


@pytest.mark.parametrize("family,rank", [("A", 2), ("A", 4), ("D", 4), ("D", 5), ("E", 6)])
def test_path_trace_brute_force(family, rank):
    rs = root_system(family, rank)
    mu = Weight(tuple(Fraction(2 ** k + k) for k in range(rank)))
    for i in range(rank):
        chains = enumerate_chains(rs, i)
        assert count_paths(rs, i) == len(chains)
        total = sum(math.prod((Fraction(1) / inner(mu, b) for b in ch[:-1]), start=Fraction(1)) for ch in chains)
        assert path_trace(rs, mu, i) == total
        assert rho_path_trace(rs, i) == Fraction(len(chains), math.factorial(rs.h - 2))
        assert path_trace(rs, rho(rank), i) == rho_path_trace(rs, i)


@pytest.mark.parametrize("n", range(1, 7))
def test_bracket_support_matches_matrix_realization(n):
    """For sl_{n+1}, F for the root a_i + ... + a_{j-1} is the unit matrix E_{j,i}."""
    rs = root_system("A", n)
    na = nil("A", n)

    def span(a):
        idx = [k for k, c in enumerate(a.coords) if c]
        return idx[0], idx[-1] + 1

    def mat(a):
        i, j = span(a)
        return (j, i)

    for x, a in enumerate(rs.positive_roots):
        for y, b in enumerate(rs.positive_roots):
            (j, i), (l, k) = mat(a), mat(b)
            # [E_ji, E_lk] = d_il E_jk - d_kj E_li
            nonzero = (i == l) != (k == j)
            assert bool(na.bracket_basis(x, y)) == nonzero


@pytest.mark.parametrize("family,rank", ALL)
def test_lower_central_series(family, rank):
    """The k-th term of the lower central series is spanned by roots of height > k."""
    rs = root_system(family, rank)
    na = nil(family, rank)
    term = Subspace.full(rs.N)
    gens = [{na.simple_index(i): Fraction(1)} for i in range(rank)]
    for k in range(1, rs.h):
        expected = sum(1 for a in rs.positive_roots if a.height >= k)
        assert term.dim == expected
        term = Subspace.span([na.bracket(g, dict(v)) for g in gens for v in term.rows], rs.N)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SUPPORTED_TYPES[:12]), st.randoms(use_true_random=False))
def test_jacobi_on_random_vectors(typ, rnd):
    na = nil(*typ)
    n = na.dim

    def vec():
        return {k: Fraction(rnd.randint(-3, 3)) for k in rnd.sample(range(n), min(n, 4))}

    x, y, z = vec(), vec(), vec()
    total = {}
    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
        for key, v in na.bracket(na.bracket(a, b), c).items():
            total[key] = total.get(key, 0) + v
    assert not any(total.values())


def test_asymmetry_values():
    rs = root_system("A", 3)
    a1, a2, a3 = (rs.simple(i) for i in range(3))
    assert asymmetry(rs, a1, a1) == -1
    assert asymmetry(rs, a1, a2) == -1
    assert asymmetry(rs, a2, a1) == 1
    assert asymmetry(rs, a1, a3) == 1


@pytest.mark.parametrize("family,rank", ALL)
def test_lusztig_blocks_are_minus_t(family, rank):
    rs = root_system(family, rank)
    na = nil(family, rank)
    mu = Weight(tuple(Fraction(k * k + 1) for k in range(rank)))
    scale = lusztig_rescale(na)
    hs = t_matrices(rs, mu)
    op = L_operator(na, mu, scaling=scale)
    for k in range(1, rs.h - 1):
        assert height_blocks(rs, op, k) == hs.T[k].scale(-1)


def test_lusztig_rejects_bad_epsilon():
    with pytest.raises(InconsistentScaling):
        lusztig_rescale(nil("A", 3), epsilon=(1, 1, 1))


def test_l_operator_a2_example():
    rs = root_system("A", 2)
    na = nil("A", 2)
    mu = Weight((1, 2))
    op = L_operator(na, mu)
    a1, a2 = na.simple_index(0), na.simple_index(1)
    theta = rs.index(rs.theta)
    # L F_1 = -1/(mu, a1) * eps_1 [F_1, F_1] + ... only the simple F_2 contributes
    assert op.rows[theta][a1] == Fraction(-1, 1) * rs.epsilon[1] * na.c(a2, a1)
    assert op.rows[theta][a2] == Fraction(-1, 2) * rs.epsilon[0] * na.c(a1, a2)
    assert not op.rows[a1] and not op.rows[a2]


@pytest.mark.parametrize("family,rank", [("A", 3), ("D", 4), ("E", 6)])
def test_l_lambda_diagonal_and_triangular(family, rank):
    rs = root_system(family, rank)
    na = nil(family, rank)
    mu = rho(rank)
    lam = Weight(tuple(Fraction(3 * k + 2) for k in range(rank)))
    op = L_operator(na, mu, lam)
    for a, alpha in enumerate(rs.positive_roots):
        assert op[(a, a)] == -inner(lam, alpha) / inner(mu, alpha)
        for b, v in op.rows[a].items():
            if b != a:
                assert rs.positive_roots[a].height == rs.positive_roots[b].height + 1


def test_irregular_mu():
    with pytest.raises(IrregularWeight):
        L_operator(nil("A", 2), Weight((1, -1)))
    with pytest.raises(IrregularWeight):
        t_matrices(root_system("A", 2), Weight((1, -1)))


@pytest.mark.parametrize("family,rank", ALL)
def test_t_kernel_equals_lie_kernel(family, rank):
    rs = root_system(family, rank)
    na = nil(family, rank)
    mu = Weight(tuple(Fraction(2 * k + 1, k + 1) for k in range(rank)))
    hs = t_matrices(rs, mu)
    op = L_operator(na, mu)
    n_p, _ = root_counts(rs)
    for s in range(rs.h):
        assert t_kernel(hs, s) == lie_kernel(na, mu, s, op)
        if s < rs.h - 1:
            # surjectivity: rank of the chain is the number of roots of height s + 1
            assert rref(hs.chain(s), verify=False).rank == n_p[s]


def test_membership_examples():
    rs = root_system("A", 3)
    mu = rho(3)
    # the principal element eps_i mu_i lies in the kernel after one step
    phi = [e * m for e, m in zip(rs.epsilon, mu.coords)]
    assert membership(rs, mu, phi, 1)
    assert not membership(rs, mu, [1, 0, 0], 1)
    assert membership(rs, mu, [1, 0, 0], rs.h - 1)
    assert membership_lie(nil("A", 3), mu, phi, 1)
    with pytest.raises(ValueError):
        membership(rs, mu, [1, 0], 1)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([("A", 3), ("A", 4), ("D", 4), ("D", 5)]), st.lists(st.integers(-4, 4), min_size=5, max_size=5), st.integers(0, 8))
def test_membership_agrees(typ, phi, s):
    rs = root_system(*typ)
    na = nil(*typ)
    mu = rho(rs.rank)
    phi = phi[: rs.rank]
    assert membership(rs, mu, phi, s) == membership_lie(na, mu, phi, s)


def test_eigen_ratios_and_generic():
    rs = root_system("A", 2)
    mu = rho(2)
    assert eigen_ratios(rs, mu, Weight((1, 1))) == [-1, -1, -1]
    assert not is_generic_lambda(rs, mu, Weight((1, 1)))
    assert is_generic_lambda(rs, mu, Weight((1, 3)))
    lam = random_generic_lambda(rs, mu, 5)
    assert lam == random_generic_lambda(rs, mu, 5)
    with pytest.raises(NonGenericLambda):
        w_lambda_matrix(rs, mu, Weight((1, 1)))
    with pytest.raises(NonGenericLambda):
        random_generic_lambda(rs, mu, 0, lo=1, hi=1, tries=5)


@pytest.mark.parametrize("family,rank", [("A", 2), ("A", 3), ("A", 5), ("D", 4), ("D", 5), ("E", 6)])
@pytest.mark.parametrize("seed", [0, 1])
def test_w_lambda_equivalence(family, rank, seed):
    rs = root_system(family, rank)
    na = nil(family, rank)
    mu = Weight(tuple(Fraction(k + 1) for k in range(rank)))
    lam = random_generic_lambda(rs, mu, seed)
    a = w_lambda_solutions(w_lambda_matrix(rs, mu, lam))
    b = w_lambda_solutions(w_lambda_operator_matrix(na, mu, lam))
    assert a == b
    assert a.dim == (rs.h - 1) * rank - rs.N
    rng = random.Random(seed)
    for _ in range(3):
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(a.dim)]
        v = {}
        for c, row in zip(coeffs, a.rows):
            for k, x in row.items():
                v[k] = v.get(k, 0) + c * x
        f = [[v.get(i * (rs.h - 1) + k, 0) for k in range(rs.h - 1)] for i in range(rank)]
        assert w_lambda_eval(rs, mu, lam, f)
        assert w_lambda_operator_eval(na, mu, lam, f)
    f = [[1] + [0] * (rs.h - 2)] + [[0] * (rs.h - 1) for _ in range(rank - 1)]
    assert not w_lambda_eval(rs, mu, lam, f)
    assert not w_lambda_operator_eval(na, mu, lam, f)


def test_w_lambda_rejects_high_degree():
    rs = root_system("A", 2)
    with pytest.raises(ValueError):
        w_lambda_eval(rs, rho(2), Weight((1, 3)), [[0, 0, 1], [0]])


def test_w_lambda_matrix_root_rows():
    rs = root_system("A", 2)
    mu, lam = rho(2), Weight((1, 3))
    m = w_lambda_matrix(rs, mu, lam)
    assert isinstance(m, RationalMatrix)
    # row of the simple root a_1 only involves f_1: eps_1 f_1(x) with x = -1
    row = m.rows[rs.index(rs.simple(0))]
    assert row == {0: 1, 1: -1}
