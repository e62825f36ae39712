"""Verification suites: every structural check, run on one Dynkin type and weight."""
from __future__ import annotations

import logging
import random
from fractions import Fraction
from typing import Optional

from ceppa.errors import BudgetExceeded, NoNodalVertex
from ceppa.exactlin import rref
from ceppa.gradealg import (
    b_presentation,
    build_graded,
    check_budget,
    commutator_subspace,
    default_budget,
    hilbert_matrix_predicted,
    preprojective_presentation,
    socle_degree,
)
from ceppa.lietheory import (
    L_operator,
    build_nilpotent,
    count_paths,
    height_blocks,
    lie_kernel,
    lusztig_rescale,
    membership,
    path_trace,
    random_generic_lambda,
    rho_path_trace,
    t_kernel,
    t_matrices,
    w_lambda_matrix,
    w_lambda_operator_matrix,
    w_lambda_solutions,
)
from ceppa.report import Recorder, VerificationReport
from ceppa.rootsys import RootSystem, Weight, build_cartan, build_root_system, parse_weight, rho, root_counts
from ceppa.traceform import (
    ad_images,
    b_commutator_dimensions,
    build_algebra,
    complex_homology,
    e_membership_bruteforce,
    graded_trace_data,
    inner_derivation_witness,
    pairing_check,
    sample_mu,
    slice_data,
    trace_functional,
)

log = logging.getLogger(__name__)

SUITES = ("algebra", "lie", "b-algebra")
LAMBDA_SEEDS = 5
E8_JACOBI_SAMPLES = 100_000
# exact Vandermonde-type eliminations grow quickly with h: E7 takes ~20 s per lambda, E8 far longer
W_LAMBDA_MAX_H = 14

ALGEBRA_CHECKS = (
    "hilbert_table", "centrality_of_z", "associativity_sample", "orientation_invariance",
    "trace_unique", "pairing_nondegenerate", "quotient_dims", "center_dims", "dims_equal_N",
    "jordan_center", "jordan_quotient", "palindrome", "even_support", "hilbert_identity",
    "trace_vs_paths", "trace_sigma", "membership_triangle", "surjectivity_algebra",
    "complex_d1d0_and_H1", "complex_H0_center", "complex_H2_quotient", "complex_euler",
    "derivation_witness", "a0_commutator_quotient",
)


def _rows(subspace) -> list:
    return [sorted(r.items()) for r in subspace.rows]


def resolve_mu(rs: RootSystem, spec: str, seed: int, build: bool, budget: Optional[int]):
    """Returns ``(mu, description dict, prebuilt algebra or None)``."""
    if spec == "random":
        try:
            sampled = sample_mu(rs.datum, seed, build=build, budget=budget)
        except BudgetExceeded:
            sampled = sample_mu(rs.datum, seed, build=False)
        return sampled.mu, {
            "spec": "random", "value": list(sampled.mu.coords), "seed": seed, "attempts": sampled.attempts,
        }, sampled.algebra
    mu = parse_weight(spec, rs.rank)
    return mu, {"spec": spec, "value": list(mu.coords)}, None


def algebra_suite(rec: Recorder, rs: RootSystem, mu: Weight, seed: int, budget: Optional[int],
                  gq=None) -> None:
    datum = rs.datum
    top = socle_degree(rs.h)
    r = rs.rank
    try:
        check_budget(preprojective_presentation(datum, mu), top + 2, budget)
    except BudgetExceeded as exc:
        for name in ALGEBRA_CHECKS:
            rec.skip(name, f"BudgetExceeded: {exc}")
        return
    gq = build_algebra(datum, mu, budget=budget) if gq is None else gq
    rng = random.Random(seed)

    def hilbert_table():
        hm = hilbert_matrix_predicted(datum)
        table = gq.dimension_table()
        actual = [[[table[(j, i, d)] for j in range(r)] for i in range(r)] for d in range(top + 3)]
        expected = [[[int(hm.coefficient(d)[i][j]) for j in range(r)] for i in range(r)] for d in range(top + 3)]
        return expected, actual

    rec.run("hilbert_table", hilbert_table)

    def centrality():
        z = gq.generator(gq.presentation.central_index)
        bad = sum(
            bool(gq.commutator(z, gq.basis_element(d, k)))
            for d in range(top - 1) for k in range(gq.dim(d))
        )
        return 0, bad

    rec.run("centrality_of_z", centrality)

    def associativity():
        bad = 0
        for _ in range(300):
            ds = [rng.randrange(top + 1) for _ in range(3)]
            if sum(ds) > gq.max_degree or not all(gq.dim(d) for d in ds):
                continue
            x, y, w = (gq.basis_element(d, rng.randrange(gq.dim(d))) for d in ds)
            bad += (gq.product(gq.product(x, y), w) - gq.product(x, gq.product(y, w))).coeffs != {}
        return 0, bad

    rec.run("associativity_sample", associativity)

    def orientation():
        if not datum.edges:
            return True, True
        flipped = build_algebra(datum, mu, budget=budget, reverse=(0,))
        return True, gq.dimension_table() == flipped.dimension_table()

    rec.run("orientation_invariance", orientation)

    def trace_unique():
        ann = commutator_subspace(gq, top).annihilator()
        return 1, ann.dim

    rec.run("trace_unique", trace_unique)
    state: dict = {}

    def prepare():
        if "data" not in state:
            state["tv"] = trace_functional(gq)
            state["data"] = slice_data(gq, top)
            state["gtd"] = graded_trace_data(gq, state["data"], verify=False)
        return state

    def pairing():
        s = prepare()
        pairing_check(gq, s["tv"], s["data"], seed=seed)
        return True, True

    rec.run("pairing_nondegenerate", pairing)
    n_p, _ = root_counts(rs)
    expected_p = [n_p[d // 2] if d % 2 == 0 else 0 for d in range(top + 1)]
    rec.run("quotient_dims", lambda: (expected_p, prepare()["gtd"].p))
    rec.run("center_dims", lambda: (expected_p[::-1], prepare()["gtd"].p_star))
    rec.run("dims_equal_N", lambda: ([rs.N, rs.N], [sum(prepare()["gtd"].p_star), sum(prepare()["gtd"].p)]))
    rec.run("jordan_center", lambda: (list(rs.exponents), prepare()["gtd"].center_blocks))
    rec.run("jordan_quotient", lambda: (list(rs.exponents), prepare()["gtd"].quotient_blocks))
    rec.run("palindrome", lambda: (prepare()["gtd"].p[::-1], prepare()["gtd"].p_star))
    rec.run("even_support", lambda: (True, prepare()["gtd"].even_support_ok()))
    rec.run("hilbert_identity", lambda: (True, prepare()["gtd"].hilbert_identity_ok()))
    rec.run(
        "trace_vs_paths",
        lambda: ([rs.epsilon[i] * path_trace(rs, mu, i) for i in range(r)], list(prepare()["tv"].values)),
    )
    rec.run(
        "trace_sigma",
        lambda: (Fraction(0), sum((m * t for m, t in zip(mu.coords, prepare()["tv"].values)), Fraction(0))),
    )

    def triangle():
        s_data = prepare()["data"]
        hs = t_matrices(rs, mu)
        na = build_nilpotent(rs)
        op = L_operator(na, mu)
        expected, actual = [], []
        for s in range(rs.h - 1):
            brute = e_membership_bruteforce(gq, s, s_data.commutators[2 * s])
            expected.append([_rows(brute)] * 3)
            actual.append([_rows(brute), _rows(t_kernel(hs, s)), _rows(lie_kernel(na, mu, s, op))])
        return expected, actual

    rec.run("membership_triangle", triangle)

    def surjectivity():
        s_data = prepare()["data"]
        actual = [r - e_membership_bruteforce(gq, s, s_data.commutators[2 * s]).dim for s in range(rs.h - 1)]
        return n_p, actual

    rec.run("surjectivity_algebra", surjectivity)
    cx_state: dict = {}

    def complex_rows():
        if "rows" not in cx_state:
            cx_state["rows"] = complex_homology(gq)
        return cx_state["rows"]

    rec.run("complex_d1d0_and_H1", lambda: ([0] * (top + 3), [c.homology[1] for c in complex_rows()]))
    rec.run(
        "complex_H0_center",
        lambda: ([0, 0] + prepare()["gtd"].p_star, [c.homology[0] for c in complex_rows()]),
    )
    rec.run(
        "complex_H2_quotient",
        lambda: (prepare()["gtd"].p + [0, 0], [c.homology[2] for c in complex_rows()]),
    )
    rec.run(
        "complex_euler",
        lambda: ([c.euler_predicted for c in complex_rows()], [c.euler for c in complex_rows()]),
    )

    def derivation():
        bad = 0
        for d in range(0, top + 1):
            diag = gq.diagonal(d)
            if not diag:
                continue
            x = gq.basis_element(d, rng.choice(diag)) + gq.basis_element(d, rng.choice(diag)).scale(2)
            images = ad_images(gq, x)
            y = inner_derivation_witness(gq, images)
            bad += any((gq.commutator(y, gq.generator(g)) - images[g]).coeffs for g in images)
        return 0, bad

    rec.run("derivation_witness", derivation)

    def a0():
        g0 = build_graded(preprojective_presentation(datum, include_z=False), top + 2, budget=budget)
        actual = [g0.dim(d) - commutator_subspace(g0, d).dim for d in range(top + 3)]
        return [r] + [0] * (top + 2), actual

    rec.run("a0_commutator_quotient", a0)


def lie_suite(rec: Recorder, rs: RootSystem, mu: Weight, seed: int) -> dict:
    samples = E8_JACOBI_SAMPLES if rs.N >= 120 else 0
    state: dict = {}

    def structure():
        state["na"] = build_nilpotent(rs, samples=samples, seed=seed)
        return True, True

    rec.run("nilpotent_structure", structure)
    if "na" not in state:
        return {}
    na = state["na"]

    def lusztig():
        state["scale"] = lusztig_rescale(na)
        return True, True

    rec.run("lusztig_consistency", lusztig)

    def blocks():
        hs = t_matrices(rs, mu)
        op = L_operator(na, mu, scaling=state["scale"])
        bad = [k for k in range(1, rs.h - 1) if height_blocks(rs, op, k) != hs.T[k].scale(-1)]
        return [], bad

    rec.run("L_blocks_equal_minus_T", blocks)
    n_p, _ = root_counts(rs)

    def chain():
        hs = t_matrices(rs, mu)
        return n_p, [rref(hs.chain(s), verify=False).rank for s in range(rs.h - 1)]

    rec.run("surjectivity_chain", chain)
    if mu != rho(rs.rank):
        rec.run(
            "surjectivity_chain_rho",
            lambda: (n_p, [rref(t_matrices(rs, rho(rs.rank)).chain(s), verify=False).rank for s in range(rs.h - 1)]),
        )
    rec.run("path_counts_positive", lambda: (True, all(count_paths(rs, i) >= 1 for i in range(rs.rank))))
    rec.run(
        "rho_path_trace",
        lambda: ([rho_path_trace(rs, i) for i in range(rs.rank)],
                 [path_trace(rs, rho(rs.rank), i) for i in range(rs.rank)]),
    )
    rec.run(
        "principal_in_kernel",
        lambda: (True, membership(rs, mu, [e * m for e, m in zip(rs.epsilon, mu.coords)], 1)),
    )
    lams = {}
    target = (rs.h - 1) * rs.rank - rs.N
    for k in range(LAMBDA_SEEDS):
        lam_seed = seed * 1000 + k
        if rs.h > W_LAMBDA_MAX_H:
            rec.skip(f"w_lambda_equivalence[{lam_seed}]",
                     f"unsupported size: h = {rs.h} exceeds {W_LAMBDA_MAX_H} for exact W(lambda) elimination")
            continue

        def w_lambda(lam_seed=lam_seed):
            lam = random_generic_lambda(rs, mu, lam_seed)
            lams[str(lam_seed)] = list(lam.coords)
            a = w_lambda_solutions(w_lambda_matrix(rs, mu, lam))
            b = w_lambda_solutions(w_lambda_operator_matrix(na, mu, lam))
            return [target, target, True], [a.dim, b.dim, a == b]

        rec.run(f"w_lambda_equivalence[{lam_seed}]", w_lambda)
    return {"seeds": lams}


def b_suite(rec: Recorder, rs: RootSystem, budget: Optional[int]) -> None:
    try:
        _, nprime = root_counts(rs, nodal=True)
    except NoNodalVertex as exc:
        rec.skip("b_commutator_dims", f"NoNodalVertex: {exc}")
        return
    top = socle_degree(rs.h)

    def dims():
        gq = build_graded(b_presentation(rs.legs, eliminate=True), top + 2, budget=budget)
        return nprime + [0], b_commutator_dimensions(gq)

    rec.run("b_commutator_dims", dims)


def run_verification(family: str, rank: int, mu_spec: str = "rho", suites=SUITES, seed: int = 0,
                     budget: Optional[int] = None) -> VerificationReport:
    rs = build_root_system(build_cartan(family, rank))
    budget_value = default_budget() if budget is None else budget
    mu, mu_info, prebuilt = resolve_mu(rs, mu_spec, seed, "algebra" in suites, budget_value)
    report = VerificationReport(family.upper(), rank, mu_info, list(suites), budget_value)
    report.stamp()
    if "algebra" in suites:
        algebra_suite(Recorder(report, "algebra"), rs, mu, seed, budget_value, prebuilt)
    if "lie" in suites:
        report.lam = lie_suite(Recorder(report, "lie"), rs, mu, seed)
    if "b-algebra" in suites:
        b_suite(Recorder(report, "b-algebra"), rs, budget_value)
    return report
