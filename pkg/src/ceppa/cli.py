"""Command-line interface: ``ceppa roots|build|verify|trace|membership``.

Exit codes: 0 success, 1 a check failed or oracles disagree, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from ceppa import __version__
from ceppa.errors import BudgetExceeded, CeppaError, IrregularWeight, RankMismatch, UnsupportedType
from ceppa.gradealg import (
    build_graded,
    check_budget,
    default_budget,
    parse_presentation,
    preprojective_presentation,
    b_presentation,
    socle_degree,
)
from ceppa.lietheory import build_nilpotent, count_paths, membership, membership_lie, path_trace, t_matrices
from ceppa.report import jsonable
from ceppa.rootsys import build_cartan, build_root_system, parse_weight, root_counts
from ceppa.traceform import build_algebra, e_membership_bruteforce, sample_mu, trace_functional
from ceppa.verify import SUITES, run_verification

log = logging.getLogger("ceppa")


class UsageError(Exception):
    pass


def _fmt(values) -> str:
    return ",".join(str(v) for v in values)


def _root_system(args):
    try:
        return build_root_system(build_cartan(args.type, args.rank))
    except UnsupportedType as exc:
        raise UsageError(str(exc)) from exc


def _mu(args, rs, build: bool = False):
    """Parse ``--mu``; ``random`` draws a seeded weight (with trace uniqueness when ``build``)."""
    if args.mu == "random":
        try:
            sampled = sample_mu(rs.datum, args.seed, build=build, budget=args.budget)
        except BudgetExceeded:
            sampled = sample_mu(rs.datum, args.seed, build=False)
        return sampled.mu, sampled.algebra
    try:
        mu = parse_weight(args.mu, rs.rank)
    except (RankMismatch, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --mu: {exc}") from exc
    return mu, None


def _emit(args, payload: dict, lines: Sequence[str]) -> None:
    if getattr(args, "json", None):
        text = json.dumps(jsonable(payload), indent=2) + "\n"
        if args.json == "-":
            sys.stdout.write(text)
        else:
            Path(args.json).write_text(text)
            sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


# subcommands -------------------------------------------------------------------


def cmd_roots(args) -> int:
    rs = _root_system(args)
    n_p, nprime = root_counts(rs, nodal=rs.nodal_vertex is not None)
    payload = {
        "schema": 1,
        "type": {"family": rs.datum.family, "rank": rs.rank},
        "h": rs.h,
        "N": rs.N,
        "exponents": list(rs.exponents),
        "epsilon": list(rs.epsilon),
        "edges": [[i + 1, j + 1] for i, j in rs.datum.edges],
        "nodal_vertex": None if rs.nodal_vertex is None else rs.nodal_vertex + 1,
        "legs": None if rs.legs is None else list(rs.legs),
        "N_p": n_p,
        "N_prime_p": nprime,
        "roots": [{"height": a.height, "coords": list(a.coords)} for a in rs.positive_roots],
    }
    lines = [
        f"# type\t{rs.datum.name}",
        f"# h\t{rs.h}",
        f"# N\t{rs.N}",
        f"# exponents\t{_fmt(rs.exponents)}",
        f"# epsilon\t{_fmt(rs.epsilon)}",
        f"# N_p\t{_fmt(n_p)}",
    ]
    if nprime is not None:
        lines.append(f"# nodal_vertex\t{rs.nodal_vertex + 1}")
        lines.append(f"# legs\t{_fmt(rs.legs)}")
        lines.append(f"# N'_p\t{_fmt(nprime)}")
    lines.append("height\troot")
    lines += [f"{a.height}\t{_fmt(a.coords)}" for a in rs.positive_roots]
    _emit(args, payload, lines)
    return 0


def cmd_build(args) -> int:
    if args.presentation_file:
        try:
            p = parse_presentation(Path(args.presentation_file).read_text())
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read presentation: {exc}") from exc
        if args.max_degree is None:
            raise UsageError("--max-degree is required with --presentation-file")
        max_degree = args.max_degree
    else:
        if not args.type or not args.rank:
            raise UsageError("give --type and --rank, or --presentation-file")
        rs = _root_system(args)
        if args.algebra == "B":
            if rs.legs is None:
                raise UsageError(f"{rs.datum.name} has no nodal vertex")
            p = b_presentation(rs.legs, eliminate=args.eliminate)
        else:
            mu, _ = _mu(args, rs) if args.algebra == "A" else (None, None)
            try:
                p = preprojective_presentation(rs.datum, mu, include_z=args.algebra == "A")
            except IrregularWeight as exc:
                raise UsageError(str(exc)) from exc
        max_degree = socle_degree(rs.h) + 2 if args.max_degree is None else args.max_degree
    if args.dump_presentation:
        sys.stdout.write(p.to_text())
        return 0
    counts = check_budget(p, max_degree, args.budget)
    gq = build_graded(p, max_degree, budget=args.budget, method=args.method)
    table = gq.dimension_table()
    payload = {
        "schema": 1,
        "presentation": p.name,
        "max_degree": max_degree,
        "method": gq.method,
        "free_monomials": counts,
        "dims": gq.dims(),
        "total": gq.total_dim,
        "table": [
            {"tail": t + 1, "head": h + 1, "degree": d, "dim": v} for (t, h, d), v in sorted(table.items()) if v
        ],
        "basis": [[p.format_monomial(m) for m in b] for b in gq.basis] if args.basis else None,
    }
    lines = [f"# presentation\t{p.name}", f"# total\t{gq.total_dim}", "degree\tfree_monomials\tdim"]
    lines += [f"{d}\t{c}\t{v}" for d, (c, v) in enumerate(zip(counts, gq.dims()))]
    if args.basis:
        for d, b in enumerate(gq.basis):
            for m in b:
                lines.append(f"basis\t{d}\t{p.vertices[m.head]}<-{p.vertices[m.tail]}\t{p.format_monomial(m)}")
    _emit(args, payload, lines)
    return 0


def cmd_verify(args) -> int:
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    rs = _root_system(args)
    if args.mu != "random":
        _mu(args, rs)  # validate before any work
    try:
        report = run_verification(rs.datum.family, rs.rank, args.mu, suites, args.seed, args.budget)
    except IrregularWeight as exc:
        raise UsageError(str(exc)) from exc
    lines = [f"# {report.family}{report.rank} mu={_fmt(report.mu['value'])} suites={','.join(suites)}"]
    for c in report.checks:
        extra = f"\t{c.reason}" if c.reason else ""
        lines.append(f"{c.status.upper()}\t{c.suite}\t{c.name}\t{c.runtime:.3f}s{extra}")
    lines.append(
        f"# verdict {report.verdict}: {len(report.checks) - len(report.failures) - len(report.skipped)} pass, "
        f"{len(report.failures)} fail, {len(report.skipped)} skipped"
    )
    if args.json:
        text = report.to_json()
        if args.json == "-":
            sys.stdout.write(text)
        else:
            Path(args.json).write_text(text)
            sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    return 1 if report.failures else 0


def cmd_trace(args) -> int:
    rs = _root_system(args)
    mu, gq = _mu(args, rs, build=True)
    paths = [rs.epsilon[i] * path_trace(rs, mu, i) for i in range(rs.rank)]
    counts = [count_paths(rs, i) for i in range(rs.rank)]
    algebra: Optional[list[Fraction]] = None
    note = ""
    try:
        gq = build_algebra(rs.datum, mu, budget=args.budget) if gq is None else gq
        algebra = list(trace_functional(gq).values)
    except BudgetExceeded as exc:
        note = f"algebra side skipped: {exc}"
    agree = algebra is None or algebra == paths
    payload = {
        "schema": 1,
        "type": {"family": rs.datum.family, "rank": rs.rank},
        "mu": list(mu.coords),
        "epsilon": list(rs.epsilon),
        "path_counts": counts,
        "path_side": paths,
        "algebra_side": algebra,
        "note": note,
        "agree": agree,
    }
    lines = [f"# {rs.datum.name} mu={_fmt(mu.coords)}", "vertex\teps\tn_i\tpath_side\talgebra_side"]
    for i in range(rs.rank):
        alg = "-" if algebra is None else str(algebra[i])
        lines.append(f"{i + 1}\t{rs.epsilon[i]}\t{counts[i]}\t{paths[i]}\t{alg}")
    if note:
        lines.append(f"# {note}")
    lines.append(f"# {'agree' if agree else 'DISAGREE'}")
    _emit(args, payload, lines)
    return 0 if agree else 1


def cmd_membership(args) -> int:
    rs = _root_system(args)
    mu, gq = _mu(args, rs, build=True)
    try:
        phi = [Fraction(x.strip()) for x in args.phi.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --phi: {exc}") from exc
    if len(phi) != rs.rank:
        raise UsageError(f"--phi needs {rs.rank} coordinates")
    if args.s < 0:
        raise UsageError("--s must be nonnegative")
    verdicts: dict[str, Optional[bool]] = {
        "t_chain": membership(rs, mu, phi, args.s, t_matrices(rs, mu)),
        "lie": membership_lie(build_nilpotent(rs), mu, phi, args.s),
    }
    note = ""
    if 2 * args.s <= socle_degree(rs.h):
        try:
            gq = build_algebra(rs.datum, mu, budget=args.budget) if gq is None else gq
            kernel = e_membership_bruteforce(gq, args.s)
            verdicts["bruteforce"] = {i: x for i, x in enumerate(phi) if x} in kernel
        except BudgetExceeded as exc:
            note = f"bruteforce skipped: {exc}"
    else:
        # z^s vanishes above the socle, so every phi is a member
        verdicts["bruteforce"] = True
    values = {v for v in verdicts.values() if v is not None}
    agree = len(values) == 1
    payload = {
        "schema": 1,
        "type": {"family": rs.datum.family, "rank": rs.rank},
        "mu": list(mu.coords),
        "phi": phi,
        "s": args.s,
        "verdicts": verdicts,
        "in_commutator": values.pop() if agree else None,
        "agree": agree,
        "note": note,
    }
    lines = [f"# {rs.datum.name} mu={_fmt(mu.coords)} phi={_fmt(phi)} s={args.s}"]
    lines += [f"{k}\t{'in [A,A]' if v else 'not in [A,A]'}" for k, v in verdicts.items()]
    if note:
        lines.append(f"# {note}")
    lines.append(f"# {'agree' if agree else 'DISAGREE'}")
    _emit(args, payload, lines)
    return 0 if agree else 1


# parser ----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse already exits 2; keep the message short
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _type_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--type", required=required, type=str.upper, choices=["A", "D", "E"], help="Dynkin family")
    p.add_argument("--rank", required=required, type=int, help="rank r")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mu", default="rho", help='"rho", "random", or comma-separated rationals like 3/2,1,5')
    p.add_argument("--seed", type=int, default=0, help="seed for random weights (default 0)")
    p.add_argument("--budget", type=int, default=None,
                   help="free-monomial budget per degree (default $CEPPA_BUDGET or 2000000)")
    p.add_argument("--json", metavar="PATH", help="write JSON here ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ceppa", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ceppa {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("roots", help="roots by height, h, N, exponents, N_p, N'_p")
    _type_flags(p)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("build", help="build a graded quotient and print its dimensions")
    _type_flags(p, required=False)
    _common(p)
    p.add_argument("--algebra", choices=["A", "A0", "B"], default="A")
    p.add_argument("--eliminate", action="store_true", help="for B: substitute U3 = z - U1 - U2")
    p.add_argument("--presentation-file", metavar="PATH")
    p.add_argument("--max-degree", type=int)
    p.add_argument("--method", choices=["recursive", "free"], default="recursive")
    p.add_argument("--basis", action="store_true", help="list canonical basis monomials")
    p.add_argument("--dump-presentation", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="run theorem checks and report pass/fail")
    _type_flags(p)
    _common(p)
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trace", help="trace vector from the algebra and from root chains")
    _type_flags(p)
    _common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("membership", help="is z^s sum eps_i phi_i e_i a commutator?")
    _type_flags(p)
    _common(p)
    p.add_argument("--phi", required=True)
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(func=cmd_membership)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s"
    )
    if getattr(args, "budget", None) is None and hasattr(args, "budget"):
        args.budget = default_budget()
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"ceppa: {exc}\n")
        return 2
    except BudgetExceeded as exc:
        sys.stderr.write(f"ceppa: {exc}\n")
        return 1
    except CeppaError as exc:
        sys.stderr.write(f"ceppa: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
