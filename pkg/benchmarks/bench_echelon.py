"""Compiled vs pure-Python echelon kernel on slices recorded from real builds.

    python3 benchmarks/bench_echelon.py [--repeat 3]

Every ``echelon`` call made while building a few algebras is recorded, then
replayed through both kernels; outputs must agree exactly.
"""
import argparse
import time

from ceppa.exactlin import _backend
from ceppa.gradealg import b_presentation, build_graded, preprojective_presentation, socle_degree
from ceppa.rootsys import build_cartan, rho, root_system

CASES = [
    ("A5 free", lambda: (preprojective_presentation(build_cartan("A", 5), rho(5)), "free", "A", 5)),
    ("D5 recursive", lambda: (preprojective_presentation(build_cartan("D", 5), rho(5)), "recursive", "D", 5)),
    ("D6 recursive", lambda: (preprojective_presentation(build_cartan("D", 6), rho(6)), "recursive", "D", 6)),
    ("B(E7) eliminate", lambda: (b_presentation((1, 2, 3), eliminate=True), "recursive", "E", 7)),
]


def record(make):
    p, method, family, rank = make()
    calls = []
    original = _backend.echelon

    def spy(rows, ncols, backend=None):
        rows = [(list(c), list(v)) for c, v in rows]
        calls.append((rows, ncols))
        return original(rows, ncols, backend)

    _backend.echelon = spy
    try:
        build_graded(p, socle_degree(root_system(family, rank).h) + 2, method=method)
    finally:
        _backend.echelon = original
    return calls


def timed(fn, calls, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = [fn(rows, ncols) for rows, ncols in calls]
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    compiled = _backend.compiled_echelon()
    print(f"# default backend: {_backend.BACKEND}")
    print("case\tcalls\trows\tpython_s\tcompiled_s\tspeedup\toverflow_fallbacks")
    for name, make in CASES:
        calls = record(make)
        nrows = sum(len(rows) for rows, _ in calls)
        t_py, out_py = timed(_backend.python_echelon, calls, args.repeat)
        if compiled is None:
            print(f"{name}\t{len(calls)}\t{nrows}\t{t_py:.3f}\t-\t-\t-")
            continue
        overflow = set()

        def safe(rows, ncols):
            try:
                return compiled(rows, ncols)
            except OverflowError:
                overflow.add(id(rows))
                return _backend.python_echelon(rows, ncols)

        t_c, out_c = timed(safe, calls, args.repeat)
        if [[(list(c), list(v)) for c, v in r] for r in out_c] != [[(list(c), list(v)) for c, v in r] for r in out_py]:
            raise SystemExit(f"{name}: kernels disagree")
        print(f"{name}\t{len(calls)}\t{nrows}\t{t_py:.3f}\t{t_c:.3f}\t{t_py / t_c:.1f}x\t{len(overflow)}")


if __name__ == "__main__":
    main()
