"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each row runs the same call on both backends, checks the results agree and
reports the best wall time of ``--repeat`` runs.
"""

import argparse
import time

from matroidaut import _kernels
from matroidaut.census import exchange_triggers
from matroidaut.combinatorics import r_subsets
from matroidaut.johnson import johnson_graph


def cases(quick):
    g73 = johnson_graph(7, 3)
    g63 = johnson_graph(6, 3)
    g72 = johnson_graph(7, 2)
    fam = g73.vertices
    trig = exchange_triggers(6, 2 if quick else 3)
    size = len(r_subsets(6, 2 if quick else 3))
    bases = r_subsets(9, 4)
    yield "stable_size_profile J(7,3)", lambda k: k.stable_size_profile(g73.adj, g73.full)
    yield "automorphisms n=7 (5040 found)", lambda k: k.automorphisms(7, fam, 0)
    yield "sparse_census_tally J(6,3)", lambda k: k.sparse_census_tally(6, g63.vertices, g63.adj, 0, g63.full)
    yield "sparse_census_tally J(7,2)", lambda k: k.sparse_census_tally(7, g72.vertices, g72.adj, 0, g72.full)
    if not quick:
        yield "sparse_census_tally J(7,3)", lambda k: k.sparse_census_tally(7, g73.vertices, g73.adj, 0, g73.full)
    yield f"matroid_families (6,{2 if quick else 3})", lambda k: k.matroid_families(size, trig)
    yield "exchange_violation U(4,9)", lambda k: k.exchange_violation(bases)


def _normal(res):
    # Compiled kernels may return lists where the reference returns tuples.
    if isinstance(res, (list, tuple)):
        return [_normal(x) for x in res]
    return res


def best_time(fn, kern, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(kern)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args()
    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels are not built; only the Python timings are shown")
    kernels = {name: _kernels.load_backend(name) for name in backends}
    print(f"{'kernel':34s}" + "".join(f"{name:>12s}" for name in backends) + f"{'speedup':>10s}")
    for label, fn in cases(args.quick):
        times = {}
        results = {}
        for name, kern in kernels.items():
            times[name], res = best_time(fn, kern, args.repeat)
            results[name] = _normal(res)
        values = list(results.values())
        assert all(v == values[0] for v in values), f"backends disagree on {label}"
        row = f"{label:34s}" + "".join(f"{times[name]:11.4f}s" for name in backends)
        if "cython" in times:
            row += f"{times['python'] / max(times['cython'], 1e-9):9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
