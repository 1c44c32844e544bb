"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--sizes 10 12 14] [--repeat 3]

The first numba call (compilation, or loading the on-disk cache) is run
before timing starts.
"""
import argparse
import time
from itertools import combinations

import numpy as np

from matroid_csm import _kernels as K


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def cases(n):
    r = n // 2
    bases = np.array([sum(1 << i for i in c) for c in combinations(range(n), r)][:200], dtype=np.int64)
    ranks = K._rank_from_bases_np(n, bases)
    nv = n // 2 + 2
    edges = [(i % nv, (i * 3 + 1) % nv) for i in range(n)]
    us = np.array([u for u, _ in edges], dtype=np.int64)
    vs = np.array([v for _, v in edges], dtype=np.int64)
    return {
        "rank_from_bases": ((n, bases), K._rank_from_bases_nb, K._rank_from_bases_np),
        "graphic_rank": ((nv, us, vs), K._graphic_rank_nb, K._graphic_rank_np),
        "axiom_check": ((n, ranks), K._axiom_check_nb, K._axiom_check_np),
        "closure_table": ((n, ranks), K._closure_table_nb, K._closure_table_np),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"numba available: {K._HAVE_NUMBA}")
    print(f"{'kernel':<16}{'n':>4}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for n in args.sizes:
        for name, (inputs, nb, npy) in cases(n).items():
            a, b = nb(*inputs), npy(*inputs)
            assert np.array_equal(np.asarray(a), np.asarray(b)), name
            t_nb = best_of(lambda: nb(*inputs), args.repeat)
            t_np = best_of(lambda: npy(*inputs), args.repeat)
            print(f"{name:<16}{n:>4}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
