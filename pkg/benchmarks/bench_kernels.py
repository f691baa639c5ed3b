"""Time the compiled matching kernel against the pure-Python one.

    python3 benchmarks/bench_kernels.py [--sizes 16 20 24] [--repeat 3]
"""

import argparse
import random
import time

from weldlab import _matchings_py

try:
    from weldlab import _matchings
except ImportError:
    _matchings = None


def best_time(fn, n, mask, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(n, mask)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[16, 20, 24])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    rng = random.Random(args.seed)
    print(f"{'segments':>8} {'matchings':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.sizes:
        mask = [rng.random() < 0.3 for _ in range(n)]
        tp, rp = best_time(_matchings_py.enumerate_regular_matchings, n, mask, args.repeat)
        if _matchings is None:
            print(f"{n:>8} {rp[0]:>10} {tp:>10.4f} {'n/a':>10} {'n/a':>8}")
            continue
        tc, rc = best_time(_matchings.enumerate_regular_matchings, n, mask, args.repeat)
        if rc != rp:
            raise SystemExit(f"kernels disagree at n={n}")
        print(f"{n:>8} {rp[0]:>10} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
