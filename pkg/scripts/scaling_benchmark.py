"""Time the density evaluation as the core degree grows, at fixed support.

Example: python3 scripts/scaling_benchmark.py --sizes 6:14 --support 1 --repeats 3
"""

import argparse
import math

import numpy as np

from gcore.cli import bench_case, time_density


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="6:14")
    ap.add_argument("--support", type=int, default=1)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    lo, hi = (int(x) for x in args.sizes.split(":"))
    rng = np.random.default_rng(args.seed)
    prev = None
    print(f"{'n':>3} {'s':>3} {'time_ms':>11} {'ratio':>6} {'t / (n^3 2^n) [ns]':>20}")
    for n in range(lo, hi + 1):
        G, C = bench_case(n, args.support, rng)
        t = time_density(G, C, 0.3 * np.ones(G.modes), args.repeats)
        ratio = t / prev if prev else math.nan
        model = t / max(1, n**3 * 2**n) * 1e9
        print(f"{n:>3} {C.support_size:>3} {t * 1e3:>11.3f} {ratio:>6.2f} {model:>20.3f}")
        prev = t


if __name__ == "__main__":
    main()
