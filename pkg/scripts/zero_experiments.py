"""Zeros under positivity, interlacing margins and the nodal count.

Prints, per order d, the smallest relative interlacing gap over seeded
positive-factor instances and how often the nodal lower bound is missed
by random positive recurrences.

    python3 scripts/zero_experiments.py --seeds 50
"""
import argparse
import random

from dops.core import associated, random_coeffs
from dops.darboux import from_positive_factors
from dops.zeros import zero_structure, zeros_of


def min_gap(a, b):
    xs = sorted(a.reals() + b.reals())
    spread = max(xs[-1] - xs[0], 1.0)
    return min(v - u for u, v in zip(xs, xs[1:])) / spread


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--n", type=int, default=12)
    args = ap.parse_args()
    for d in (1, 2, 3):
        worst = 1.0
        for seed in range(args.seeds):
            c = from_positive_factors(d, args.n + 2 * d + 4, random.Random(seed))
            zs = zeros_of(c, args.n)
            worst = min(worst, min_gap(zs, zeros_of(c, args.n - 1)), min_gap(zs, zeros_of(associated(c, 1), args.n - 1)))
        missed = total = 0
        for seed in range(args.seeds):
            c = random_coeffs(d, 20, random.Random(seed), positive=True)
            for n in range(1, 12):
                s = zero_structure(c, n)
                total += 1
                missed += s.nodal_ok is False
        print(f"d={d}: worst relative interlacing gap {worst:.2e}; nodal bound missed {missed}/{total}")


if __name__ == "__main__":
    main()
