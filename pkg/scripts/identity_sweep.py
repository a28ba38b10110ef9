"""Sweep every registered identity over random descriptors and tally the residuals.

    python3 scripts/identity_sweep.py --d-max 3 --n-max 6 --seeds 5
"""
import argparse
import collections
import random
import time

from dops.checks import CHECKS, run_check
from dops.cli import horizon_for
from dops.core import random_coeffs


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d-max", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=6)
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()
    tally = collections.Counter()
    bad = collections.Counter()
    t0 = time.perf_counter()
    for name in sorted(CHECKS):
        for d in range(1, args.d_max + 1):
            if name in ("cd_product", "cd_sum") and d != 2:
                continue
            for n in range(args.n_max + 1):
                for seed in range(args.seeds):
                    rng = random.Random(seed)
                    c = random_coeffs(d, horizon_for(d, n), rng)
                    for rec in run_check(name, c, n, rng):
                        tally[name] += 1
                        bad[name] += not rec["residual_is_zero"]
    for name in sorted(tally):
        print(f"{name:20s} {tally[name]:6d} cases  {bad[name]:4d} nonzero")
    print(f"total {sum(tally.values())} cases, {sum(bad.values())} nonzero, {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
