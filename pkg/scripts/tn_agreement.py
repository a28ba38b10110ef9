"""Constructive total-nonnegativity test against the exhaustive-minor oracle.

    python3 scripts/tn_agreement.py --count 200 --size 6
"""
import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from helpers import banded_matrix  # noqa: E402

from dops.zeros import _det, tn_check  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--size", type=int, default=6)
    args = ap.parse_args()
    agree = tn = 0
    t0 = time.perf_counter()
    for seed in range(args.count):
        rng = random.Random(seed)
        M = banded_matrix(rng, args.size)
        while not _det(M):
            M = banded_matrix(rng, args.size)
        a = bool(tn_check(M, "oracle"))
        b = bool(tn_check(M, "constructive"))
        agree += a == b
        tn += a
    print(f"{agree}/{args.count} agree, {tn} TN, {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
