"""Compare the centralizer and differential tests for strong regularity on random matrices."""

import argparse
import random
from collections import Counter

from gzsreg.gz import SAMPLE_KINDS, is_sreg_centralizer, is_sreg_differentials, sample_matrix


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[2, 3, 4, 5])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    total_disagree = 0
    for size in args.sizes:
        rng = random.Random(f"{args.seed}:{size}")
        sreg, seen, disagree = Counter(), Counter(), 0
        for _ in range(args.count):
            kind = rng.choice(SAMPLE_KINDS)
            x = sample_matrix(size, rng, kind)
            a = is_sreg_centralizer(x)
            disagree += a != is_sreg_differentials(x)
            seen[kind] += 1
            sreg[kind] += a
        total_disagree += disagree
        mix = ", ".join(f"{k} {sreg[k]}/{seen[k]}" for k in SAMPLE_KINDS)
        print(f"size {size}: disagreements {disagree}; sreg by kind: {mix}")
    raise SystemExit(1 if total_disagree else 0)


if __name__ == "__main__":
    main()
