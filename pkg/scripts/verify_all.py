"""Run every verification suite for n = 1..N and write one JSON report per n."""

import argparse
import sys
import time
from pathlib import Path

from gzsreg.io import dumps
from gzsreg.verify import run_suites


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", default="reports")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for n in range(1, args.max_n + 1):
        start = time.perf_counter()
        reports = run_suites("all", n, args.seed, args.trials)
        (out / f"verify_n{n}.json").write_text(dumps([r.to_json() for r in reports]) + "\n")
        for r in reports:
            failed += r.failed
            print(f"n={n} {r.suite:<9} passed {r.passed:>3} failed {r.failed}")
        print(f"  {time.perf_counter() - start:.1f}s", file=sys.stderr)
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
