"""Sample every component of the strongly regular nilfibre for n = 1..N and print a summary table."""

import argparse
import json
import random

from gzsreg.nilfibre import component_census


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="dump full reports instead of the table")
    args = ap.parse_args()

    reports = [component_census(n, args.samples, random.Random(f"{args.seed}:{n}")) for n in range(1, args.max_n + 1)]
    if args.json:
        print(json.dumps([r.to_json() for r in reports], indent=2))
        return
    print(f"{'n':>2} {'components':>10} {'expected':>8} {'failures':>8}  ok")
    for r in reports:
        print(f"{r.n:>2} {r.count:>10} {2 ** r.n:>8} {r.failures:>8}  {r.ok}")
    for r in reports[:2]:
        for c in r.components:
            print(f"\n{c['sequence']}")
            print("\n".join("  " + row for row in c["pattern"]))


if __name__ == "__main__":
    main()
