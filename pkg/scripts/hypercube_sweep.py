"""Verify the projected hypercube frameworks for a range of dimensions.

    python3 scripts/hypercube_sweep.py --d-max 6 --budget 2000 --json sweep.json
"""

import argparse
import json
from dataclasses import asdict

from rigidparts.hypercube import verify_counterexample


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d-min", type=int, default=2)
    ap.add_argument("--d-max", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--budget", type=int, default=5000, help="random subsets checked when d > 3")
    ap.add_argument("--json", help="write the full reports here")
    args = ap.parse_args()

    reports = []
    print(f"{'d':>3} {'n':>6} {'m':>7} {'subsets':>8} {'exhaustive':>10} {'conics':>8} {'seconds':>8}")
    for d in range(args.d_min, args.d_max + 1):
        rep = verify_counterexample(d, seed=args.seed, subset_budget=args.budget)
        reports.append(asdict(rep))
        print(
            f"{d:>3} {rep.n:>6} {rep.m:>7} {rep.sweep.checked:>8} {str(rep.sweep.exhaustive):>10} "
            f"{rep.conic_sextuples_tested:>8} {rep.seconds:>8.2f}"
        )
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=1)


if __name__ == "__main__":
    main()
