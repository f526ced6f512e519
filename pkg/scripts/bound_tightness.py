"""Measured error over bound for R_m, S_m and the encode/decode pipeline, as plot-ready CSV.

    python3 scripts/bound_tightness.py --dim 2 --alpha 1.0 --max-level 5 > tightness.csv
"""

import argparse
import sys

from faberapprox.suites import SuiteConfig, run_suite, to_csv


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--max-level", type=int, default=5)
    p.add_argument("--functions", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    reports = []
    for m in range(1, args.max_level + 1):
        cfg = SuiteConfig(dim=args.dim, alpha=args.alpha, m=m, seed=args.seed, functions=args.functions)
        reports += [r for r in run_suite("lemma22", cfg) if r.check.startswith("sup")]
        reports += run_suite("covering", cfg)
    for m, n in [(1, 2), (1, 3), (2, 3), (2, 4)]:
        cfg = SuiteConfig(dim=args.dim, alpha=args.alpha, m=m, n=n, seed=args.seed, functions=args.functions)
        reports += [r for r in run_suite("pipeline", cfg) if r.check.startswith("sup")]
    sys.stdout.write(to_csv(reports))
    return 1 if any(r.violation for r in reports) else 0


if __name__ == "__main__":
    sys.exit(main())
