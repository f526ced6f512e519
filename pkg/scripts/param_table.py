"""Parameter selection, exact budgets and error bounds for N = 10^e, as CSV."""

import argparse
import csv
import sys

from faberapprox import budget as bud


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--dims", type=int, nargs="+", default=[1, 2, 3])
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--max-exponent", type=int, default=60)
    args = p.parse_args(argv)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["d", "N", "m", "n", "N_mn", "closed_form", "pipeline_bound", "theorem_bound", "above_threshold"])
    for d in args.dims:
        for e in range(3, args.max_exponent + 1):
            N = 10**e
            sel = bud.select_params(N, d)
            if not sel.feasible:
                continue
            b = bud.budget(sel.m, sel.n, d)
            w.writerow([
                d, N, sel.m, sel.n, b.N_mn_bound, b.lemma_bound,
                repr(bud.pipeline_error_bound(args.alpha, d, sel.m, sel.n)),
                repr(bud.theorem_upper_bound(N, d, args.alpha)),
                int(sel.above_threshold),
            ])


if __name__ == "__main__":
    main()
