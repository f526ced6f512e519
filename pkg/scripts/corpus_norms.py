"""Certified norm versus sampled norm estimate for corpus functions, as CSV."""

import argparse
import csv
import sys

from faberapprox.corpus import FAMILIES, FunctionSpec, make_function, norm_estimate


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--trials", type=int, default=10**4)
    args = p.parse_args(argv)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["family", "d", "alpha", "seed", "certified", "estimate"])
    for family in FAMILIES:
        for d in (1, 2, 3):
            for alpha in (0.5, 1.0):
                for seed in range(args.count):
                    f = make_function(FunctionSpec(family, d, alpha, seed))
                    w.writerow([family, d, alpha, seed, repr(f.certified_norm),
                                repr(norm_estimate(f, d, alpha, args.trials, seed))])


if __name__ == "__main__":
    main()
