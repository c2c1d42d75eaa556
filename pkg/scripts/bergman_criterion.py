#!/usr/bin/env python3
"""Probe the weighted-shift convergence criterion for the Bergman-type
weights w_n = sqrt((n+1)/n) on l^2, at q = 1 and q = 2.

Prints per-series verdicts and the partial-sum estimates for the
converging case.
"""

import argparse

from shiftlab.criterion import qfhc_check
from shiftlab.seqspace import lp
from shiftlab.shiftops import BergmanWeight


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--indices", type=int, default=5,
                        help="number of basis indices to probe")
    parser.add_argument("--p", type=float, default=2.0)
    args = parser.parse_args()

    w = BergmanWeight()
    space = lp(args.p)
    for q in (1, 2):
        rep = qfhc_check(space, w, q, range(1, args.indices + 1))
        print(f"\n=== {rep.operator} on {rep.space}, q={q}: {rep.overall} ===")
        for e in rep.entries:
            extra = ""
            if e.verdict.sum_estimate is not None:
                extra = f"  sum ~ {e.verdict.sum_estimate:.9f}"
            print(f"  {e.label:18s} {e.verdict.kind:12s} [{e.verdict.rule}]{extra}")


if __name__ == "__main__":
    main()
