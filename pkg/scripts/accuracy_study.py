#!/usr/bin/env python3
"""Sweep expansion orders against the exact oracle and print a decay table.

For each walk/barrier pair, computes E_r(n) = max |exact - series| over the
normal-deviation window x in [0.2, 3] sigma sqrt(n) and reports the
empirical decay exponent between consecutive horizons.  The exponent should
track (r + 2) / 2 whenever the first omitted polynomial is nonzero.

Usage: python scripts/accuracy_study.py [--kmax 4096] [--nmax 1600]
"""

import argparse
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from poswalk import increments  # noqa: E402
from poswalk import oracle as oc  # noqa: E402
from poswalk.constants import compute_constants  # noqa: E402
from poswalk.expansion import expansion_polys  # noqa: E402

WALKS = {
    "lazy-simple": ([-1, 0, 1], ["3/10", "2/5", "3/10"]),
    "skewed": ([-1, 0, 2], ["2/5", "2/5", "1/5"]),
    "deep-down": ([-2, -1, 1], ["1/5", "1/5", "3/5"]),
}


def study(name, dist, barrier, rs, ns, kmax):
    cs = compute_constants(dist, barrier, kmax=kmax, hmax=4, lmax=1)
    rows = oc.killed_rows_at(dist, ns, barrier)
    sigma = dist.sigma()
    for r in rs:
        es = expansion_polys(dist, r, barrier, constants=cs)
        errs = []
        for n in ns:
            lo = max(1, int(0.2 * sigma * math.sqrt(n)))
            hi = int(3.0 * sigma * math.sqrt(n))
            errs.append(max(abs(rows[n].get(x, 0.0) - es.evaluate(n, x))
                            for x in range(lo, hi + 1)))
        expo = [math.log(errs[i] / errs[i + 1], ns[i + 1] / ns[i])
                for i in range(len(errs) - 1)]
        err_str = "  ".join(f"{e:.2e}" for e in errs)
        exp_str = "  ".join(f"{e:.3f}" for e in expo)
        print(f"{name:12s} {barrier:6s} r={r}:  E(n) = {err_str}   exponents {exp_str}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=4096)
    ap.add_argument("--nmax", type=int, default=1600)
    args = ap.parse_args()
    ns = [n for n in (100, 400, 1600, 6400) if n <= args.nmax]
    print(f"# horizons {ns}, constants fitted to kmax={args.kmax}")
    for name, (sup, probs) in WALKS.items():
        dist = increments.validate(sup, probs)
        for barrier in ("strict", "weak"):
            study(name, dist, barrier, (1, 2, 3), ns, args.kmax)


if __name__ == "__main__":
    main()
