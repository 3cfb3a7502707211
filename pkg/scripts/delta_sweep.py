"""Exponent verdicts and smallness along the canonical family.

For each delta the canonical tuple is checked and the smallness functional
of a fixed band-limited field is evaluated, so one can read off how small
the data must be as delta varies.

    python scripts/delta_sweep.py --count 11 --beta 10 --n 128 --box 20
"""

import argparse

import numpy as np

from betaplane import GridSpec, check_admissible, smallness_value
from betaplane.exponents import canonical_family
from betaplane.initial import random_band


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--count", type=int, default=11)
    ap.add_argument("--beta", type=float, default=10.0)
    ap.add_argument("--n", type=int, default=128)
    ap.add_argument("--box", type=float, default=20.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    f = random_band(GridSpec(args.n, args.box), seed=args.seed, band=(1, 6))
    print(f"{'delta':>7} {'p':>8} {'wp':>5} {'smooth':>6} {'gate':>5} {'smallness':>11}")
    for d in np.linspace(0, 0.2, args.count):
        A = canonical_family(float(d))
        rep = check_admissible(A)
        s = smallness_value(f, args.beta, float(d))
        print(f"{d:7.4f} {A.p1:8.5f} {rep.thm1_1!s:>5} {rep.thm1_2!s:>6} {rep.thm1_3!s:>5} {s:11.4e}")


if __name__ == "__main__":
    main()
