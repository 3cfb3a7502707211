"""How the periodic box limits the measured Rossby sup-norm decay.

The linear flow from the unit-mass heat kernel is propagated at fixed
resolution dx = L/n on boxes of growing side. The fitted L-infinity slope
over t in [5, 50] should approach the whole-plane prediction once the
dispersed wave train no longer wraps the box.

    python scripts/box_study.py --beta 50 --dx 0.390625 --boxes 100 200 400 800
"""

import argparse
import math

import numpy as np

from betaplane import GridSpec, boundary_mass, fit_decay, gauss_kernel, lebesgue_norm
from betaplane.evolution import linear_trajectory
from betaplane.exponents import predict_rates


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--beta", type=float, default=50.0)
    ap.add_argument("--dx", type=float, default=400 / 1024)
    ap.add_argument("--boxes", type=float, nargs="+", default=[100.0, 200.0, 400.0, 800.0])
    ap.add_argument("--t", type=float, nargs=2, default=[5.0, 50.0])
    args = ap.parse_args(argv)

    ts = np.arange(args.t[0], args.t[1] + 1e-9, 0.5)
    pred = predict_rates(0, math.inf, args.beta)
    print(f"beta={args.beta:g} predicted late slope={pred.late_exponent:.3f}")
    print(f"{'L':>8} {'n':>6} {'slope':>9} {'edge mass t_end':>16}")
    for L in args.boxes:
        n = int(round(L / args.dx))
        n += n % 2
        g = GridSpec(n, L)
        traj = linear_trajectory(gauss_kernel(g, 1.0), args.beta, ts)
        sup = [lebesgue_norm(f, math.inf) for f in traj.snapshots]
        fit = fit_decay(ts, sup, tuple(args.t))
        edge = boundary_mass(traj.snapshots[-1]).fraction
        print(f"{L:8.0f} {n:6d} {fit.slope:9.4f} {edge:16.3e}", flush=True)


if __name__ == "__main__":
    main()
