"""Charge drift of the classical nonlocal flow for a displaced Gaussian."""

import argparse
import csv
import sys
import warnings

from nnlse.classical import gaussian, relative_drift, trajectory
from nnlse.lattice import PositionGrid


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--coupling", type=float, default=1.0)
    ap.add_argument("--length", type=float, default=20.0)
    ap.add_argument("--points", type=int, default=512)
    ap.add_argument("--t-final", type=float, default=1.0)
    ap.add_argument("--dts", default="1e-2,5e-3,2e-3,1e-3,1e-4")
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    grid = PositionGrid(args.length, args.points)
    f0 = gaussian(grid, center=1.0, width=1.0, amplitude=0.8, momentum=0.5)
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh)
    w.writerow(["dt", "drift_N", "drift_P", "drift_H"])
    for dt in (float(s) for s in args.dts.split(",")):
        steps = int(round(args.t_final / dt))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            _, hist = trajectory(f0, args.coupling, dt, steps, every=max(1, steps // 20))
        d = relative_drift(hist)
        w.writerow([dt] + [f"{d[k]:.3e}" for k in "NPH"])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
