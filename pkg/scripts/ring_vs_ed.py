"""Ring Bethe energy for given quantum numbers against an ED cutoff sweep."""

import argparse
import csv
import sys

import numpy as np

from nnlse.bethe import solve_ring_bethe
from nnlse.spectra import convergence_sweep, richardson_inverse


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--coupling", type=float, default=1.0)
    ap.add_argument("--length", type=float, default=2 * np.pi)
    ap.add_argument("--quantum-numbers", default="0,1")
    ap.add_argument("--cutoffs", default="8,16,32,64,128")
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    qn = [int(s) for s in args.quantum_numbers.split(",")]
    cutoffs = [int(s) for s in args.cutoffs.split(",")]
    st = solve_ring_bethe(len(qn), args.length, args.coupling, qn)
    block = round(st.momentum * args.length / (2 * np.pi))
    sweep = convergence_sweep(len(qn), args.coupling, cutoffs, args.length, block, 1)
    energies = [e[0] for _, e in sweep]

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh)
    w.writerow(["M", "energy_ed", "energy_bethe", "relative_gap"])
    for m, e in zip(cutoffs, energies):
        w.writerow([m, f"{e:.12g}", f"{st.energy:.12g}", f"{(e - st.energy) / abs(st.energy):.6g}"])
    if len(cutoffs) > 1:
        w.writerow(["inf", f"{richardson_inverse(cutoffs, energies):.12g}", f"{st.energy:.12g}", ""])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
