"""Plateau of the Floquet Gaussian circuit versus system size, with and without disorder."""

import argparse

from krylov_circuits.gaussian import GaussianTask
from krylov_circuits.parallel import map_realizations, summarize


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", default="20,40,60,80,100")
    ap.add_argument("--T", type=int, default=512)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    print(f"{'N':>5} {'homogeneous':>14} {'inhomogeneous':>16}")
    for n in (int(x) for x in args.n.split(",")):
        row = []
        for hom in (True, False):
            s = summarize(map_realizations(GaussianTask(n, args.T, args.seed + n, homogeneous=hom),
                                           args.samples, args.workers))
            row.append(f"{s.c_inf:8.2f}+-{s.c_inf_stderr:.2f}")
        print(f"{n:5d} {row[0]:>14} {row[1]:>16}")


if __name__ == "__main__":
    main()
