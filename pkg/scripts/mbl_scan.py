"""Plateau C_inf(h) of MBL Floquet circuits over a coupling grid, for several sizes.

Prints the raw and normalized plateau per h and the half-crossing estimate
of h0 when it exists.
"""

import argparse

from krylov_circuits.config import DEFAULT_H_GRID
from krylov_circuits.errors import EstimationError
from krylov_circuits.spins import scan_mbl_transition


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="5,6")
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    for n in (int(x) for x in args.n.split(",")):
        try:
            scan = scan_mbl_transition(n, DEFAULT_H_GRID, None, args.samples, args.seed + n, args.workers)
            verdict = f"h0 = {scan.h0:.3f}"
        except EstimationError as exc:
            scan, verdict = exc.partial, f"no estimate ({exc})"
        print(f"N={n}: {verdict}")
        for h, c, e in zip(scan.h, scan.c_inf, scan.c_inf_stderr):
            print(f"  h={h:.2f}  C_inf={c:8.3f} +- {e:.3f}  normalized={c / scan.c_inf[-1]:.3f}")


if __name__ == "__main__":
    main()
