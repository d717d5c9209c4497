"""Basis-completion time of monitored brickwork circuits across measurement rates.

For each N and p, prints the mean number of steps until the Krylov basis
spans the full 2^N space, and the ratio to the unmonitored value.
"""

import argparse

import numpy as np

from krylov_circuits.analytics import saturation_time_bound
from krylov_circuits.circuits import RucTask
from krylov_circuits.parallel import map_realizations


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="5,6", help="comma-separated sizes")
    ap.add_argument("--p", default="0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")
    ap.add_argument("--samples", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    for n in (int(x) for x in args.n.split(",")):
        d = 2**n
        print(f"N={n}  D={d}  coupon-collector bound (eps=0.1): {saturation_time_bound(d, 0.1).n}")
        base = None
        for k, p in enumerate(float(x) for x in args.p.split(",")):
            task = RucTask(n, 64 * d, args.seed + 1000 * n + k, p=p)
            times = map_realizations(task.completion_time, args.samples, args.workers)
            if any(t is None for t in times):
                print(f"  p={p:.1f}  not complete within {64 * d} steps")
                continue
            mean = float(np.mean(times))
            base = base or mean
            print(f"  p={p:.1f}  t_complete={mean:8.1f}  ratio={mean / base:5.2f}")


if __name__ == "__main__":
    main()
