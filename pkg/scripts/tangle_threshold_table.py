"""Where the GGHZ maximum changes branch, and what it is at tau = 1/2.

Prints one row per N: the crossover tangle, the common branch value there,
the maximum at tau = 1/2 relative to 2^(N-1), and the smallest tau on a
fine grid whose maximum beats 2^(N-1).

    python scripts/tangle_threshold_table.py --n-max 14
"""
import argparse

import numpy as np

from svetbound import bounds


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--n-max", type=int, default=12)
    parser.add_argument("--grid", type=int, default=200_001)
    args = parser.parse_args()

    taus = np.linspace(0, 1, args.grid)
    print("N,crossover_tau,value_at_crossover,max_at_half_over_lhv,first_violating_tau")
    for n in range(3, args.n_max + 1):
        t0 = bounds.tangle_threshold(n)
        lhv = bounds.lhv_bound(n)
        first = next(float(t) for t in taus if bounds.gghz_bound_tangle(n, t) > lhv + 1e-12)
        print(f"{n},{t0!r},{bounds.gghz_bound_tangle(n, t0)!r},{bounds.gghz_bound_tangle(n, 0.5) / lhv!r},{first!r}")


if __name__ == "__main__":
    main()
