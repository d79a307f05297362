"""Certify the closed-form maxima against the numerical maximizer.

Runs both state families over N and a uniform alpha grid and prints the
largest gap between the numerical and analytic maxima per N.

    python scripts/certify_bounds.py --n-min 3 --n-max 10 --points 25
"""
import argparse
import time

import numpy as np

from svetbound import bounds, maximizer, states


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--n-min", type=int, default=3)
    parser.add_argument("--n-max", type=int, default=10)
    parser.add_argument("--points", type=int, default=25)
    parser.add_argument("--restarts", type=int, default=64)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--family", choices=["gghz", "ms", "both"], default="both")
    args = parser.parse_args()

    cfg = maximizer.OptimizerConfig(restarts=args.restarts, seed=args.seed)
    families = ["gghz", "ms"] if args.family == "both" else [args.family]
    alphas = np.linspace(0, np.pi / 2, args.points)
    for family in families:
        for n in range(args.n_min, args.n_max + 1):
            start = time.time()
            worst_gap, worst_excess = 0.0, -np.inf
            for alpha in alphas:
                if family == "gghz":
                    state, bound = states.gghz(n, alpha), bounds.gghz_bound_alpha(n, alpha)
                else:
                    state, bound = states.ms(n, alpha), bounds.ms_bound(n, alpha)
                value = maximizer.maximize_both(state, cfg).best_value
                worst_gap = max(worst_gap, abs(value - bound))
                worst_excess = max(worst_excess, value - bound)
            print(f"{family:5s} N={n:2d}  max|numeric-analytic|={worst_gap:.2e}  "
                  f"max excess={worst_excess:+.2e}  {time.time() - start:6.1f}s", flush=True)


if __name__ == "__main__":
    main()
