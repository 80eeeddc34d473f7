"""How far usage pricing can overtake flat pricing under congestion.

For each elasticity, sweeps the congestion level ``cN / ln(1+k)`` and prints
the optimal usage-over-flat revenue ratio. Also reports the usage revenue at
the single price ``ln2/2`` for k = 1, which reproduces flat pricing once
congestion pushes every subscriber to full usage.
"""

import argparse
import dataclasses

import numpy as np

from wifipricing import congestion
from wifipricing.market import LocalMarket


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=float, default=100.0)
    parser.add_argument("--grid-step", type=float, default=1e-4)
    parser.add_argument("--scaled", nargs="*", type=float, default=[0, 0.5, 1, 2, 5, 10, 20, 40])
    args = parser.parse_args()

    print("k,cN_over_log,ratio,usage_price,theta_th")
    for k in (1.0, 2.0, 5.0):
        base = LocalMarket(args.n, elasticity=k)
        for s in args.scaled:
            m = dataclasses.replace(base, congestion_coeff=s * np.log1p(k) / args.n)
            u = congestion.optimal_congested_usage(m, args.grid_step)
            f = congestion.optimal_congested_flat(m)
            print(f"{k:g},{s:g},{u.revenue / f.revenue:.12f},{u.price:.5f},{u.theta_threshold:.6f}")

    m = LocalMarket(args.n, congestion_coeff=1.0 / args.n)
    p = np.log(2) / 2
    replica = congestion.congested_usage_revenue(p, m)
    print(f"# k=1, cN=1: usage revenue at p=ln2/2 is {replica:.12f}, flat optimum "
          f"{congestion.optimal_congested_flat(m).revenue:.12f}")


if __name__ == "__main__":
    main()
