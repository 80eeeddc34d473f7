"""Medium-regime bargain as the traveler count shrinks to zero.

Prints the bargained price, share and Nash product for decreasing T at fixed
N, then the largest medium-regime product at T = 0.
"""

import argparse

import numpy as np

from wifipricing import entry


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=float, default=1000.0)
    args = parser.parse_args()

    print("T,p_glob,eta,product,delta_pi_global,delta_pi_local")
    for t in (1200, 400, 100, 10, 1, 0.1, 0.01):
        out = entry.bargain(entry.EntryScenario.from_counts(args.n, t))
        print(f"{t:g},{out.p_glob:.6f},{out.eta:.6f},{out.product:.6g},{out.delta_pi_global:.6g},{out.delta_pi_local:.6g}")

    _, _, eta, product = entry.bargain_profile(entry.EntryScenario.from_counts(args.n, 0.0))
    finite = eta[np.isfinite(eta)]
    print(f"# T=0: max product {product.max():.3g}, min eta over the medium grid {finite.min():.6f}")


if __name__ == "__main__":
    main()
