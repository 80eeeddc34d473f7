"""Run the brute-force certification suite and report per-check margins."""

import argparse
import sys

from wifipricing import certify


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=float, default=1000.0)
    parser.add_argument("--travelers", type=float, default=400.0)
    parser.add_argument("--u-cells", type=int, default=10**5)
    args = parser.parse_args()

    checks = certify.run_checks(args.n, args.travelers, args.u_cells)
    width = max(len(c.name) for c in checks)
    for c in checks:
        status = "pass" if c.passed else "FAIL"
        print(f"{c.name:<{width}}  {status}  error={c.error:.3e}  tol={c.tolerance:.3e}")
    sys.exit(0 if all(c.passed for c in checks) else 3)


if __name__ == "__main__":
    main()
