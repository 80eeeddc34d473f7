"""Write the CSV data behind every figure sweep into one directory."""

import argparse
import pathlib

from wifipricing import sweeps


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="figures", help="output directory")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--figures", nargs="*", default=sorted(sweeps.FIGURES))
    args = parser.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for fig in args.figures:
        header, rows = sweeps.run_sweep(fig, workers=args.workers)
        path = out / f"{fig}.csv"
        path.write_text(sweeps.to_csv(header, rows), encoding="utf-8")
        print(f"{fig}: {len(rows)} rows -> {path}")


if __name__ == "__main__":
    main()
