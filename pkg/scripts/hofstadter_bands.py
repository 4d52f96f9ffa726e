"""Bloch bands of the Harper model for every reduced flux p/q with q up to a bound.

Each row of the output is one band interval; plotting lo..hi against p/q
draws the butterfly at rational fluxes.
"""

import argparse
import csv
from math import gcd
from pathlib import Path

from groupoid_spectra.spectral import magnetic_bloch_range

HOP = {(1, 0): 1.0, (-1, 0): 1.0, (0, 1): 1.0, (0, -1): 1.0}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-q", type=int, default=12)
    ap.add_argument("--grid", type=int, default=16, help="momentum samples per axis")
    ap.add_argument("--out", type=Path, default=Path("hofstadter_bands.csv"))
    args = ap.parse_args()

    with open(args.out, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["p", "q", "flux", "band", "lo", "hi"])
        for q in range(1, args.max_q + 1):
            for p in range(q + 1):
                if gcd(p, q) != 1:
                    continue
                bands = magnetic_bloch_range(HOP, p, q, m=args.grid).meta["bands"]
                for i, (lo, hi) in enumerate(bands):
                    wr.writerow([p, q, p / q, i, lo, hi])
            print(f"q={q} done")


if __name__ == "__main__":
    main()
