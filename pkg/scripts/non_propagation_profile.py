"""Static bound against the offset n0 for energy bumps across the two-limit line.

Bumps closer to the band edge at 2 decay more slowly. One eigendecomposition
is shared by all bumps. The CSV has one column per bump; the JSON next to
it lists the offset picked at each ``eps``.
"""

import argparse
import csv
import json
from pathlib import Path

from groupoid_spectra import models as M
from groupoid_spectra.propagation import EnergyBump, bound_profile, eigensystem, find_neighborhood


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--window", type=int, default=1000)
    ap.add_argument("--v-plus", type=float, default=4.0)
    ap.add_argument("--bumps", nargs="+", default=["-1.5:1.5", "-1.5:1.8", "-1.5:1.95"],
                    help="energy intervals a:b below the right-hand band")
    ap.add_argument("--eps", type=float, nargs="+", default=[0.1, 0.05, 0.01, 1e-4])
    ap.add_argument("--max-n0", type=int, default=80)
    ap.add_argument("--out", type=Path, default=Path("non_propagation_profile.csv"))
    args = ap.parse_args()

    model = M.two_limit_line(0.0, args.v_plus)
    eig = eigensystem(model.operator(args.window))
    offsets = range(0, args.max_n0 + 1)
    columns, picks = {}, {}
    for spec in args.bumps:
        a, b = map(float, spec.split(":"))
        kappa = EnergyBump(a, b)
        columns[spec] = [bnd for _, bnd in bound_profile(model, kappa, "+", args.window, offsets, eig=eig)]
        picks[spec] = {}
        for eps in args.eps:
            res = find_neighborhood(model, kappa, eps, "+", args.window, eig=eig)
            picks[spec][str(eps)] = {"status": res.status, "n0": res.window.n0 if res.ok else None,
                                     "bound": res.bound}

    with open(args.out, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["n0", *columns])
        for i, n0 in enumerate(offsets):
            wr.writerow([n0, *(col[i] for col in columns.values())])
    Path(str(args.out) + ".json").write_text(json.dumps(picks, indent=2, sort_keys=True))
    print(json.dumps(picks, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
