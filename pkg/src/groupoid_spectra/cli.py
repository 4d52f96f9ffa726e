"""Command-line front end.

Exit codes: 0 success, 1 model-file error, 2 numeric error (including a
verification suite that did not pass), 3 inconclusive. Reports go to stdout as JSON
with sorted keys and no timing data, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__
from .errors import GroupoidSpectraError, InconclusiveError, ModelFileError, NumericError
from .modelfile import load_model_file, shipped_model_files
from .propagation import (
    EnergyBump,
    bound_profile,
    eigensystem,
    find_neighborhood,
    time_uniform_check,
    write_table,
)
from .spectral import (
    TruncationConfig,
    jsonable,
    essential_numerical_range,
    essential_spectrum_boundary,
    essential_spectrum_truncation,
    fredholm_check,
    hausdorff_distance,
    numerical_range,
    spectrum,
    write_cloud,
)
from .suites import SUITES, run_suite

EXIT_OK, EXIT_SCHEMA, EXIT_NUMERIC, EXIT_INCONCLUSIVE = 0, 1, 2, 3
THREADS_ENV = "GSPEC_THREADS"


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(jsonable(report), indent=2, sort_keys=True) + "\n")


def _grid(spec) -> dict:
    opts = spec.spectral
    return {"symbol": opts.get("symbol_grid", 512), "bloch": opts.get("bloch_grid", 32)}


def _window(spec, arg):
    if arg is not None:
        return arg
    if spec.windows:
        return spec.windows[-1]
    return 0 if spec.model.finite else 500


def cmd_spectrum(args) -> int:
    spec = load_model_file(args.model)
    N = _window(spec, args.window)
    H = spec.model.operator(N)
    cloud = spectrum(H)
    meta = {"model": spec.name, "window": N, "sites": H.n}
    if args.out:
        write_cloud(cloud, args.out, meta)
    _emit({"command": "spectrum", **meta, "hermitian": H.hermitian, "points": len(cloud.points),
           "dropped_contributions": H.provenance.get("dropped_contributions", 0)})
    return EXIT_OK


def _truncation_config(spec) -> TruncationConfig:
    opts = spec.spectral
    return TruncationConfig(
        sizes=spec.windows or None,
        cluster_tol=opts.get("cluster_tol", TruncationConfig.cluster_tol),
        stability_fraction=opts.get("stability_fraction", TruncationConfig.stability_fraction),
        edge_fraction=opts.get("edge_fraction", TruncationConfig.edge_fraction),
        edge_mass=opts.get("edge_mass", TruncationConfig.edge_mass),
    )


def cmd_essential(args) -> int:
    spec = load_model_file(args.model)
    model = spec.model
    report = {"command": "essential", "model": spec.name, "method": args.method}
    bnd = trunc = None
    if args.method in ("boundary", "both"):
        bnd = essential_spectrum_boundary(model, grid=_grid(spec))
        report["boundary"] = {"points": len(bnd.points), **bnd.meta}
        if args.out:
            write_cloud(bnd, f"{args.out}.boundary.csv", {"model": spec.name})
    if args.method in ("truncation", "both"):
        if not model.hermitian:
            raise NumericError("the truncation route is restricted to Hermitian kernels")
        trunc = essential_spectrum_truncation(model, config=_truncation_config(spec))
        report["truncation"] = {"points": len(trunc.points), **trunc.meta}
        if args.out:
            write_cloud(trunc, f"{args.out}.truncation.csv", {"model": spec.name})
    if bnd is not None and trunc is not None:
        tol = spec.spectral.get("hausdorff_tol", 0.05)
        d = hausdorff_distance(bnd, trunc)
        report["hausdorff"] = {"distance": d, "tol": tol, "pass": d <= tol}
    _emit(report)
    return EXIT_OK


def cmd_numrange(args) -> int:
    spec = load_model_file(args.model)
    model = spec.model
    angles = args.angles or spec.spectral.get("angles", 360)
    ess = essential_numerical_range(model, n_angles=angles, grid=_grid(spec))
    report = {"command": "numrange", "model": spec.name, "angles": angles,
              "essential": {"vertices": len(ess.vertices), "radius": ess.radius()}}
    N = _window(spec, args.window)
    H = model.operator(N)
    nr = numerical_range(H, angles)
    report["window"] = {"size": N, "vertices": len(nr.vertices), "radius": nr.radius(),
                        "outer_gap": nr.meta.get("outer_gap")}
    if args.out:
        write_cloud(ess, f"{args.out}.essential.csv", {"model": spec.name})
        write_cloud(nr, f"{args.out}.window.csv", {"model": spec.name, "window": N})
    _emit(report)
    return EXIT_OK


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def cmd_fredholm(args) -> int:
    spec = load_model_file(args.model)
    rep = fredholm_check(spec.model, args.lam, grid=_grid(spec))
    rep["verdict"] = "Fredholm" if rep["fredholm"] else "not Fredholm"
    _emit({"command": "fredholm", "model": spec.name, **rep})
    return EXIT_OK


def cmd_propagate(args) -> int:
    spec = load_model_file(args.model)
    model = spec.model
    opts = spec.propagation
    if not opts:
        raise ModelFileError(f"{spec.source}: no propagation block")
    kappa = EnergyBump(opts["kappa"][0], opts["kappa"][1], opts.get("plateau", 0.5))
    side = opts.get("side", "+")
    N = args.window or opts.get("window", 4000)
    eps = opts.get("eps", 0.05)
    eig = eigensystem(model.operator(N))
    search = find_neighborhood(model, kappa, eps, side, N, eig=eig)
    report = {"command": "propagate", "model": spec.name, "window": N, "kappa": [kappa.a, kappa.b],
              "plateau": kappa.plateau, "search": search.as_dict()}
    _, coords = model.window(N)
    x = np.asarray(coords)[:, 0]
    span = range(int(x.min()), int(x.max()) + 1) if side == "+" else range(-int(x.max()), -int(x.min()) + 1)
    if search.window is not None:
        # the decay region around the selected offset
        n0 = search.window.n0
        offsets = [n for n in range(n0 - 10, n0 + 51, 2) if n in span]
    else:
        offsets = list(span[:: max(1, len(span) // 30)])
    profile = bound_profile(model, kappa, side, N, offsets, eig=eig)
    if args.out:
        write_table(profile, ["n0", "bound"], f"{args.out}.profile.csv")
    if search.window is not None:
        t_max = opts.get("t_max", 200.0)
        times = np.linspace(0.0, t_max, opts.get("t_count", 50))
        tu = time_uniform_check(model, kappa, search.window, times, opts.get("trials", 50),
                                opts.get("seed", 0), eig=eig)
        report["time_uniform"] = {k: tu[k] for k in ("max", "static_bound", "pass", "trials", "seed")}
        if args.out:
            write_table(tu["profile"], ["t", "max_ratio"], f"{args.out}.time.csv")
    _emit(report)
    if not search.ok:
        return EXIT_INCONCLUSIVE
    return EXIT_OK if report["time_uniform"]["pass"] else EXIT_NUMERIC


def cmd_verify(args) -> int:
    paths = args.models or shipped_model_files()
    specs = [load_model_file(p) for p in paths]
    names = SUITES if args.suite == "all" else (args.suite,)
    results = {name: run_suite(name, specs) for name in names}
    for r in results.values():
        _relabel_sources(r)
    ok = all(r["pass"] for r in results.values())
    _emit({"command": "verify", "suites": results, "pass": ok})
    return EXIT_OK if ok else EXIT_NUMERIC


def _relabel_sources(obj):
    # report file names only, so reports do not depend on the install path
    if isinstance(obj, dict):
        if "source" in obj:
            obj["source"] = os.path.basename(str(obj["source"]))
        for v in obj.values():
            _relabel_sources(v)
    elif isinstance(obj, list):
        for v in obj:
            _relabel_sources(v)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="groupoid-spectra", description="Spectral computations for twisted groupoid models.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--threads", type=int, default=None, help=f"cap on BLAS threads (also {THREADS_ENV})")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", help="eigenvalues of the window operator")
    s.add_argument("model")
    s.add_argument("--window", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("essential", help="essential spectrum by boundary formula and/or truncation")
    s.add_argument("model")
    s.add_argument("--method", choices=("boundary", "truncation", "both"), default="boundary")
    s.add_argument("--out")
    s.set_defaults(func=cmd_essential)

    s = sub.add_parser("numrange", help="numerical and essential numerical range")
    s.add_argument("model")
    s.add_argument("--angles", type=int)
    s.add_argument("--window", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_numrange)

    s = sub.add_parser("fredholm", help="Fredholm verdict for H - lambda")
    s.add_argument("model")
    s.add_argument("--lambda", dest="lam", type=_parse_complex, required=True)
    s.set_defaults(func=cmd_fredholm)

    s = sub.add_parser("propagate", help="non-propagation neighborhood search")
    s.add_argument("model")
    s.add_argument("--window", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_propagate)

    s = sub.add_parser("verify", help="run verification suites")
    s.add_argument("models", nargs="*")
    s.add_argument("--suite", choices=SUITES + ("all",), default="all")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = args.threads
    if threads is None and os.environ.get(THREADS_ENV):
        threads = int(os.environ[THREADS_ENV])
    try:
        with threadpool_limits(limits=threads):
            return args.func(args)
    except ModelFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except InconclusiveError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (NumericError, GroupoidSpectraError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
