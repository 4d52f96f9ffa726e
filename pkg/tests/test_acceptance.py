"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are written with
capture disabled so they land in the log.
"""

import contextlib
import io
import time

import numpy as np
import pytest
from scipy.spatial import cKDTree
from scipy.stats import unitary_group

from groupoid_spectra import models as M
from groupoid_spectra.cli import main
from groupoid_spectra.modelfile import load_model_file, shipped_model_files
from groupoid_spectra.propagation import EnergyBump, eigensystem, find_neighborhood, time_uniform_check
from groupoid_spectra.representation import OperatorMatrix, regular_rep
from groupoid_spectra.spectral import (
    TruncationConfig,
    convex_hull,
    essential_numerical_range,
    essential_spectrum_boundary,
    essential_spectrum_truncation,
    fredholm_check,
    hausdorff_distance,
    magnetic_bloch_range,
    numerical_range,
)
from groupoid_spectra.suites import suite_cocycle, suite_exel, suite_extension, suite_gauge, suite_morphism

HOP = {(1, 0): 1.0, (-1, 0): 1.0, (0, 1): 1.0, (0, -1): 1.0}
LINE_SIZES = (500, 1000, 2000)


@pytest.fixture(scope="module")
def specs():
    return [load_model_file(p) for p in shipped_model_files()]


@pytest.fixture
def report(pytestconfig):
    capman = pytestconfig.pluginmanager.getplugin("capturemanager")

    def emit(criterion, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} [{criterion}] {detail}"
        with capman.global_and_fixture_disabled():
            print("\n" + line)
        assert ok, line

    return emit


def test_01_cocycle_identity_on_shipped_models(specs, report):
    t0 = time.perf_counter()
    rep = suite_cocycle(specs)
    elapsed = time.perf_counter() - t0
    worst = max(r["cocycle_residual"] for r in rep["models"])
    ok = rep["pass"] and worst <= 1e-12 and elapsed < 10
    report("cocycle", ok, f"{len(rep['models'])} models, max residual {worst:.2e} <= 1e-12, {elapsed:.1f}s < 10s")


def test_02_extension_diagram(specs, report):
    t0 = time.perf_counter()
    rep = suite_extension(specs, orders=(2, 4, 8), kernels=100)
    elapsed = time.perf_counter() - t0
    worst = max(r["residual"] for r in rep["models"])
    ok = rep["pass"] and len(rep["models"]) > 0 and worst <= 1e-12 and elapsed < 30
    report("extension", ok,
           f"{len(rep['models'])} finite models x 100 kernels, N in (2,4,8), max residual {worst:.2e} <= 1e-12, "
           f"{elapsed:.1f}s < 30s")


def test_03_restriction_morphism(report):
    rep = suite_morphism(kernels=200)
    worst = max(rep["product_residual"], rep["involution_residual"])
    report("morphism", rep["pass"] and worst <= 1e-13,
           f"200 kernels, product {rep['product_residual']:.2e}, involution {rep['involution_residual']:.2e} <= 1e-13")


@pytest.mark.slow
def test_04_two_limit_decomposition(report):
    t0 = time.perf_counter()
    dists = {}
    for vm, vp in [(0.0, 0.0), (0.0, 4.0), (-1.0, 1.0)]:
        model = M.two_limit_line(vm, vp)
        trunc = essential_spectrum_truncation(model, config=TruncationConfig(sizes=LINE_SIZES))
        dists[(vm, vp)] = hausdorff_distance(essential_spectrum_boundary(model), trunc)
    elapsed = time.perf_counter() - t0
    ok = max(dists.values()) <= 0.05 and elapsed < 120
    detail = ", ".join(f"{k}: {d:.4f}" for k, d in dists.items())
    report("two-limit", ok, f"window 2000, Hausdorff {detail} <= 0.05, {elapsed:.1f}s < 120s")


@pytest.mark.slow
def test_05_hofstadter_against_bloch(report):
    t0 = time.perf_counter()
    dists = {}
    for q in (2, 3, 5):
        model = M.hofstadter(1, q)
        trunc = essential_spectrum_truncation(model, config=TruncationConfig(sizes=(30, 42, 60)))
        dists[q] = hausdorff_distance(trunc, magnetic_bloch_range(HOP, 1, q, m=32))
    elapsed = time.perf_counter() - t0
    ok = max(dists.values()) <= 0.1 and elapsed < 600
    detail = ", ".join(f"q={q}: {d:.4f}" for q, d in dists.items())
    report("hofstadter", ok, f"60x60 vs 32x32 Bloch, Hausdorff {detail} <= 0.1, {elapsed:.1f}s < 600s")


def test_06_shift_fredholm_against_winding(report):
    model = M.wiener_hopf_line({1: 1.0})
    axis = np.linspace(-2, 2, 40)
    disagree = checked = 0
    for x in axis:
        for y in axis:
            lam = complex(x, y)
            if abs(abs(lam) - 1) <= 0.05:
                continue
            checked += 1
            # the symbol t ↦ t − λ on the circle is invertible iff |λ| ≠ 1
            oracle = abs(lam) != 1
            disagree += fredholm_check(model, lam)["fredholm"] != oracle
    report("fredholm", disagree == 0, f"{checked} grid points off the 0.05 band, {disagree} disagreements == 0")


def test_07_gauge_covariance(report):
    rep = suite_gauge(hofstadter_window=40, line_window=500)
    hof, line = rep["hofstadter"], rep["wiener_hopf"]
    worst = max(hof["landau_vs_symmetric"], hof["cocycle_vs_symmetric"], line["phase_vs_plain"])
    report("gauge", rep["pass"] and worst <= 1e-10,
           f"Hofstadter q=3 40x40 {hof['landau_vs_symmetric']:.2e}/{hof['cocycle_vs_symmetric']:.2e}, "
           f"Wiener-Hopf N=500 {line['phase_vs_plain']:.2e} <= 1e-10")


@pytest.mark.slow
def test_08_numerical_range(report):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 65))
        ev = rng.normal(size=n) + 1j * rng.normal(size=n)
        U = unitary_group.rvs(n, random_state=rng)
        A = (U * ev) @ U.conj().T
        nr = numerical_range(OperatorMatrix(A, tuple(range(n))), 720)
        worst = max(worst, nr.hausdorff(convex_hull(ev)))
    jordan = numerical_range(OperatorMatrix(np.array([[0, 1], [0, 0]], dtype=complex), (0, 1)), 720)
    far, near = jordan.radius()
    model = M.group_bundle()
    f = model.instance(0).kernel
    parts = np.concatenate([numerical_range(regular_rep(f, x), 720).vertices for x in ("e1", "e2")])
    bundle = essential_numerical_range(model, n_angles=720).hausdorff(convex_hull(parts))
    ok = worst <= 1e-6 and abs(far - 0.5) <= 1e-3 and abs(near - 0.5) <= 1e-3 and bundle <= 1e-8
    report("numerical range", ok,
           f"50 normal matrices max {worst:.2e} <= 1e-6; Jordan radius {far:.5f}/{near:.5f} = 0.5 +- 1e-3; "
           f"group bundle {bundle:.2e} <= 1e-8")


@pytest.mark.slow
def test_09_compression_invariance(report):
    base = M.two_limit_line(0.0, 4.0)
    red = M.partial_action_complement(base, range(-3, 4))
    a, b = essential_spectrum_boundary(base).points, essential_spectrum_boundary(red).points
    exact = a.shape == b.shape and np.array_equal(a, b)

    cfg = TruncationConfig(sizes=LINE_SIZES)
    ta = essential_spectrum_truncation(base, config=cfg)
    tb = essential_spectrum_truncation(red, config=cfg)

    def with_discrete(cloud):
        disc = np.asarray(cloud.meta["discrete"], dtype=complex)
        return np.concatenate([cloud.points, disc]), set(disc.tolist())

    (pa, da), (pb, db) = with_discrete(ta), with_discrete(tb)
    outliers, unflagged = 0, 0
    for pts, other, flagged in ((pa, pb, da), (pb, pa, db)):
        dist, _ = cKDTree(np.column_stack([other.real, other.imag])).query(np.column_stack([pts.real, pts.imag]))
        far = pts[dist > 0.05]
        outliers += far.size
        unflagged += sum(z not in flagged for z in far.tolist())
    ok = exact and outliers <= 10 and unflagged == 0
    report("compression", ok,
           f"boundary clouds identical={exact}; truncation outliers beyond 0.05: {outliers} <= 10, "
           f"not flagged discrete: {unflagged} == 0")


@pytest.mark.slow
def test_10_non_propagation(report):
    t0 = time.perf_counter()
    model = M.two_limit_line(0.0, 4.0)
    kappa = EnergyBump(-1.5, 1.5)
    eig = eigensystem(model.operator(4000))
    res = find_neighborhood(model, kappa, 0.05, "+", 4000, eig=eig)
    tu = time_uniform_check(model, kappa, res.window, np.linspace(0, 200, 50), trials=50, seed=0, eig=eig)
    elapsed = time.perf_counter() - t0
    ok = (res.ok and res.window.n0 <= 4000 and res.bound <= 0.05
          and tu["max"] <= res.bound + 1e-10 and elapsed < 300)
    report("non-propagation", ok,
           f"n0={res.window.n0} <= 4000, static bound {res.bound:.4f} <= 0.05, time-uniform max {tu['max']:.4f} "
           f"<= bound + 1e-10, {elapsed:.1f}s < 300s")


def test_11_exel_witness(specs, report):
    rep = suite_exel(specs)
    worst = max(r["relative_gap"] for r in rep["models"])
    report("exel", rep["pass"] and len(rep["models"]) > 0,
           f"{len(rep['models'])} finite models, max relative gap {worst:.2e} <= 1e-12")


@pytest.mark.slow
def test_12_verify_is_deterministic(report):
    runs = []
    for _ in range(2):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main(["verify"])
        runs.append((code, buf.getvalue().encode()))
    same = runs[0] == runs[1]
    report("determinism", same and runs[0][0] == 0 and len(runs[0][1]) > 0,
           f"two full verify runs, exit {runs[0][0]}, {len(runs[0][1])} bytes, identical={same}")

