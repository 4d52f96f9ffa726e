import math

import numpy as np
import pytest

from groupoid_spectra import models as M
from groupoid_spectra.algebra import make_kernel, unit_kernel
from groupoid_spectra.cocycles import landau_gauge, symmetric_gauge, trivial_cocycle
from groupoid_spectra.groupoids import Arrow
from groupoid_spectra.representation import (
    OperatorMatrix,
    TruncationWindow,
    compress,
    connecting_gauge,
    direct_sum,
    extension_diagram_check,
    gauge_conjugate,
    peierls_matrix,
    reduced_norm,
    regular_rep,
    vector_rep,
)
from groupoid_spectra.spectral import numerical_range

from conftest import random_kernel_values, z2_arrows

HOP = {(1, 0): 1.0, (-1, 0): 1.0, (0, 1): 1.0, (0, -1): 1.0}


def test_scalar_kernel_is_scalar_matrix(two_limit_small):
    g, w = two_limit_small
    H = regular_rep(unit_kernel(g, w, 2.5), "+inf")
    assert np.array_equal(H.matrix, 2.5 * np.eye(H.n))


def test_nearest_neighbour_kernel_is_tridiagonal():
    model = M.two_limit_line(0.0, 0.0)
    H = model.operator(9).matrix
    expected = np.eye(9, k=1) + np.eye(9, k=-1)
    assert np.array_equal(H, expected)


def test_regular_rep_on_lattice_fiber():
    model = M.two_limit_line(0.0, 0.0)
    inst = model.instance(model.radius_for(7))
    basis = tuple(Arrow(0, n, n) for n in range(-3, 4))
    H = regular_rep(inst.kernel, 0, basis)
    assert np.array_equal(H.matrix, np.eye(7, k=1) + np.eye(7, k=-1))
    assert H.provenance["dropped_contributions"] == 2


def test_magnetic_hopping_matches_symmetric_gauge_peierls():
    q = 3
    model = M.hofstadter(1, q)
    N = 8
    units, _ = model.window(N)
    H = model.operator(N)
    P = peierls_matrix(HOP, symmetric_gauge(2 * math.pi / q), units)
    assert np.max(np.abs(H.matrix - P.matrix)) <= 1e-14
    assert H.hermitian


@pytest.mark.parametrize("factory", [lambda: M.two_limit_line(0.0, 4.0), lambda: M.hofstadter(1, 3),
                                     lambda: M.wiener_hopf_line({1: 1.0, -2: 0.5})])
def test_vector_rep_is_regular_rep_relabelled(factory):
    model = factory()
    units, _ = model.window(6)
    f = model.instance(model.radius_for(6)).kernel
    z = model.base_point
    law = f.groupoid.law
    V = vector_rep(f, units, z)
    R = regular_rep(f, z, [law.connect(z, u) for u in units])
    assert np.array_equal(V.matrix, R.matrix)


def test_potential_acts_by_multiplication():
    model = M.two_limit_line(-1.0, 3.0, hopping={})
    H = model.operator(8).matrix
    assert np.array_equal(H, np.diag([-1.0] * 4 + [3.0] * 4))


def test_wiener_hopf_is_toeplitz():
    symbol = {1: 0.5, -1: 2.0, 2: -1.0j, 0: 0.25}
    H = M.wiener_hopf_line(symbol).operator(10).matrix
    for j in range(10):
        for k in range(10):
            assert H[j, k] == symbol.get(j - k, 0)


def test_reduced_norm_of_scalar(two_limit_small):
    g, w = two_limit_small
    norm, witness = reduced_norm(unit_kernel(g, w, -3.0), ["+inf", "-inf"])
    assert norm == pytest.approx(3.0) and witness == "+inf"


def test_reduced_norm_group_bundle_witness():
    model = M.group_bundle(m=4, twist=2.0)
    f = model.instance(0).kernel
    norm, witness = reduced_norm(f, ("e1", "e2"))
    n1 = np.linalg.norm(regular_rep(f, "e1").matrix, 2)
    n2 = np.linalg.norm(regular_rep(f, "e2").matrix, 2)
    assert witness == "e2" and norm == pytest.approx(max(n1, n2)) and n2 == pytest.approx(2 * n1)


def test_reduced_norm_boundary_witness(two_limit_small):
    g, w = two_limit_small
    vals = {xi: 3.0 for xi in g.arrows if xi.source == "+inf"}
    vals.update({xi: 0.1 for xi in g.arrows if not isinstance(xi.source, str)})
    _, witness = reduced_norm(make_kernel(g, w, vals), [0, 1, "-inf", "+inf"])
    assert witness == "+inf"


def test_extension_diagram_zero_kernel(z2_twisted):
    g, w = z2_twisted
    assert extension_diagram_check(make_kernel(g, w), "pt", 2) == 0


def test_extension_diagram_twisted_z2(z2_twisted):
    g, w = z2_twisted
    f = make_kernel(g, w, {z2_arrows()[1]: 1.0})
    assert extension_diagram_check(f, "pt", 2) == 0


def test_extension_diagram_random_two_limit(two_limit_small, rng):
    g, w = two_limit_small
    for _ in range(5):
        f = make_kernel(g, w, random_kernel_values(g.arrows, rng), complex(rng.normal()))
        for x in (0, "+inf"):
            assert extension_diagram_check(f, x, 4) <= 1e-12


def test_gauge_conjugate_identity_and_spectrum(rng):
    A = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    H = OperatorMatrix(A + A.conj().T, tuple(range(12)), hermitian=True)
    assert np.array_equal(gauge_conjugate(H, np.zeros(12)).matrix, H.matrix)
    nu = rng.uniform(-5, 5, size=12)
    G = gauge_conjugate(H, nu)
    assert G.hermitian
    assert np.max(np.abs(np.linalg.eigvalsh(G.matrix) - np.linalg.eigvalsh(H.matrix))) <= 1e-10


def test_two_landau_gauges_are_conjugate():
    alpha = 2 * math.pi / 5
    pts = [(i, j) for i in range(-4, 5) for j in range(-4, 5)]
    A1, A2 = landau_gauge(alpha, axis=1), landau_gauge(alpha, axis=0)
    H1 = peierls_matrix(HOP, A1, pts)
    H2 = peierls_matrix(HOP, A2, pts)
    assert np.max(np.abs(H1.matrix - H2.matrix)) > 0.1
    nu = connecting_gauge(A1, A2, pts, (0, 0))
    assert np.max(np.abs(gauge_conjugate(H1, -nu).matrix - H2.matrix)) <= 1e-12
    assert np.max(np.abs(np.linalg.eigvalsh(H1.matrix) - np.linalg.eigvalsh(H2.matrix))) <= 1e-10


def test_compress_full_window_and_shift():
    H = OperatorMatrix(np.arange(9.0).reshape(3, 3) + 0j, ("a", "b", "c"))
    assert np.array_equal(compress(H, H.basis).matrix, H.matrix)
    laurent = M.two_limit_line(0.0, 0.0, hopping={1: 1.0}).operator(10)
    half = compress(laurent, [u for u in laurent.basis if u >= 0])
    shift = M.wiener_hopf_line({1: 1.0}).operator(5)
    assert np.array_equal(half.matrix, shift.matrix)


def test_compression_stays_in_numerical_range(rng):
    A = rng.normal(size=(10, 10)) + 1j * rng.normal(size=(10, 10))
    H = OperatorMatrix(A + A.conj().T, tuple(range(10)), hermitian=True)
    sub = compress(H, (1, 3, 4, 8))
    big = numerical_range(H, 360)
    for z in numerical_range(sub, 360).vertices:
        assert big.contains(z, tol=1e-9)


def test_direct_sum_blocks():
    a = OperatorMatrix(np.ones((2, 2), dtype=complex), (0, 1))
    b = OperatorMatrix(2 * np.ones((1, 1), dtype=complex), (2,))
    D = direct_sum([a, b])
    assert D.shape == (3, 3) and D[2, 2] == 2 and D[0, 2] == 0


def test_window_basis_rejects_duplicates():
    with pytest.raises(ValueError):
        TruncationWindow((1, 1), 0)


def test_flagged_hermitian_is_checked():
    with pytest.raises(ValueError):
        OperatorMatrix(np.array([[0, 1], [0, 0]], dtype=complex), (0, 1), hermitian=True)


def test_vector_rep_needs_standard_groupoid():
    from groupoid_spectra.errors import NotStandardError

    f = M.group_bundle().instance(0).kernel
    with pytest.raises(NotStandardError):
        vector_rep(f, ["e1"])


def test_trivial_cocycle_regular_rep_is_real(two_limit_small):
    g, w = two_limit_small
    f = make_kernel(g, trivial_cocycle(g), {xi: 1.0 for xi in g.arrows if xi.source == 0})
    assert np.isrealobj(regular_rep(f, 0).matrix.real)
