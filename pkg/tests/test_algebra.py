import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoid_spectra.algebra import (
    HomogeneousKernel,
    add,
    chi_n,
    convolve,
    delta_embed,
    delta_kernel,
    hahn_norm,
    involution,
    kappa_n,
    kernel_allclose,
    make_kernel,
    restrict,
    scale,
    twist_by,
    unit_kernel,
)
from groupoid_spectra.cocycles import coboundary, conjugate, multiply, trivial_cocycle
from groupoid_spectra.errors import AliasingError, OutOfWindowError
from groupoid_spectra.groupoids import Arrow, pair_groupoid

from conftest import random_kernel_values, z2_arrows


def _pair_kernel(n, A, w):
    g = w.groupoid
    return make_kernel(g, w, {xi: A[xi.range, xi.source] for xi in g.arrows})


def _matrix(f, n):
    M = np.zeros((n, n), dtype=complex)
    for xi, v in f.values.items():
        M[xi.range, xi.source] += v
    return M + f.s * np.eye(n)


def test_unit_kernel_is_neutral(two_limit_small, rng):
    g, w = two_limit_small
    f = make_kernel(g, w, random_kernel_values(g.arrows[:40], rng), 0.3)
    one = unit_kernel(g, w)
    assert kernel_allclose(convolve(one, f), f) == 0
    assert kernel_allclose(convolve(f, one), f) == 0


def test_twisted_z2_generator_squares_to_minus_one(z2_twisted):
    g, w = z2_twisted
    a = z2_arrows()
    d1 = delta_kernel(g, w, a[1])
    sq = convolve(d1, d1)
    assert dict(sq.values) == {a[0]: -1}


def test_pair_groupoid_convolution_is_matrix_product(rng):
    n = 5
    g = pair_groupoid(range(n))
    w = trivial_cocycle(g)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    fg = convolve(_pair_kernel(n, A, w), _pair_kernel(n, B, w))
    assert np.max(np.abs(_matrix(fg, n) - A @ B)) <= 1e-13


def test_involution_fixes_even_real_kernel():
    from groupoid_spectra import models as M

    inst = M.two_limit_line(0.0, 0.0).instance(4)
    f = inst.kernel
    assert kernel_allclose(involution(f), f) == 0


def test_involution_on_twisted_z2(z2_twisted):
    g, w = z2_twisted
    a = z2_arrows()
    star = involution(delta_kernel(g, w, a[1]))
    assert star(a[1]) == -1


def test_involution_is_antimultiplicative(z2_twisted, rng):
    g, w = z2_twisted
    for _ in range(10):
        f = make_kernel(g, w, random_kernel_values(g.arrows, rng), complex(rng.normal(), rng.normal()))
        h = make_kernel(g, w, random_kernel_values(g.arrows, rng), complex(rng.normal(), rng.normal()))
        lhs = involution(convolve(f, h))
        rhs = convolve(involution(h), involution(f))
        assert kernel_allclose(lhs, rhs) <= 1e-14


def test_hahn_norm_examples(z2_twisted):
    g, w = z2_twisted
    a = z2_arrows()
    assert hahn_norm(delta_kernel(g, w, a[1])) == 1
    p = pair_groupoid([0, 1])
    wp = trivial_cocycle(p)
    # columns (sources) sum to 2 and 2, rows (ranges) to 1 and 3
    vals = {Arrow(0, 0, None): 0.5, Arrow(1, 0, None): 0.5, Arrow(0, 1, None): 1.5, Arrow(1, 1, None): 1.5}
    assert hahn_norm(make_kernel(p, wp, vals)) == 3


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_hahn_norm_is_submultiplicative(seed):
    rng = np.random.default_rng(seed)
    g = pair_groupoid(range(4))
    w = coboundary(g, {xi: np.exp(1j * rng.uniform(0, 6.3)) for xi in g.arrows})
    f = make_kernel(g, w, random_kernel_values(g.arrows, rng))
    h = make_kernel(g, w, random_kernel_values(g.arrows, rng))
    assert hahn_norm(convolve(f, h)) <= hahn_norm(f) * hahn_norm(h) * (1 + 1e-12)


def test_restrict_to_all_units_is_identity(two_limit_small, rng):
    g, w = two_limit_small
    f = make_kernel(g, w, random_kernel_values(g.arrows[:30], rng), 1.5)
    r = restrict(f, g.units.points)
    assert r.values == f.values and r.s == f.s


def test_main_orbit_kernel_restricts_to_scalar(two_limit_small):
    g, w = two_limit_small
    vals = {xi: 1.0 for xi in g.arrows if not isinstance(xi.source, str)}
    r = restrict(make_kernel(g, w, vals, 2.0), ["-inf", "+inf"])
    assert r.values == {} and r.s == 2.0


def test_restriction_is_a_homomorphism(two_limit_small, rng):
    g, w = two_limit_small
    short = [xi for xi in g.arrows if abs(xi.label) <= 1]
    A = ["-inf", "+inf"]
    for _ in range(10):
        f = make_kernel(g, w, random_kernel_values(short, rng), rng.normal())
        h = make_kernel(g, w, random_kernel_values(short, rng), rng.normal())
        assert kernel_allclose(restrict(convolve(f, h), A), convolve(restrict(f, A), restrict(h, A))) == 0


def test_products_leaving_the_window_raise(two_limit_small):
    g, w = two_limit_small
    xi = Arrow("+inf", "+inf", 2)
    f = delta_kernel(g, w, xi)
    with pytest.raises(OutOfWindowError):
        convolve(f, f)


def test_twist_by_intertwines_cohomologous_algebras(z2_twisted, rng):
    g, w = z2_twisted
    sigma = {xi: np.exp(1j * rng.uniform(0, 6.3)) for xi in g.arrows}
    sigma[g.unit_arrow("pt")] = 1.0
    sbar = {k: np.conj(v) for k, v in sigma.items()}
    target = multiply(coboundary(g, sbar), w)
    f = make_kernel(g, w, random_kernel_values(g.arrows, rng))
    h = make_kernel(g, w, random_kernel_values(g.arrows, rng))
    lhs = twist_by(convolve(f, h), sigma.__getitem__, target)
    rhs = convolve(twist_by(f, sigma.__getitem__, target), twist_by(h, sigma.__getitem__, target))
    assert kernel_allclose(lhs, rhs) <= 1e-14


def test_delta_of_zero_is_zero(z2_twisted):
    g, w = z2_twisted
    assert delta_embed(make_kernel(g, w), 2).kernel.values == {}


def test_delta_is_multiplicative_on_twisted_z2(z2_twisted, rng):
    g, w = z2_twisted
    for _ in range(5):
        f = make_kernel(g, w, random_kernel_values(g.arrows, rng))
        h = make_kernel(g, w, random_kernel_values(g.arrows, rng))
        lhs = delta_embed(convolve(f, h), 2).kernel
        rhs = convolve(delta_embed(f, 2).kernel, delta_embed(h, 2).kernel)
        assert kernel_allclose(lhs, rhs) <= 1e-14


def test_delta_preserves_hahn_norm(two_limit_small, rng):
    g, w = two_limit_small
    f = make_kernel(g, w, random_kernel_values(g.arrows[:25], rng))
    for N in (2, 4, 8):
        assert hahn_norm(delta_embed(f, N).kernel) == pytest.approx(hahn_norm(f), rel=1e-14)


def test_chi_n_projects_onto_degree_n(z2_twisted, rng):
    g, w = z2_twisted
    f = make_kernel(g, w, random_kernel_values(g.arrows, rng))
    Phi = delta_embed(f, 4)
    assert kernel_allclose(chi_n(Phi.kernel, 1).kernel, Phi.kernel) <= 1e-15
    # degree-1 kernels have no degree-2 component
    assert all(abs(v) <= 1e-15 for v in chi_n(Phi.kernel, 2).kernel.values.values())


def test_kappa_inverts_delta(two_limit_small, rng):
    g, w = two_limit_small
    for _ in range(5):
        f = make_kernel(g, w, random_kernel_values(g.arrows[:40], rng))
        back = kappa_n(delta_embed(f, 4))
        assert back.cocycle.phase is w.phase or back.cocycle.is_trivial
        assert kernel_allclose(back, f) == 0


def test_kappa_of_degree_minus_one_lands_on_conjugate_cocycle(z2_twisted, rng):
    g, w = z2_twisted
    f = make_kernel(g, w, random_kernel_values(g.arrows, rng))
    Phi = chi_n(delta_embed(f, 4).kernel, -1)
    k = kappa_n(Phi)
    a = z2_arrows()
    assert k.cocycle(a[1], a[1]) == conjugate(w)(a[1], a[1])


def test_degree_must_be_resolvable(z2_twisted):
    g, w = z2_twisted
    f = make_kernel(g, w, {z2_arrows()[1]: 1.0})
    ext_kernel = delta_embed(f, 2).kernel
    with pytest.raises(AliasingError):
        chi_n(ext_kernel, 2)
    with pytest.raises(ValueError):
        HomogeneousKernel(ext_kernel, 0)


def test_add_and_scale(z2_twisted):
    g, w = z2_twisted
    a = z2_arrows()
    f = delta_kernel(g, w, a[1], 2.0)
    assert add(f, scale(f, -1)).values == {}
