import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoid_spectra.cocycles import (
    MagneticFieldSpec,
    build_extension_groupoid,
    check_cocycle_identity,
    circulation,
    coboundary,
    cocycle_from_table,
    cohomologous_check,
    conjugate,
    curl,
    landau_gauge,
    lens_flux,
    magnetic_cocycle,
    make_cocycle,
    multiply,
    power,
    roots_of_unity,
    symmetric_gauge,
    triangle_flux,
    trivial_cocycle,
)
from groupoid_spectra.errors import CocycleError, IncompleteCocycleError
from groupoid_spectra.groupoids import (
    Arrow,
    GroupAction,
    UnitSpace,
    build_transformation_groupoid,
    check_groupoid_axioms,
    pair_groupoid,
)
from groupoid_spectra.groups import integer_lattice

from conftest import z2_arrows, z2_groupoid, z2_table


def _z2_plane_groupoid(window=1):
    action = GroupAction(integer_lattice(2), UnitSpace.discrete(["pt"]), lambda a, x: x, radius=window)
    return action, build_transformation_groupoid(action, window=window)


def test_constant_one_is_a_cocycle():
    g = pair_groupoid(range(4))
    chk = check_cocycle_identity(lambda a, b: 1.0, g)
    assert chk.ok and chk.residual == 0.0


def test_bilinear_phase_on_z2_lattice():
    _, g = _z2_plane_groupoid(2)
    alpha = 0.37

    def phase(xi, eta):
        a, b = xi.label, eta.label
        return cmath.exp(0.5j * alpha * (a[0] * b[1] - a[1] * b[0]))

    chk = check_cocycle_identity(phase, g)
    assert chk.ok and chk.residual <= 1e-14


def test_unnormalized_z2_table_fails():
    g = z2_groupoid()
    a = z2_arrows()
    table = {(a[i], a[j]): 1 for i in (0, 1) for j in (0, 1)}
    table[(a[0], a[1])] = 1j
    chk = check_cocycle_identity(table, g)
    assert not chk.ok and chk.residual > 0 and chk.worst is not None
    with pytest.raises(CocycleError):
        cocycle_from_table(g, table)


def test_z2_table_with_i_on_the_generator_is_a_cocycle():
    # every normalized phase on Z_2 passes: the only nontrivial triple (1,1,1) is symmetric
    g = z2_groupoid()
    assert check_cocycle_identity(z2_table(1j), g).ok


def test_missing_pair_is_reported():
    g = z2_groupoid()
    a = z2_arrows()
    with pytest.raises(IncompleteCocycleError):
        check_cocycle_identity({(a[0], a[0]): 1}, g)


def test_modulus_is_checked():
    g = z2_groupoid()
    chk = check_cocycle_identity(z2_table(1.5), g)
    assert not chk.ok and chk.modulus_residual == pytest.approx(0.5)


def test_order_gives_exact_zero_residual(z2_twisted):
    g, w = z2_twisted
    assert w.residual == 0.0
    assert check_cocycle_identity(w.phase, g, order=2).residual == 0.0


def test_coboundary_of_one_is_one():
    g = pair_groupoid(range(3))
    w = coboundary(g, lambda xi: 1.0)
    assert all(w(x, y) == 1 for x, y in g.composable_pairs())


def test_z2_coboundary_of_i():
    g = z2_groupoid()
    a = z2_arrows()
    w = coboundary(g, {a[0]: 1, a[1]: 1j})
    assert w(a[1], a[1]) == pytest.approx(-1)
    assert w(a[0], a[1]) == pytest.approx(1)


def test_minus_one_on_z2_is_a_coboundary_found_by_grid_search(z2_twisted):
    g, w = z2_twisted
    one = trivial_cocycle(g)
    a = z2_arrows()
    hits = [k for k, r in enumerate(roots_of_unity(64)) if cohomologous_check(one, w, {a[0]: 1, a[1]: r})]
    assert hits == [16, 48]  # σ(1) = ±i


@settings(max_examples=20, deadline=None)
@given(n=st.integers(1, 4), seed=st.integers(0, 10_000))
def test_every_pair_groupoid_cocycle_is_a_coboundary(n, seed):
    g = pair_groupoid(range(n))
    rng = np.random.default_rng(seed)
    sigma = {xi: cmath.exp(1j * rng.uniform(0, 2 * math.pi)) for xi in g.arrows}
    w = coboundary(g, sigma)
    # explicit trivialization: τ(ξ) = w(ξ, z → d(ξ)) satisfies δ¹τ = w
    z = 0
    tau = {xi: w(xi, Arrow(z, xi.source, None)) for xi in g.arrows}
    assert cohomologous_check(w, trivial_cocycle(g), lambda xi: 1 / tau[xi])


def test_product_with_conjugate_is_trivial():
    action, g = _z2_plane_groupoid(1)
    w = magnetic_cocycle(MagneticFieldSpec(alpha=2 * math.pi / 3), action, g, order=6)
    ww = multiply(w, conjugate(w))
    assert max(abs(ww(x, y) - 1) for x, y in g.composable_pairs()) <= 1e-15
    p = power(w, 3)
    for x, y in g.composable_pairs():
        assert p(x, y) == pytest.approx(w(x, y) ** 3, abs=1e-14)


def test_twisting_by_a_coboundary_is_cohomologous():
    action, g = _z2_plane_groupoid(1)
    w = magnetic_cocycle(MagneticFieldSpec(alpha=0.4), action, g)
    sigma = lambda xi: cmath.exp(0.3j * xi.label[0] - 0.1j * xi.label[1] ** 2)  # noqa: E731
    assert cohomologous_check(w, multiply(coboundary(g, sigma), w), sigma)


def test_circulation_basics():
    A = landau_gauge(0.7)
    assert circulation(A, (2, 3), (2, 3)) == 0.0
    assert circulation(A, (0, 0), (1, 1)) == pytest.approx(0.7)
    for b in [(3, -2), (-1, 4), (0, 5)]:
        assert circulation(A, b, (1, 1)) == pytest.approx(-circulation(A, (1, 1), b))


def test_triangle_flux_constant_field():
    B = MagneticFieldSpec(alpha=0.9)
    assert triangle_flux(B, (0, 0), (1, 1), (3, 3)) == 0.0
    assert triangle_flux(B, (0, 0), (1, 0), (1, 1)) == pytest.approx(0.45)


@settings(max_examples=40, deadline=None)
@given(pts=st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=3))
def test_discrete_stokes(pts):
    a, b, c = pts
    A = symmetric_gauge(0.3) + landau_gauge(0.2, axis=0)
    A = A + type(A)(lambda p, ax: 0.05 * math.sin(p[0] + 2 * p[1] + ax))
    B = curl(A)
    loop = circulation(A, a, b) + circulation(A, b, c) + circulation(A, c, a)
    assert triangle_flux(B, a, b, c, rule="staircase") == pytest.approx(loop, abs=1e-12)


def test_zero_field_gives_trivial_cocycle():
    action, g = _z2_plane_groupoid(1)
    w = magnetic_cocycle(MagneticFieldSpec(alpha=0.0), action, g)
    assert all(w(x, y) == 1 for x, y in g.composable_pairs())


def test_constant_field_cocycle_formula():
    action, g = _z2_plane_groupoid(2)
    alpha = 2 * math.pi / 5
    w = magnetic_cocycle(MagneticFieldSpec(alpha=alpha), action, g)
    for xi, eta in g.composable_pairs():
        a, b = eta.label, xi.label
        assert w(xi, eta) == pytest.approx(cmath.exp(0.5j * alpha * (a[0] * b[1] - a[1] * b[0])))


def test_variable_field_limit_at_boundary_unit():
    R = 2
    span = range(-R, R + 1)
    pts = tuple((i, j) for i in span for j in span) + ("inf",)
    closure = {p: frozenset([p, "inf"]) for p in pts[:-1]}
    closure["inf"] = frozenset(["inf"])
    units = UnitSpace(pts, closure, {p: p != "inf" for p in pts})

    def act(a, x):
        return x if x == "inf" else (x[0] + a[0], x[1] + a[1])

    alpha_inf = 0.6

    def table(u):
        if u == "inf":
            return alpha_inf
        r = max(abs(u[0]), abs(u[1]))
        return alpha_inf if r >= R else alpha_inf + 0.1 * (R - r)

    action = GroupAction(integer_lattice(2), units, act, radius=1)
    g = build_transformation_groupoid(action, window=1)
    B = MagneticFieldSpec(table=table, limits={"inf": alpha_inf})
    w = magnetic_cocycle(B, action, g)
    iso = [xi for xi in g.arrows if xi.source == "inf"]
    for xi in iso:
        for eta in iso:
            a, b = eta.label, xi.label
            expected = cmath.exp(0.5j * alpha_inf * (a[0] * b[1] - a[1] * b[0]))
            assert w(xi, eta) == pytest.approx(expected, abs=1e-12)
    # interior fibers see the varying field
    inner = [(xi, eta) for xi, eta in g.composable_pairs() if eta.source == (0, 0)]
    assert any(abs(w(xi, eta) - cmath.exp(0.5j * alpha_inf * (eta.label[0] * xi.label[1] - eta.label[1] * xi.label[0]))) > 1e-3
               for xi, eta in inner)


def test_lens_flux_is_zero_on_straight_paths():
    B = MagneticFieldSpec(alpha=1.0)
    assert lens_flux(B, (0, 0), (3, 0)) == 0.0
    assert lens_flux(B, (0, 0), (1, 1)) == pytest.approx(0.5)


def test_extension_of_trivial_cocycle_is_a_product():
    g = pair_groupoid(range(2))
    ext = build_extension_groupoid(g, trivial_cocycle(g), 3)
    assert len(ext) == 3 * len(g)
    for xi in ext.arrows:
        for eta in ext.by_range[xi.source]:
            p = ext.compose(xi, eta)
            assert p.label[0] == (xi.label[0] + eta.label[0]) % 3


def test_z2_extension_is_cyclic_of_order_four(z2_twisted):
    g, w = z2_twisted
    ext = build_extension_groupoid(g, w, 2)
    assert len(ext) == 4 and check_groupoid_axioms(ext)["ok"]
    gen = Arrow("pt", "pt", (0, 1))
    sq = ext.compose(gen, gen)
    assert sq == Arrow("pt", "pt", (1, 0))
    powers = {gen}
    cur = gen
    for _ in range(3):
        cur = ext.compose(cur, gen)
        powers.add(cur)
    assert len(powers) == 4


def test_extension_isotropy_is_mu_n_times_isotropy():
    from groupoid_spectra import models as M

    inst = M.two_limit_line().instance(3)
    ext = build_extension_groupoid(inst.groupoid, inst.cocycle, 4)
    for x in ("+inf", 0):
        assert len(ext.isotropy(x)) == 4 * len(inst.groupoid.isotropy(x))


def test_invalid_phase_rejected_by_factory():
    g = pair_groupoid(range(2))
    with pytest.raises(CocycleError):
        make_cocycle(g, lambda a, b: 1j)
