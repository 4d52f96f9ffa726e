import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoid_spectra.errors import InvarianceError
from groupoid_spectra.groupoids import (
    Arrow,
    GroupAction,
    UnitSpace,
    build_transformation_groupoid,
    check_groupoid_axioms,
    is_standard,
    orbits,
    pair_groupoid,
    quasi_orbit_of,
    reduce_to_subset,
    restrict_invariant,
)
from groupoid_spectra.groups import cyclic_group, finite_group, heisenberg_group, integer_lattice
from groupoid_spectra import models as M


def test_heisenberg_law_is_associative_and_noncommutative():
    H = heisenberg_group()
    elems = H.elements(1)
    for a in elems[::5]:
        for b in elems[::7]:
            for c in elems[::11]:
                assert H.mul(H.mul(a, b), c) == H.mul(a, H.mul(b, c))
            assert H.mul(a, H.inv(a)) == H.identity
    assert H.mul((1, 0, 0), (0, 1, 0)) != H.mul((0, 1, 0), (1, 0, 0))


def test_finite_group_rejects_nonassociative_table():
    elems = (0, 1, 2)
    table = {(a, b): (a + b) % 3 for a in elems for b in elems}
    assert finite_group(elems, table).abelian
    table[(1, 2)] = 1
    with pytest.raises(ValueError):
        finite_group(elems, table)


def test_infinite_group_needs_radius():
    with pytest.raises(ValueError):
        integer_lattice(2).elements()


def test_closure_map_must_be_transitive():
    with pytest.raises(ValueError):
        UnitSpace(("a", "b", "c"),
                  {"a": frozenset("ab"), "b": frozenset("bc"), "c": frozenset("c")},
                  {"a": True, "b": True, "c": True})


def test_boundary_points_are_closed():
    with pytest.raises(ValueError):
        UnitSpace(("a", "b"), {"a": frozenset("ab"), "b": frozenset("b")}, {"a": False, "b": True})


def test_one_unit_groupoid_is_the_group():
    g = build_transformation_groupoid(GroupAction(cyclic_group(2), UnitSpace.discrete(["pt"]), lambda a, x: x))
    assert len(g) == 2
    assert g.compose(Arrow("pt", "pt", 1), Arrow("pt", "pt", 1)) == Arrow("pt", "pt", 0)
    assert check_groupoid_axioms(g)["ok"]


def test_two_limit_boundary_isotropy_is_window():
    g = M.two_limit_line().instance(5).groupoid
    for b in ("-inf", "+inf"):
        assert sorted(xi.label for xi in g.isotropy(b)) == [-1, 0, 1]
    # interior points have trivial isotropy
    assert g.isotropy(0) == (Arrow(0, 0, 0),)
    assert check_groupoid_axioms(g)["ok"]


def test_group_bundle_is_two_copies():
    g = M.group_bundle(m=4).instance(0).groupoid
    assert len(g) == 8
    assert {xi.source for xi in g.arrows} == {"e1", "e2"}
    assert all(xi.source == xi.range for xi in g.arrows)


def test_reduce_to_all_units_is_identity():
    g = pair_groupoid(range(3))
    r = reduce_to_subset(g, g.units.points)
    assert r.arrows == g.arrows


def test_pair_groupoid_reduces_to_pair_groupoid():
    r = reduce_to_subset(pair_groupoid([1, 2, 3]), [1, 2])
    assert set(r.arrows) == set(pair_groupoid([1, 2]).arrows)


def test_two_limit_reduction_keeps_boundary_isotropy():
    g = M.two_limit_line().instance(8).groupoid
    L = [x for x in g.units.points if isinstance(x, str) or x >= 5]
    r = reduce_to_subset(g, L)
    for b in ("-inf", "+inf"):
        assert r.isotropy(b) == g.isotropy(b)
    main = [xi for xi in r.arrows if not isinstance(xi.source, str)]
    assert main and all(xi.source >= 5 and xi.range >= 5 for xi in main)
    expected = [xi for xi in g.arrows if not isinstance(xi.source, str) and xi.source >= 5 and xi.range >= 5]
    assert sorted(main) == sorted(expected)


def test_restrict_to_boundary_gives_two_lattice_copies():
    g = M.two_limit_line().instance(5).groupoid
    r = restrict_invariant(g, ["-inf", "+inf"])
    assert len(r) == 6
    assert orbits(r) == (frozenset(["-inf"]), frozenset(["+inf"]))


def test_restrict_to_main_orbit_is_pair_like():
    g = M.two_limit_line().instance(3).groupoid
    main = [x for x in g.units.points if not isinstance(x, str)]
    r = restrict_invariant(g, main)
    # at most one arrow between any two units: the windowed pair groupoid
    pairs = [(xi.source, xi.range) for xi in r.arrows]
    assert len(pairs) == len(set(pairs))
    assert all(abs(xi.range - xi.source) <= 1 for xi in r.arrows)


def test_restrict_to_noninvariant_point_fails():
    g = M.two_limit_line().instance(3).groupoid
    with pytest.raises(InvarianceError) as info:
        restrict_invariant(g, [0])
    assert info.value.witness is not None


def test_orbits():
    assert len(orbits(pair_groupoid(range(5)))) == 1
    g = M.two_limit_line().instance(4).groupoid
    classes = set(orbits(g))
    assert classes == {frozenset(range(-4, 5)), frozenset(["-inf"]), frozenset(["+inf"])}
    assert set(orbits(M.group_bundle().instance(0).groupoid)) == {frozenset(["e1"]), frozenset(["e2"])}


def test_quasi_orbits_two_limit():
    g = M.two_limit_line().instance(4).groupoid
    Q = quasi_orbit_of(g, 0)
    assert Q.members == g.units.point_set
    assert Q.nongeneric == {"-inf", "+inf"}
    Qp = quasi_orbit_of(g, "+inf")
    assert Qp.members == Qp.generic == {"+inf"}


def test_quasi_orbit_wiener_hopf():
    g = M.wiener_hopf_line().instance(4).groupoid
    assert quasi_orbit_of(g, 2).nongeneric == {"inf"}


def test_standardness():
    chk = is_standard(M.two_limit_line().instance(4).groupoid)
    assert chk and chk.main_orbit == frozenset(range(-4, 5))
    assert not is_standard(M.group_bundle().instance(0).groupoid)
    assert is_standard(pair_groupoid(range(4))).main_orbit == frozenset(range(4))


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 5), data=st.data())
def test_pair_groupoid_restrictions_are_groupoids(n, data):
    g = pair_groupoid(range(n))
    sub = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
    r = reduce_to_subset(g, sub)
    rep = check_groupoid_axioms(r)
    assert rep["ok"] and rep["skipped_triples"] == 0


@settings(max_examples=20, deadline=None)
@given(m=st.integers(1, 6))
def test_cyclic_transformation_groupoids_satisfy_axioms(m):
    pts = list(range(m))
    action = GroupAction(cyclic_group(m), UnitSpace.discrete(pts), lambda a, x: (x + a) % m)
    g = build_transformation_groupoid(action)
    assert check_groupoid_axioms(g)["ok"]
    assert len(orbits(g)) == 1
