"""Finite and windowed groupoids.

Arrows are hashable ``Arrow(source, range, label)`` triples. Every
groupoid carries a *law* object that multiplies and inverts arrows
algebraically; the groupoid itself stores the finitely many materialized
arrows. For lattice models the materialized part is a window of an
infinite groupoid, and membership tests are what turn a product that
leaves the window into an :class:`~groupoid_spectra.errors.OutOfWindowError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple

from .errors import InvarianceError, OutOfWindowError
from .groups import Group

__all__ = [
    "Arrow",
    "UnitSpace",
    "GroupAction",
    "TransformationLaw",
    "PairLaw",
    "ExtensionLaw",
    "FiniteGroupoid",
    "QuasiOrbit",
    "build_transformation_groupoid",
    "pair_groupoid",
    "reduce_to_subset",
    "restrict_invariant",
    "orbits",
    "orbit_of",
    "quasi_orbit_of",
    "is_standard",
    "is_locally_closed",
    "check_groupoid_axioms",
    "same_groupoid",
]


class Arrow(NamedTuple):
    """An arrow from ``source`` to ``range``; the triple is its identity."""

    source: Hashable
    range: Hashable
    label: Hashable


@dataclass(frozen=True, eq=False)
class UnitSpace:
    """Finite unit space with a specialization preorder.

    ``closure_map[x]`` lists the points in the closure of ``x``. Lattice
    models declare their boundary points inside the closure of every
    interior point, which is how the orbit closures of infinite orbits are
    encoded without any metric.
    """

    points: tuple
    closure_map: Mapping[Hashable, frozenset]
    interior: Mapping[Hashable, bool]

    def __post_init__(self):
        pts = set(self.points)
        if len(pts) != len(self.points):
            raise ValueError("duplicate unit identifiers")
        for x in self.points:
            cl = self.closure_map.get(x)
            if cl is None:
                raise ValueError(f"closure of {x!r} not declared")
            if x not in cl:
                raise ValueError(f"closure of {x!r} does not contain it")
            if not cl <= pts:
                raise ValueError(f"closure of {x!r} leaves the unit space")
            for y in cl:
                if not self.closure_map[y] <= cl:
                    raise ValueError(f"closure map not transitive at {x!r} -> {y!r}")
            if not self.interior[x] and any(self.interior[y] for y in cl):
                raise ValueError(f"boundary point {x!r} is not closed")

    @cached_property
    def point_set(self) -> frozenset:
        return frozenset(self.points)

    @cached_property
    def boundary(self) -> tuple:
        return tuple(x for x in self.points if not self.interior[x])

    def __contains__(self, x) -> bool:
        return x in self.point_set

    def __len__(self) -> int:
        return len(self.points)

    def closure(self, subset: Iterable) -> frozenset:
        out = set()
        for x in subset:
            out |= self.closure_map[x]
        return frozenset(out)

    def restricted(self, subset) -> "UnitSpace":
        keep = frozenset(subset)
        pts = tuple(x for x in self.points if x in keep)
        return UnitSpace(
            points=pts,
            closure_map={x: self.closure_map[x] & keep for x in pts},
            interior={x: self.interior[x] for x in pts},
        )

    @staticmethod
    def discrete(points: Iterable, interior: bool = True) -> "UnitSpace":
        pts = tuple(points)
        return UnitSpace(
            points=pts,
            closure_map={x: frozenset([x]) for x in pts},
            interior={x: interior for x in pts},
        )


@dataclass(frozen=True, eq=False)
class GroupAction:
    """Action of a discrete group on a (materialized) unit space.

    Parameters
    ----------
    group : Group
    units : UnitSpace
    act : callable
        ``act(a, x)`` is the image of unit ``x`` under group element ``a``;
        it must be defined on every unit, materialized or not.
    radius : int or None
        Window radius for lattice groups; ``None`` for finite groups.
    solve : callable, optional
        ``solve(x, y)`` returns the unique ``a`` with ``act(a, x) = y`` on
        the free main orbit, or ``None``.
    """

    group: Group
    units: UnitSpace
    act: Callable[[Hashable, Hashable], Hashable]
    radius: int | None = None
    solve: Callable[[Hashable, Hashable], Hashable] | None = None

    def check(self, elements=None) -> None:
        """Verify ``theta_e = id`` and ``theta_a theta_b = theta_ab`` on materialized points."""
        G = self.group
        elems = elements if elements is not None else G.elements(self.radius if not G.finite else None)
        for x in self.units.points:
            if self.act(G.identity, x) != x:
                raise ValueError(f"identity moves {x!r}")
        for a in elems:
            for b in elems:
                for x in self.units.points:
                    if self.act(a, self.act(b, x)) != self.act(G.mul(a, b), x):
                        raise ValueError(f"action law fails at a={a!r}, b={b!r}, x={x!r}")


class TransformationLaw:
    """Law of X ⋊ G: ``(θ_a x, b)(x, a) = (x, ba)``, label = group element."""

    def __init__(self, action: GroupAction):
        self.action = action
        self.group = action.group

    def compose(self, xi: Arrow, eta: Arrow) -> Arrow:
        return Arrow(eta.source, xi.range, self.group.mul(xi.label, eta.label))

    def inverse(self, xi: Arrow) -> Arrow:
        return Arrow(xi.range, xi.source, self.group.inv(xi.label))

    def unit(self, x) -> Arrow:
        return Arrow(x, x, self.group.identity)

    def arrow(self, x, a) -> Arrow:
        return Arrow(x, self.action.act(a, x), a)

    def connect(self, x, y) -> Arrow | None:
        if self.action.solve is None:
            return None
        a = self.action.solve(x, y)
        return None if a is None else Arrow(x, y, a)


class PairLaw:
    """Law of the pair groupoid X × X: ``(z, y)(y, x) = (z, x)``."""

    group = None

    def compose(self, xi: Arrow, eta: Arrow) -> Arrow:
        return Arrow(eta.source, xi.range, None)

    def inverse(self, xi: Arrow) -> Arrow:
        return Arrow(xi.range, xi.source, None)

    def unit(self, x) -> Arrow:
        return Arrow(x, x, None)

    def connect(self, x, y) -> Arrow:
        return Arrow(x, y, None)


class ExtensionLaw:
    """Law of the extension μ_N ×^ω Ξ with labels ``(k, base_label)``.

    ``k`` stands for the root of unity ``exp(2πik/N)``; ``exponent(ξ, η)``
    returns the integer ``e`` with ``ω(ξ, η) = exp(2πie/N)``.
    """

    def __init__(self, base_law, order: int, exponent: Callable[[Arrow, Arrow], int]):
        self.base = base_law
        self.order = order
        self.exponent = exponent
        self.group = None

    @staticmethod
    def base_arrow(xi: Arrow) -> Arrow:
        return Arrow(xi.source, xi.range, xi.label[1])

    @staticmethod
    def lift(k: int, xi: Arrow) -> Arrow:
        return Arrow(xi.source, xi.range, (k, xi.label))

    def compose(self, xi: Arrow, eta: Arrow) -> Arrow:
        b1, b2 = self.base_arrow(xi), self.base_arrow(eta)
        k = (xi.label[0] + eta.label[0] + self.exponent(b1, b2)) % self.order
        return self.lift(k, self.base.compose(b1, b2))

    def inverse(self, xi: Arrow) -> Arrow:
        b = self.base_arrow(xi)
        binv = self.base.inverse(b)
        k = (-xi.label[0] - self.exponent(b, binv)) % self.order
        return self.lift(k, binv)

    def unit(self, x) -> Arrow:
        return self.lift(0, self.base.unit(x))

    def connect(self, x, y) -> Arrow | None:
        c = self.base.connect(x, y) if hasattr(self.base, "connect") else None
        return None if c is None else self.lift(0, c)


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """Materialized groupoid.

    Parameters
    ----------
    units : UnitSpace
    arrows : tuple of Arrow
        Materialized arrows; all unit arrows must be present.
    law : object
        Algebraic law (``compose``, ``inverse``, ``unit``).
    haar_weight : float
        Uniform counting weight of every arrow in its fiber (1 for all
        lattice models, ``1/N`` for an extension by μ_N).
    main_orbit : frozenset or None
        Symbolically declared main orbit (lattice models); merged into a
        single class by :func:`orbits` even when the materialized arrows
        do not connect it.
    complete : bool
        True when the arrow set is closed under composition.
    """

    units: UnitSpace
    arrows: tuple
    law: object
    haar_weight: float = 1.0
    main_orbit: frozenset | None = None
    complete: bool = True
    name: str = "groupoid"
    invariant_in: "FiniteGroupoid | None" = None
    extension: object = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        idx = self.index
        if len(idx) != len(self.arrows):
            raise ValueError("duplicate arrows")
        pts = self.units.point_set
        for xi in self.arrows:
            if xi.source not in pts or xi.range not in pts:
                raise ValueError(f"arrow {xi!r} has an endpoint outside the unit space")
        for x in self.units.points:
            if self.law.unit(x) not in idx:
                raise ValueError(f"unit arrow at {x!r} missing")

    @cached_property
    def index(self) -> dict:
        return {xi: i for i, xi in enumerate(self.arrows)}

    @cached_property
    def by_source(self) -> dict:
        out = {x: [] for x in self.units.points}
        for xi in self.arrows:
            out[xi.source].append(xi)
        return {x: tuple(v) for x, v in out.items()}

    @cached_property
    def by_range(self) -> dict:
        out = {x: [] for x in self.units.points}
        for xi in self.arrows:
            out[xi.range].append(xi)
        return {x: tuple(v) for x, v in out.items()}

    def __contains__(self, xi) -> bool:
        return xi in self.index

    def __len__(self) -> int:
        return len(self.arrows)

    def product(self, xi: Arrow, eta: Arrow) -> Arrow:
        """Algebraic product, materialized or not."""
        if xi.source != eta.range:
            raise ValueError(f"arrows not composable: d({xi!r}) != r({eta!r})")
        return self.law.compose(xi, eta)

    def compose(self, xi: Arrow, eta: Arrow) -> Arrow:
        """Product of materialized arrows; raises if it leaves the window."""
        p = self.product(xi, eta)
        if p not in self.index:
            raise OutOfWindowError(f"product {p!r} of {xi!r} and {eta!r} is not materialized")
        return p

    def inverse(self, xi: Arrow) -> Arrow:
        inv = self.law.inverse(xi)
        if inv not in self.index:
            raise OutOfWindowError(f"inverse of {xi!r} is not materialized")
        return inv

    def unit_arrow(self, x) -> Arrow:
        return self.law.unit(x)

    def fiber(self, x) -> tuple:
        """Arrows with source ``x``."""
        return self.by_source[x]

    def isotropy(self, x) -> tuple:
        return tuple(xi for xi in self.by_source[x] if xi.range == x)

    def composable_pairs(self):
        for eta in self.arrows:
            for xi in self.by_source[eta.range]:
                yield xi, eta


def build_transformation_groupoid(action: GroupAction, window: int | None = None) -> FiniteGroupoid:
    """Transformation groupoid of ``action``.

    Finite groups contribute all their elements and every image must be a
    materialized unit. Lattice groups contribute the elements of sup-norm
    at most ``window``; arrows whose range falls outside the materialized
    units are left out of the window and any later product that needs
    them raises :class:`OutOfWindowError`.
    """
    G = action.group
    if G.finite:
        elems = G.elements()
    else:
        if window is None:
            raise ValueError("lattice groups need a finite window")
        elems = G.elements(window)
    law = TransformationLaw(action)
    units = action.units
    arrows = []
    missing = 0
    for x in units.points:
        for a in elems:
            y = action.act(a, x)
            if y in units:
                arrows.append(Arrow(x, y, a))
            elif G.finite:
                raise OutOfWindowError(f"action moves {x!r} by {a!r} outside the unit set")
            else:
                missing += 1
    main = None
    if not G.finite:
        main = frozenset(x for x in units.points if units.interior[x]) or None
    return FiniteGroupoid(
        units=units,
        arrows=tuple(arrows),
        law=law,
        main_orbit=main,
        complete=G.finite,
        name=f"X⋊{G.name}" + ("" if G.finite else f"[w={window}]"),
    )


def pair_groupoid(points: Iterable) -> FiniteGroupoid:
    units = UnitSpace.discrete(points)
    pts = units.points
    arrows = tuple(Arrow(x, y, None) for x in pts for y in pts)
    return FiniteGroupoid(units=units, arrows=arrows, law=PairLaw(), name=f"pair[{len(pts)}]")


def reduce_to_subset(g: FiniteGroupoid, L: Iterable) -> FiniteGroupoid:
    """Reduction Ξ(L): arrows with both endpoints in ``L``."""
    keep = frozenset(L) & g.units.point_set
    if not keep:
        raise ValueError("reduction to an empty unit set")
    arrows = tuple(xi for xi in g.arrows if xi.source in keep and xi.range in keep)
    main = None
    if g.main_orbit is not None:
        main = (g.main_orbit & keep) or None
    return FiniteGroupoid(
        units=g.units.restricted(keep),
        arrows=arrows,
        law=g.law,
        haar_weight=g.haar_weight,
        main_orbit=main,
        complete=g.complete,
        name=f"{g.name}|L",
        extension=g.extension,
    )


def restrict_invariant(g: FiniteGroupoid, A: Iterable) -> FiniteGroupoid:
    """Restriction Ξ_A to an invariant subset, with invariance checked."""
    keep = frozenset(A)
    key = ("restrict", keep)
    hit = g._cache.get(key)
    if hit is not None:
        return hit
    if not keep <= g.units.point_set:
        raise ValueError("subset contains points outside the unit space")
    for xi in g.arrows:
        if (xi.source in keep) != (xi.range in keep):
            raise InvarianceError(f"subset not invariant: arrow {xi!r} crosses its boundary", witness=xi)
    sub = reduce_to_subset(g, keep)
    sub = FiniteGroupoid(
        units=sub.units,
        arrows=sub.arrows,
        law=sub.law,
        haar_weight=sub.haar_weight,
        main_orbit=sub.main_orbit,
        complete=sub.complete,
        name=f"{g.name}|A",
        invariant_in=g,
        extension=g.extension,
    )
    g._cache[key] = sub
    return sub


def orbits(g: FiniteGroupoid) -> tuple:
    """Orbit partition, in order of first appearance among the units."""
    hit = g._cache.get("orbits")
    if hit is not None:
        return hit
    parent = {x: x for x in g.units.points}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for xi in g.arrows:
        union(xi.source, xi.range)
    if g.main_orbit:
        it = iter(g.main_orbit)
        first = next(it)
        for x in it:
            union(first, x)
    classes: dict = {}
    for x in g.units.points:
        classes.setdefault(find(x), []).append(x)
    out = tuple(frozenset(v) for v in classes.values())
    g._cache["orbits"] = out
    return out


def orbit_of(g: FiniteGroupoid, x) -> frozenset:
    lookup = g._cache.get("orbit_lookup")
    if lookup is None:
        lookup = {y: O for O in orbits(g) for y in O}
        g._cache["orbit_lookup"] = lookup
    return lookup[x]


@dataclass(frozen=True)
class QuasiOrbit:
    members: frozenset
    generic: frozenset
    nongeneric: frozenset
    generator: Hashable


def quasi_orbit_of(g: FiniteGroupoid, x) -> QuasiOrbit:
    U = g.units
    Q = U.closure(orbit_of(g, x))
    generic = frozenset(y for y in Q if U.closure(orbit_of(g, y)) == Q)
    gen = x if x in generic else next(y for y in U.points if y in generic)
    return QuasiOrbit(members=Q, generic=generic, nongeneric=Q - generic, generator=gen)


@dataclass(frozen=True)
class StandardCheck:
    standard: bool
    main_orbit: frozenset | None

    def __bool__(self):
        return self.standard


def is_standard(g: FiniteGroupoid) -> StandardCheck:
    """Dense open orbit with trivial isotropy, if there is one."""
    hit = g._cache.get("standard")
    if hit is not None:
        return hit
    U = g.units
    result = StandardCheck(False, None)
    for O in orbits(g):
        if U.closure(O) != U.point_set:
            continue
        if not all(U.interior[x] for x in O):
            continue
        if all(len(g.isotropy(x)) == 1 for x in O):
            result = StandardCheck(True, O)
            break
    g._cache["standard"] = result
    return result


def is_locally_closed(g: FiniteGroupoid, x) -> bool:
    """Whether the orbit of ``x`` is open in its closure.

    In specialization terms: no point of the closure outside the orbit has
    an orbit point in its own closure.
    """
    O = orbit_of(g, x)
    Q = g.units.closure(O)
    return all(not (g.units.closure_map[y] & O) for y in Q - O)


def check_groupoid_axioms(g: FiniteGroupoid) -> dict:
    """Check the groupoid axioms on the materialized part.

    Triples whose intermediate products leave the window are counted but
    not tested. Returns a report with ``ok`` and the counters.
    """
    idx = g.index
    failures = []
    tested = skipped = 0
    for xi in g.arrows:
        inv = g.law.inverse(xi)
        if g.law.inverse(inv) != xi:
            failures.append(("involution", xi))
        if g.law.compose(xi, inv) != g.law.unit(xi.range):
            failures.append(("left inverse", xi))
        if g.law.compose(g.law.unit(xi.range), xi) != xi or g.law.compose(xi, g.law.unit(xi.source)) != xi:
            failures.append(("unit", xi))
    for eta in g.arrows:
        for xi in g.by_source[eta.range]:
            xe = g.law.compose(xi, eta)
            if xe.source != eta.source or xe.range != xi.range:
                failures.append(("endpoints", xi, eta))
            for zeta in g.by_range[eta.source]:
                ez = g.law.compose(eta, zeta)
                if xe not in idx or ez not in idx:
                    skipped += 1
                    continue
                tested += 1
                if g.law.compose(xe, zeta) != g.law.compose(xi, ez):
                    failures.append(("associativity", xi, eta, zeta))
    return {"ok": not failures, "tested_triples": tested, "skipped_triples": skipped, "failures": failures[:10]}


def same_groupoid(a: FiniteGroupoid, b: FiniteGroupoid) -> bool:
    if a is b:
        return True
    return (
        type(a.law) is type(b.law)
        and a.haar_weight == b.haar_weight
        and a.units.points == b.units.points
        and a.arrows == b.arrows
    )
