"""Configured scenarios: groupoid, cocycle, kernel and boundary covering.

Every factory returns a :class:`ScenarioModel`. Its ``instance(radius)``
materializes the unit window ``|x| <= radius`` (plus boundary points) with
the cocycle and the kernel of the scenario; ``operator(N)`` is the vector
representation on an ``N``-site (or ``N × N``) window of the main orbit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Sequence

import numpy as np

from .algebra import TwistedKernel, make_kernel, self_adjoint_residual
from .cocycles import (
    MagneticFieldSpec,
    check_cocycle_identity,
    cocycle_from_table,
    magnetic_cocycle,
    restrict_cocycle,
    trivial_cocycle,
)
from .errors import OutOfWindowError, WindowCapError
from .groupoids import (
    Arrow,
    FiniteGroupoid,
    GroupAction,
    UnitSpace,
    build_transformation_groupoid,
    is_standard,
    pair_groupoid,
    quasi_orbit_of,
    reduce_to_subset,
)
from .groups import cyclic_group, heisenberg_group, integer_lattice
from .representation import OperatorMatrix, direct_sum, regular_rep, vector_rep

__all__ = [
    "BoundaryPiece",
    "ModelInstance",
    "ScenarioModel",
    "two_limit_line",
    "hofstadter",
    "wiener_hopf_line",
    "partial_action_complement",
    "group_bundle",
    "pair_model",
    "twisted_z2",
    "heisenberg_wiener_hopf",
    "FACTORIES",
    "MAX_SITES",
]

MAX_SITES = 8192


@dataclass(frozen=True, eq=False)
class BoundaryPiece:
    """One quasi-orbit of a covering, with its generator and evaluation route.

    ``route`` is ``"symbol"``, ``"bloch"`` or ``"matrix"``; the matrix route
    uses ``basis`` (fiber arrows at the generator) or the whole fiber.
    """

    label: str
    generator: Hashable
    members: frozenset
    route: str
    basis: tuple | None = None


@dataclass(frozen=True, eq=False)
class ModelInstance:
    groupoid: FiniteGroupoid
    cocycle: object
    kernel: TwistedKernel
    action: GroupAction | None = None


@dataclass(frozen=True, eq=False)
class ScenarioModel:
    """A scenario with its window family and declared boundary structure.

    Parameters
    ----------
    builder : callable
        ``builder(radius)`` returns a :class:`ModelInstance`.
    window : callable
        ``window(N)`` returns ``(units, coords)``: the main-orbit basis of
        the size-``N`` window and an integer coordinate array for it.
    radius_for : callable
        Materialization radius needed for the size-``N`` window.
    covering : tuple of BoundaryPiece
        Quasi-orbit covering of the boundary (or, for finite models, the
        representative units).
    covering_kind : str
        ``"boundary"`` when the covering must exhaust the boundary points,
        ``"units"`` when it must exhaust all units.
    neighborhoods : dict
        ``side -> (piece label, predicate(n0) -> unit predicate)``.
    """

    name: str
    params: dict
    builder: Callable[[int], ModelInstance]
    window: Callable[[int], tuple]
    radius_for: Callable[[int], int]
    covering: tuple
    base_point: Hashable = None
    covering_kind: str = "boundary"
    boundary_unital: bool = True
    hermitian: bool = True
    truncation_enabled: bool = True
    truncation_sizes: tuple = (500, 1000, 2000)
    standard: bool = True
    finite: bool = False
    check_radius: int = 4
    flux: tuple | None = None
    neighborhoods: dict = field(default_factory=dict)
    reduction_of: "ScenarioModel | None" = None
    excluded: frozenset = frozenset()
    nested: tuple = ()
    nested_pieces: tuple = ()
    stretch: bool = False
    representatives: tuple = ()
    operator_fn: Callable | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def boundary_radius(self) -> int:
        return self.check_radius

    def instance(self, radius: int) -> ModelInstance:
        hit = self._cache.get(("instance", radius))
        if hit is None:
            hit = self.builder(radius)
            self._cache[("instance", radius)] = hit
        return hit

    def operator(self, N: int, f: TwistedKernel | None = None) -> OperatorMatrix:
        units, coords = self.window(N)
        if len(units) > MAX_SITES:
            raise WindowCapError(f"window of {len(units)} sites exceeds the cap of {MAX_SITES}")
        if f is None:
            f = self.instance(self.radius_for(N)).kernel
        if self.operator_fn is not None:
            return self.operator_fn(N, f)
        return vector_rep(f, units, self.base_point)

    def validate(self) -> dict:
        """Cocycle identity, covering, genericity and standardness checks."""
        inst = self.instance(self.check_radius)
        g = inst.groupoid
        chk = check_cocycle_identity(inst.cocycle.phase, g, order=inst.cocycle.order)
        report = {
            "model": self.name,
            "cocycle_residual": chk.residual,
            "cocycle_normalization": chk.normalization_residual,
            "cocycle_triples": chk.triples,
            "cocycle_ok": chk.ok,
        }
        declared = set()
        generic_ok = True
        for piece in self.covering:
            declared |= set(piece.members)
            if piece.generator not in g.units:
                continue
            Q = quasi_orbit_of(g, piece.generator)
            if piece.generator not in Q.generic or Q.members != piece.members:
                generic_ok = False
        if self.covering_kind == "boundary":
            target = set(g.units.boundary)
        elif self.covering_kind == "units":
            target = set(g.units.points)
        else:
            target = declared
        report["covering_ok"] = declared == target
        report["generators_generic"] = generic_ok
        std = bool(is_standard(g))
        report["standard"] = std
        report["standard_ok"] = std == self.standard
        report["ok"] = all(report[k] for k in ("cocycle_ok", "covering_ok", "generators_generic", "standard_ok"))
        return report


# ---------------------------------------------------------------------------
# lattice helpers


def _line_units(lo: int, hi: int, boundary: Sequence[str]) -> UnitSpace:
    pts = tuple(range(lo, hi + 1)) + tuple(boundary)
    bset = frozenset(boundary)
    closure = {n: frozenset([n]) | bset for n in range(lo, hi + 1)}
    closure.update({b: frozenset([b]) for b in boundary})
    interior = {p: not isinstance(p, str) for p in pts}
    return UnitSpace(pts, closure, interior)


def _line_act(a, x):
    return x if isinstance(x, str) else x + a


def _line_solve(x, y):
    if isinstance(x, str) or isinstance(y, str):
        return None
    return y - x


def _support_radius(coeffs: Mapping) -> int:
    r = 0
    for a in coeffs:
        r = max(r, max(abs(c) for c in a) if isinstance(a, tuple) else abs(a))
    return max(r, 1)


def _centered(N: int) -> range:
    return range(-(N // 2), N - N // 2)


def _line_window(N: int):
    units = tuple(_centered(N))
    return units, np.array(units)[:, None]


def _hermitian_coeffs(coeffs: Mapping) -> bool:
    for a, c in coeffs.items():
        neg = tuple(-x for x in a) if isinstance(a, tuple) else -a
        if abs(coeffs.get(neg, 0) - np.conj(c)) > 1e-14:
            return False
    return True


# ---------------------------------------------------------------------------
# factories


def two_limit_line(v_minus: float = 0.0, v_plus: float = 0.0, hopping: Mapping | None = None,
                   perturbation: Mapping | None = None) -> ScenarioModel:
    """Z compactified by ``-inf`` and ``+inf`` with a step potential.

    The kernel is the hopping at every unit plus ``v(x)`` on unit arrows,
    ``v = v_minus`` for ``x < 0``, ``v_plus`` for ``x >= 0`` and the limits at
    the boundary points; ``perturbation`` adds finitely many on-site values.
    """
    hopping = dict(hopping if hopping is not None else {1: 1.0, -1: 1.0})
    perturbation = dict(perturbation or {})
    r = _support_radius(hopping)
    Z = integer_lattice(1)

    def potential(x):
        if x == "-inf":
            return v_minus
        if x == "+inf":
            return v_plus
        return (v_minus if x < 0 else v_plus) + perturbation.get(x, 0.0)

    def build(R: int) -> ModelInstance:
        units = _line_units(-R, R, ("-inf", "+inf"))
        action = GroupAction(Z, units, _line_act, radius=r, solve=_line_solve)
        g = build_transformation_groupoid(action, window=r)
        w = trivial_cocycle(g)
        vals = {}
        for xi in g.arrows:
            t = hopping.get(xi.label, 0.0)
            if xi.label == 0:
                t += potential(xi.source)
            if t != 0:
                vals[xi] = t
        return ModelInstance(g, w, make_kernel(g, w, vals), action)

    covering = (
        BoundaryPiece("minus", "-inf", frozenset(["-inf"]), "symbol"),
        BoundaryPiece("plus", "+inf", frozenset(["+inf"]), "symbol"),
    )
    neighborhoods = {
        "+": ("plus", lambda n0: (lambda x: x == "+inf" or (not isinstance(x, str) and x >= n0))),
        "-": ("minus", lambda n0: (lambda x: x == "-inf" or (not isinstance(x, str) and x <= -n0))),
    }
    herm = _hermitian_coeffs(hopping) and all(np.isreal(v) for v in perturbation.values())
    return ScenarioModel(
        name="two_limit_line",
        params={"v_minus": v_minus, "v_plus": v_plus, "hopping": hopping, "perturbation": perturbation},
        builder=build,
        window=_line_window,
        radius_for=lambda N: N // 2 + r,
        covering=covering,
        base_point=0,
        hermitian=herm,
        truncation_enabled=herm,
        neighborhoods=neighborhoods,
    )


def _box_units(R: int, boundary: str = "inf") -> UnitSpace:
    span = range(-R, R + 1)
    pts = tuple((i, j) for i in span for j in span) + (boundary,)
    closure = {p: frozenset([p, boundary]) for p in pts[:-1]}
    closure[boundary] = frozenset([boundary])
    interior = {p: p != boundary for p in pts}
    return UnitSpace(pts, closure, interior)


def _plane_act(a, x):
    return x if isinstance(x, str) else (x[0] + a[0], x[1] + a[1])


def _plane_solve(x, y):
    if isinstance(x, str) or isinstance(y, str):
        return None
    return (y[0] - x[0], y[1] - x[1])


def _plane_window(N: int):
    span = _centered(N)
    units = tuple((i, j) for i in span for j in span)
    return units, np.array(units)


def hofstadter(p: int = 1, q: int = 3, anisotropy: float = 1.0, hopping: Mapping | None = None) -> ScenarioModel:
    """Magnetic translations on Z^2 with constant flux ``2πp/q`` per plaquette.

    Units are a box of Z^2 plus one point ``inf`` fixed by all translations;
    the boundary operator at ``inf`` is evaluated by the Bloch reduction.
    """
    if math.gcd(p, q) != 1 or q < 1 or q > 16:
        raise ValueError("need gcd(p, q) = 1 and 1 <= q <= 16 (rational flux only)")
    if hopping is None:
        hopping = {(1, 0): 1.0, (-1, 0): 1.0, (0, 1): anisotropy, (0, -1): anisotropy}
    hopping = {tuple(k): v for k, v in hopping.items()}
    r = _support_radius(hopping)
    alpha = 2 * math.pi * p / q
    Z2 = integer_lattice(2)
    B = MagneticFieldSpec(alpha=alpha)
    check_radius = 3

    def build(R: int) -> ModelInstance:
        units = _box_units(R)
        action = GroupAction(Z2, units, _plane_act, radius=r, solve=_plane_solve)
        g = build_transformation_groupoid(action, window=r)
        limit = None if R <= check_radius else 20_000
        w = magnetic_cocycle(B, action, g, order=2 * q, limit=limit)
        vals = {xi: hopping[xi.label] for xi in g.arrows if xi.label in hopping}
        return ModelInstance(g, w, make_kernel(g, w, vals), action)

    return ScenarioModel(
        name="hofstadter",
        params={"p": p, "q": q, "anisotropy": anisotropy},
        builder=build,
        window=_plane_window,
        radius_for=lambda N: N // 2 + r,
        covering=(BoundaryPiece("inf", "inf", frozenset(["inf"]), "bloch"),),
        base_point=(0, 0),
        hermitian=_hermitian_coeffs(hopping),
        truncation_enabled=_hermitian_coeffs(hopping),
        truncation_sizes=(30, 42, 60),
        check_radius=check_radius,
        flux=(p, q),
    )


def wiener_hopf_line(symbol: Mapping | None = None, edge_phase: Callable[[int], float] | None = None,
                     edge_limit: float = 0.0) -> ScenarioModel:
    """Toeplitz operators: the reduction of ``(Z ∪ {inf}) ⋊ Z`` to ``Z₊ ∪ {inf}``.

    ``edge_phase(j)`` is a 1-D vector potential on the edge ``j → j+1``;
    the kernel then carries Peierls phases ``exp(iΓ_A[x → x+a])`` and the
    boundary kernel the limit phases ``exp(i·edge_limit·a)``.
    """
    symbol = dict(symbol if symbol is not None else {1: 1.0})
    r = _support_radius(symbol)
    Z = integer_lattice(1)

    def gamma(x, y):
        if edge_phase is None or x == y:
            return 0.0
        if y > x:
            return float(sum(edge_phase(j) for j in range(x, y)))
        return -float(sum(edge_phase(j) for j in range(y, x)))

    def build(R: int) -> ModelInstance:
        units = _line_units(-R, R, ("inf",))
        action = GroupAction(Z, units, _line_act, radius=r, solve=_line_solve)
        full = build_transformation_groupoid(action, window=r)
        g = reduce_to_subset(full, [x for x in units.points if isinstance(x, str) or x >= 0])
        w = trivial_cocycle(g)
        vals = {}
        for xi in g.arrows:
            c = symbol.get(xi.label, 0)
            if c == 0:
                continue
            if xi.source == "inf":
                vals[xi] = c * cmath.exp(1j * edge_limit * xi.label) if edge_phase else c
            else:
                vals[xi] = c * cmath.exp(1j * gamma(xi.source, xi.range)) if edge_phase else c
        return ModelInstance(g, w, make_kernel(g, w, vals), action)

    def window(N: int):
        units = tuple(range(N))
        return units, np.array(units)[:, None]

    herm = _hermitian_coeffs(symbol)
    return ScenarioModel(
        name="wiener_hopf_line",
        params={"symbol": symbol, "gauge": edge_phase is not None, "edge_limit": edge_limit},
        builder=build,
        window=window,
        radius_for=lambda N: N + r,
        covering=(BoundaryPiece("inf", "inf", frozenset(["inf"]), "symbol"),),
        base_point=0,
        hermitian=herm,
        truncation_enabled=herm,
        neighborhoods={"+": ("inf", lambda n0: (lambda x: x == "inf" or (not isinstance(x, str) and x >= n0)))},
    )


def partial_action_complement(base: ScenarioModel, K: Sequence) -> ScenarioModel:
    """Reduction of a lattice model to ``L = (M \\ K) ∪ boundary``.

    The kernel is compressed to the arrows of ``Ξ(L)``; the boundary
    covering is inherited unchanged.
    """
    K = frozenset(K)
    if not K:
        return base

    def build(R: int) -> ModelInstance:
        inst = base.instance(R)
        G = inst.groupoid
        if K >= frozenset(x for x in G.units.points if G.units.interior[x]):
            raise ValueError("the excluded set covers the whole window")
        L = [x for x in G.units.points if x not in K]
        g = reduce_to_subset(G, L)
        w = restrict_cocycle(inst.cocycle, g)
        vals = {xi: v for xi, v in inst.kernel.values.items() if xi in g.index}
        return ModelInstance(g, w, make_kernel(g, w, vals, inst.kernel.s), inst.action)

    def window(N: int):
        units, coords = base.window(N)
        keep = [i for i, u in enumerate(units) if u not in K]
        return tuple(units[i] for i in keep), coords[keep]

    base_point = base.base_point
    if base_point in K:
        lattice = [x for x in base.window(4 * len(K) + 8)[0] if x not in K]
        base_point = min(lattice, key=lambda u: (np.sum(np.abs(np.atleast_1d(u))), str(u)))
    return ScenarioModel(
        name=f"{base.name}\\K",
        params={**base.params, "K": sorted(K, key=str)},
        builder=build,
        window=window,
        radius_for=base.radius_for,
        covering=base.covering,
        base_point=base_point,
        boundary_unital=base.boundary_unital,
        hermitian=base.hermitian,
        truncation_enabled=base.truncation_enabled,
        truncation_sizes=base.truncation_sizes,
        check_radius=max(base.check_radius, max((int(np.max(np.abs(np.atleast_1d(k)))) for k in K), default=0) + 2),
        flux=base.flux,
        neighborhoods=base.neighborhoods,
        reduction_of=base,
        excluded=K,
    )


def _unit_sum(f: TwistedKernel, units) -> OperatorMatrix:
    """``⊕_x Π_x(f)`` over ``units``: a faithful representation of a finite groupoid."""
    parts = [regular_rep(f, x) for x in units]
    basis = tuple(b for H in parts for b in H.basis)
    prov = {"representation": "direct sum of regular", "units": [repr(x) for x in units], "size": len(basis)}
    return OperatorMatrix(direct_sum(parts), basis, prov, all(H.hermitian for H in parts))


def group_bundle(m: int = 4, coeffs: Mapping | None = None, twist: complex = 1j) -> ScenarioModel:
    """Two copies of Z_m over ``{e1, e2}`` with kernels ``g`` and ``twist·g``."""
    coeffs = dict(coeffs if coeffs is not None else {0: 0.3, 1: 1.0, 3: 0.5})
    G = cyclic_group(m)
    units = UnitSpace.discrete(["e1", "e2"])
    action = GroupAction(G, units, lambda a, x: x)

    def build(R: int) -> ModelInstance:
        g = build_transformation_groupoid(action)
        w = trivial_cocycle(g)
        vals = {}
        for xi in g.arrows:
            c = coeffs.get(xi.label, 0)
            if c:
                vals[xi] = c if xi.source == "e1" else twist * c
        return ModelInstance(g, w, make_kernel(g, w, vals), action)

    return ScenarioModel(
        name="group_bundle",
        params={"m": m, "coeffs": coeffs, "twist": twist},
        builder=build,
        window=lambda N: ((), np.zeros((0, 1))),
        radius_for=lambda N: 0,
        covering=(
            BoundaryPiece("e1", "e1", frozenset(["e1"]), "matrix"),
            BoundaryPiece("e2", "e2", frozenset(["e2"]), "matrix"),
        ),
        covering_kind="units",
        hermitian=False,
        truncation_enabled=False,
        standard=False,
        finite=True,
        check_radius=0,
        representatives=("e1", "e2"),
        operator_fn=lambda N, f: _unit_sum(f, ("e1", "e2")),
    )


def pair_model(n: int = 6, seed: int = 0, s: complex = 0.0) -> ScenarioModel:
    """Pair groupoid on ``n`` points with a random Hermitian kernel plus ``s``.

    Stands for a finite-rank perturbation of ``s·1``; its boundary algebra
    is the zero algebra, so the essential spectrum is ``{s}``.
    """
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    A = 0.5 * (A + A.conj().T)

    def build(R: int) -> ModelInstance:
        g = pair_groupoid(range(n))
        w = trivial_cocycle(g)
        vals = {xi: A[xi.range, xi.source] for xi in g.arrows}
        return ModelInstance(g, w, make_kernel(g, w, vals, s))

    return ScenarioModel(
        name="pair_model",
        params={"n": n, "seed": seed, "s": s},
        builder=build,
        window=lambda N: (tuple(range(n)), np.arange(n)[:, None]),
        radius_for=lambda N: 0,
        covering=(),
        base_point=0,
        covering_kind="boundary",
        boundary_unital=False,
        hermitian=np.isreal(s),
        truncation_enabled=False,
        finite=True,
        check_radius=0,
        representatives=(0,),
    )


def twisted_z2(coeffs: Mapping | None = None) -> ScenarioModel:
    """Z_2 with the μ_2 cocycle ``ω(1, 1) = −1``."""
    coeffs = dict(coeffs if coeffs is not None else {0: 0.5, 1: 1.0})
    G = cyclic_group(2)
    units = UnitSpace.discrete(["pt"])
    action = GroupAction(G, units, lambda a, x: x)

    def build(R: int) -> ModelInstance:
        g = build_transformation_groupoid(action)
        arrow = {a: Arrow("pt", "pt", a) for a in (0, 1)}
        table = {(arrow[a], arrow[b]): (-1 if a == b == 1 else 1) for a in (0, 1) for b in (0, 1)}
        w = cocycle_from_table(g, table, order=2, name="z2_twist")
        vals = {arrow[a]: c for a, c in coeffs.items()}
        return ModelInstance(g, w, make_kernel(g, w, vals), action)

    return ScenarioModel(
        name="twisted_z2",
        params={"coeffs": coeffs},
        builder=build,
        window=lambda N: ((), np.zeros((0, 1))),
        radius_for=lambda N: 0,
        covering=(BoundaryPiece("pt", "pt", frozenset(["pt"]), "matrix"),),
        covering_kind="units",
        hermitian=False,
        truncation_enabled=False,
        standard=False,
        finite=True,
        check_radius=0,
        representatives=("pt",),
        operator_fn=lambda N, f: regular_rep(f, "pt"),
    )


def _heis_box(ranges) -> tuple:
    import itertools

    return tuple(itertools.product(*(range(lo, hi + 1) for lo, hi in ranges)))


def heisenberg_wiener_hopf(symbol: Mapping | None = None, window: int = 5) -> ScenarioModel:
    """Discrete Heisenberg cone compressions (exploratory scenario).

    ``operator(N)`` compresses left convolution by the symbol to the cone
    box ``{0..N}^3``. The covering uses the box analogs of ``U⁻¹ = N×N×Z``
    and ``V⁻¹ = Z×N×N``; the nested pieces ``N×Z×Z``, ``Z×N×Z`` and ``Z^3``
    lie in the closure of both.
    """
    if symbol is None:
        symbol = {}
        for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            symbol[e] = 1.0
            symbol[tuple(-c for c in e)] = 1.0
    symbol = {tuple(k): v for k, v in symbol.items()}
    r = _support_radius(symbol)
    if window < 2 * r:
        raise ValueError(f"window {window} too small for a symbol of radius {r}")
    H = heisenberg_group()
    units = UnitSpace.discrete(["pt"])
    action = GroupAction(H, units, lambda a, x: x, radius=r)
    w_ = window

    def build(R: int) -> ModelInstance:
        g = build_transformation_groupoid(action, window=r)
        w = trivial_cocycle(g)
        vals = {xi: symbol[xi.label] for xi in g.arrows if xi.label in symbol}
        return ModelInstance(g, w, make_kernel(g, w, vals), action)

    def arrows(box):
        return tuple(Arrow("pt", "pt", h) for h in box)

    pos, full = (0, w_), (-w_, w_)
    pieces = {
        "X12": ((pos, pos, full), "U^-1 = N x N x Z"),
        "X23": ((full, pos, pos), "V^-1 = Z x N x N"),
        "X1": ((pos, full, full), "N x Z x Z"),
        "X2": ((full, pos, full), "Z x N x Z"),
        "X0": ((full, full, full), "Z^3"),
    }
    basis = {k: arrows(_heis_box(rng)) for k, (rng, _) in pieces.items()}
    covering = tuple(BoundaryPiece(k, "pt", frozenset(["pt"]), "matrix", basis[k]) for k in ("X12", "X23"))
    nested_pieces = tuple(BoundaryPiece(k, "pt", frozenset(["pt"]), "matrix", basis[k]) for k in ("X1", "X2", "X0"))

    def cone(N, f):
        return regular_rep(f, "pt", arrows(_heis_box(((0, N),) * 3)))

    def cone_window(N):
        box = _heis_box(((0, N),) * 3)
        return box, np.array(box)

    return ScenarioModel(
        name="heisenberg_wiener_hopf",
        params={"symbol": symbol, "window": window},
        builder=build,
        window=cone_window,
        radius_for=lambda N: 0,
        covering=covering,
        covering_kind="declared",
        hermitian=_hermitian_coeffs(symbol),
        truncation_enabled=False,
        standard=False,
        check_radius=0,
        nested_pieces=nested_pieces,
        nested=(("X1", "X12"), ("X2", "X12"), ("X0", "X12"), ("X1", "X23"), ("X2", "X23"), ("X0", "X23")),
        stretch=True,
        representatives=("pt",),
        operator_fn=cone,
    )


FACTORIES = {
    "two_limit_line": two_limit_line,
    "hofstadter": hofstadter,
    "wiener_hopf_line": wiener_hopf_line,
    "group_bundle": group_bundle,
    "pair_model": pair_model,
    "twisted_z2": twisted_z2,
    "heisenberg_wiener_hopf": heisenberg_wiener_hopf,
}
