"""Twisted convolution algebra of finitely supported kernels.

A kernel is ``F = G + s·1``: a finitely supported function ``G`` on the
materialized arrows plus a scalar ``s`` for the adjoined unit. Products,
involution, restriction and the homogeneous-component maps between a
twisted groupoid and its μ_N extension all act on this pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping

import numpy as np

from .cocycles import (
    TwoCocycle,
    build_extension_groupoid,
    normalize_gauge,
    power,
    restrict_cocycle,
    roots_of_unity,
    trivial_cocycle,
)
from .errors import AliasingError, NotRootOfUnityError
from .groupoids import Arrow, ExtensionLaw, FiniteGroupoid, restrict_invariant, same_groupoid

__all__ = [
    "TwistedKernel",
    "HomogeneousKernel",
    "make_kernel",
    "unit_kernel",
    "delta_kernel",
    "kernel_allclose",
    "add",
    "scale",
    "convolve",
    "involution",
    "hahn_norm",
    "self_adjoint_residual",
    "restrict",
    "twist_by",
    "delta_embed",
    "kappa_n",
    "inverse_kappa_n",
    "chi_n",
]


@dataclass(frozen=True, eq=False)
class TwistedKernel:
    """``G + s·1`` over a groupoid with a 2-cocycle.

    ``values`` maps materialized arrows to nonzero complex numbers; its
    insertion order fixes the summation order of every operation.
    """

    groupoid: FiniteGroupoid
    cocycle: TwoCocycle
    values: Mapping[Arrow, complex]
    s: complex = 0j
    _cache: dict = field(default_factory=dict, repr=False)

    @cached_property
    def support(self) -> frozenset:
        return frozenset(self.values)

    @cached_property
    def by_source(self) -> dict:
        out: dict = {}
        for xi, v in self.values.items():
            out.setdefault(xi.source, []).append((xi, v))
        return out

    @cached_property
    def by_range(self) -> dict:
        out: dict = {}
        for xi, v in self.values.items():
            out.setdefault(xi.range, []).append((xi, v))
        return out

    def __call__(self, xi: Arrow) -> complex:
        return self.values.get(xi, 0j)

    def absorb_unit(self) -> "TwistedKernel":
        """Move ``s`` onto the unit arrows (always materialized)."""
        if self.s == 0:
            return self
        vals = dict(self.values)
        for x in self.groupoid.units.points:
            u = self.groupoid.unit_arrow(x)
            vals[u] = vals.get(u, 0j) + self.s
        return make_kernel(self.groupoid, self.cocycle, vals, 0j)


def make_kernel(g: FiniteGroupoid, w: TwoCocycle, values: Mapping | Iterable = (), s: complex = 0j) -> TwistedKernel:
    """Build a kernel; zero values are dropped, arrows must be materialized."""
    if not same_groupoid(g, w.groupoid):
        raise ValueError("cocycle lives on another groupoid")
    items = values.items() if isinstance(values, Mapping) else values
    vals = {}
    for xi, v in items:
        if xi not in g.index:
            raise ValueError(f"arrow {xi!r} is not materialized in {g.name}")
        v = complex(v)
        if v != 0:
            vals[xi] = vals.get(xi, 0j) + v
    vals = {k: v for k, v in vals.items() if v != 0}
    return TwistedKernel(g, w, vals, complex(s))


def unit_kernel(g: FiniteGroupoid, w: TwoCocycle, s: complex = 1.0) -> TwistedKernel:
    return TwistedKernel(g, w, {}, complex(s))


def delta_kernel(g: FiniteGroupoid, w: TwoCocycle, xi: Arrow, value: complex = 1.0) -> TwistedKernel:
    return make_kernel(g, w, {xi: value})


def _compatible(f: TwistedKernel, g: TwistedKernel):
    if not same_groupoid(f.groupoid, g.groupoid):
        raise ValueError("kernels live on different groupoids")
    if f.cocycle.phase is not g.cocycle.phase and not (f.cocycle.is_trivial and g.cocycle.is_trivial):
        raise ValueError("kernels carry different cocycles")


def kernel_allclose(f: TwistedKernel, g: TwistedKernel, tol: float = 1e-12) -> float:
    """Maximal pointwise difference (including ``s``); compare with ``tol`` yourself."""
    diff = abs(f.s - g.s)
    for xi in f.support | g.support:
        diff = max(diff, abs(f(xi) - g(xi)))
    return diff


def add(f: TwistedKernel, g: TwistedKernel) -> TwistedKernel:
    _compatible(f, g)
    vals = dict(f.values)
    for xi, v in g.values.items():
        vals[xi] = vals.get(xi, 0j) + v
    return make_kernel(f.groupoid, f.cocycle, vals, f.s + g.s)


def scale(f: TwistedKernel, c: complex) -> TwistedKernel:
    return make_kernel(f.groupoid, f.cocycle, {k: c * v for k, v in f.values.items()}, c * f.s)


def convolve(f: TwistedKernel, g: TwistedKernel) -> TwistedKernel:
    """``(f ⋆ g)(ξ) = Σ_η f(η) g(η⁻¹ξ) ω(η, η⁻¹ξ)`` plus the unit-scalar terms.

    Written with ``ζ = η⁻¹ξ`` the sum runs over composable pairs
    ``(η, ζ)`` in the supports. A product outside the materialized window
    raises :class:`OutOfWindowError`.
    """
    _compatible(f, g)
    G = f.groupoid
    w = G.haar_weight
    omega = f.cocycle.phase
    acc: dict = {}
    for eta, fv in f.values.items():
        for zeta, gv in g.by_range.get(eta.source, ()):
            xi = G.compose(eta, zeta)
            acc[xi] = acc.get(xi, 0j) + w * fv * gv * omega(eta, zeta)
    if g.s != 0:
        for xi, fv in f.values.items():
            acc[xi] = acc.get(xi, 0j) + g.s * fv
    if f.s != 0:
        for xi, gv in g.values.items():
            acc[xi] = acc.get(xi, 0j) + f.s * gv
    return make_kernel(G, f.cocycle, acc, f.s * g.s)


def involution(f: TwistedKernel) -> TwistedKernel:
    """``f*(ξ) = conj(ω(ξ, ξ⁻¹))·conj(f(ξ⁻¹))`` and ``s ↦ conj(s)``."""
    G = f.groupoid
    omega = f.cocycle.phase
    out = {}
    for xi, v in f.values.items():
        inv = G.inverse(xi)
        out[inv] = np.conj(omega(inv, xi)) * np.conj(v)
    return make_kernel(G, f.cocycle, out, np.conj(f.s))


def self_adjoint_residual(f: TwistedKernel) -> float:
    """``max |f*(ξ) - f(ξ)|`` with inverses taken algebraically.

    Works on windowed kernels whose inverses leave the materialized part:
    a missing value counts as zero.
    """
    law = f.groupoid.law
    omega = f.cocycle.phase
    res = abs(f.s - np.conj(f.s))
    for xi, v in f.values.items():
        inv = law.inverse(xi)
        star = np.conj(omega(xi, inv)) * np.conj(f.values.get(inv, 0j))
        res = max(res, abs(star - v))
    return float(res)


def hahn_norm(f: TwistedKernel) -> float:
    """``max_x max(Σ_{d(ξ)=x} |f(ξ)|, Σ_{r(ξ)=x} |f(ξ)|)`` with counting weights.

    The adjoined scalar is not included; it contributes ``|s|`` on top.
    """
    w = f.groupoid.haar_weight
    src: dict = {}
    rng: dict = {}
    for xi, v in f.values.items():
        a = abs(v)
        src[xi.source] = src.get(xi.source, 0.0) + a
        rng[xi.range] = rng.get(xi.range, 0.0) + a
    best = max(list(src.values()) + list(rng.values()), default=0.0)
    return w * best


def restrict(f: TwistedKernel, A: Iterable) -> TwistedKernel:
    """Restriction morphism to an invariant subset; ``s`` is kept."""
    sub = restrict_invariant(f.groupoid, A)
    key = ("restricted_cocycle", id(sub))
    w = f.cocycle._cache.get(key)
    if w is None:
        w = restrict_cocycle(f.cocycle, sub)
        f.cocycle._cache[key] = w
    keep = sub.units.point_set
    vals = {xi: v for xi, v in f.values.items() if xi.source in keep}
    return TwistedKernel(sub, w, vals, f.s)


def twist_by(f: TwistedKernel, sigma: Callable[[Arrow], complex], target: TwoCocycle) -> TwistedKernel:
    """Pointwise multiplication ``ξ ↦ σ(ξ) f(ξ)`` into the algebra of ``target``.

    If ``target = δ¹(σ̄)·ω``, this is a *-isomorphism from the ``ω``-twisted
    algebra onto the ``target``-twisted one.
    """
    s = normalize_gauge(f.groupoid, sigma)
    vals = {xi: s(xi) * v for xi, v in f.values.items()}
    return make_kernel(target.groupoid, target, vals, f.s)


# ---------------------------------------------------------------------------
# homogeneous components on the μ_N extension


@dataclass(frozen=True, eq=False)
class HomogeneousKernel:
    """Kernel on an extension satisfying ``Φ(ts, ξ) = t^{-n} Φ(s, ξ)``."""

    kernel: TwistedKernel
    degree: int

    def __post_init__(self):
        ext = self.kernel.groupoid.extension
        if ext is None:
            raise ValueError("homogeneous kernels live on extension groupoids")
        N = ext.order
        if abs(self.degree) >= N:
            raise AliasingError(f"degree {self.degree} cannot be resolved by mu_{N}")
        roots = roots_of_unity(N)
        base = _collect_base(self.kernel)
        for bxi, row in base.items():
            ref = row[0]
            for k in range(N):
                expected = roots[(-self.degree * k) % N] * ref
                if abs(row[k] - expected) > 1e-13 * max(1.0, abs(ref)):
                    raise ValueError(f"kernel is not homogeneous of degree {self.degree} at {bxi!r}")


def _collect_base(Phi: TwistedKernel) -> dict:
    """Map base arrow → array of values over k = 0..N-1."""
    N = Phi.groupoid.extension.order
    out: dict = {}
    for xi, v in Phi.values.items():
        b = ExtensionLaw.base_arrow(xi)
        row = out.get(b)
        if row is None:
            row = out[b] = np.zeros(N, dtype=complex)
        row[xi.label[0]] = v
    return out


def _extension_for(f: TwistedKernel, N: int) -> FiniteGroupoid:
    if N < 2:
        raise ValueError("extension order must be at least 2")
    w = f.cocycle
    if w.order is not None and N % w.order != 0:
        raise NotRootOfUnityError(f"cocycle of order {w.order} is not mu_{N}-valued")
    return build_extension_groupoid(f.groupoid, w, N)


def _ext_kernel(ext: FiniteGroupoid, values: dict) -> TwistedKernel:
    key = "trivial_cocycle"
    w = ext._cache.get(key)
    if w is None:
        w = trivial_cocycle(ext)
        ext._cache[key] = w
    return make_kernel(ext, w, values)


def inverse_kappa_n(f: TwistedKernel, n: int, ext: FiniteGroupoid) -> HomogeneousKernel:
    """``Φ(t, ξ) = t^{-n} f(ξ)``; the adjoined scalar is placed on unit arrows."""
    N = ext.extension.order
    if abs(n) >= N:
        raise AliasingError(f"degree {n} cannot be resolved by mu_{N}")
    roots = roots_of_unity(N)
    src = f.absorb_unit()
    vals = {}
    for k in range(N):
        c = roots[(-n * k) % N]
        for xi, v in src.values.items():
            vals[ExtensionLaw.lift(k, xi)] = c * v
    return HomogeneousKernel(_ext_kernel(ext, vals), n)


def delta_embed(f: TwistedKernel, N: int) -> HomogeneousKernel:
    """``δ(f)(t, ξ) = t⁻¹ f(ξ)`` on μ_N ×^ω Ξ (degree 1).

    The adjoined scalar ``s`` becomes ``t⁻¹ s`` on the unit arrows, which is
    the image of ``s`` times the indicator of the units.
    """
    return inverse_kappa_n(f, 1, _extension_for(f, N))


def kappa_n(Phi: HomogeneousKernel) -> TwistedKernel:
    """``κⁿ(Φ)(ξ) = Φ(1, ξ)`` as a kernel over ``(Ξ, ωⁿ)``."""
    ext = Phi.kernel.groupoid.extension
    target = power(ext.cocycle, Phi.degree)
    vals = {}
    for xi, v in Phi.kernel.values.items():
        if xi.label[0] == 0:
            vals[ExtensionLaw.base_arrow(xi)] = v
    return make_kernel(ext.base, target, vals)


def chi_n(Phi: TwistedKernel, n: int) -> HomogeneousKernel:
    """``χⁿ(Φ)(s, ξ) = mean_{t ∈ μ_N} Φ(ts, ξ) tⁿ``."""
    data = Phi.groupoid.extension
    if data is None:
        raise ValueError("chi_n acts on kernels over an extension groupoid")
    N = data.order
    if abs(n) >= N:
        raise AliasingError(f"degree {n} cannot be resolved by mu_{N}")
    roots = roots_of_unity(N)
    chars = np.array([roots[(n * j) % N] for j in range(N)])
    vals = {}
    for b, row in _collect_base(Phi).items():
        for k in range(N):
            shifted = np.array([row[(j + k) % N] for j in range(N)])
            v = complex(np.sum(shifted * chars) / N)
            if v != 0:
                vals[ExtensionLaw.lift(k, b)] = v
    return HomogeneousKernel(_ext_kernel(Phi.groupoid, vals), n)
