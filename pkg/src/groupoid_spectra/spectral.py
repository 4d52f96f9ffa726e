"""Spectra, essential spectra, numerical ranges and Fredholm verdicts.

Two independent routes lead to essential spectra:

* the boundary route takes the union of the spectra of the regular
  representations at the generators of a quasi-orbit covering of the
  boundary, each computed from a symbol (abelian untwisted isotropy), a
  magnetic Bloch reduction (constant rational flux on Z^2) or a windowed
  matrix;
* the truncation route keeps the eigenvalues of growing windows of the
  vector representation whose local counts grow with the window and
  whose eigenvectors are not stuck to the window edge.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar
from scipy.spatial import cKDTree

from .algebra import TwistedKernel
from .errors import NotHermitianError, NumericError, UnsupportedError
from .representation import OperatorMatrix, regular_rep

__all__ = [
    "SpectralSet",
    "ConvexRegion",
    "EigenBackend",
    "TruncationConfig",
    "spectrum",
    "symbol_coefficients",
    "symbol_values",
    "symbol_range",
    "bloch_matrix",
    "magnetic_bloch_range",
    "boundary_clouds",
    "essential_spectrum_boundary",
    "essential_spectrum_truncation",
    "numerical_range",
    "essential_numerical_range",
    "fredholm_check",
    "hausdorff_distance",
    "directed_hausdorff",
    "convex_hull",
    "verify_spectral_decomposition",
    "write_cloud",
]

METHODS = ("eigen", "symbol-range", "bloch", "boundary-formula", "truncation-cloud")
GENERAL_EIG_CAP = 4096
BAND_FILL_STEP = 1e-3


@dataclass(frozen=True, eq=False)
class SpectralSet:
    points: np.ndarray
    method: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).ravel()
        if not np.all(np.isfinite(pts)):
            raise NumericError(f"{self.method} cloud contains NaN or Inf")
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size

    def sorted(self) -> np.ndarray:
        order = np.lexsort((self.points.imag, self.points.real))
        return self.points[order]


@dataclass(frozen=True, eq=False)
class ConvexRegion:
    """Convex polygon (counterclockwise), possibly degenerate to a segment or point."""

    vertices: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=complex).ravel()
        if v.size == 0:
            raise ValueError("empty region")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def edges(self):
        v = self.vertices
        if v.size == 1:
            return []
        if v.size == 2:
            return [(v[0], v[1])]
        return list(zip(v, np.roll(v, -1)))

    def distance(self, z: complex) -> float:
        """0 inside, Euclidean distance to the boundary outside."""
        v = self.vertices
        if v.size == 1:
            return abs(z - v[0])
        if v.size >= 3:
            inside = True
            for a, b in self.edges():
                if _cross(b - a, z - a) < 0:
                    inside = False
                    break
            if inside:
                return 0.0
        return min(_seg_dist(z, a, b) for a, b in self.edges())

    def distances(self, zs) -> np.ndarray:
        """Vectorized :meth:`distance` over an array of points."""
        zs = np.asarray(zs, dtype=complex).ravel()
        v = self.vertices
        if v.size == 1:
            return np.abs(zs - v[0])
        a = v if v.size >= 3 else v[:1]
        b = np.roll(v, -1) if v.size >= 3 else v[1:]
        d = (b - a)[None, :]
        rel = zs[:, None] - a[None, :]
        L = np.abs(d) ** 2
        t = np.clip((rel * d.conj()).real / np.where(L == 0, 1.0, L), 0.0, 1.0)
        out = np.min(np.abs(rel - t * d), axis=1)
        if v.size >= 3:
            cross = d.real * rel.imag - d.imag * rel.real
            out[np.all(cross >= 0, axis=1)] = 0.0
        return out

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        return self.distance(z) <= tol

    def radius(self, center: complex = 0) -> tuple:
        """(max vertex distance, min edge distance) from ``center``."""
        far = float(np.max(np.abs(self.vertices - center)))
        near = min((_seg_dist(center, a, b) for a, b in self.edges()), default=far)
        return far, near

    def hausdorff(self, other: "ConvexRegion") -> float:
        """Hausdorff distance between the two convex sets (attained at vertices)."""
        d1 = max(other.distance(z) for z in self.vertices)
        d2 = max(self.distance(z) for z in other.vertices)
        return max(d1, d2)


def _cross(u: complex, w: complex) -> float:
    return u.real * w.imag - u.imag * w.real


def _seg_dist(z, a, b) -> float:
    d = b - a
    L = abs(d) ** 2
    if L == 0:
        return abs(z - a)
    t = min(1.0, max(0.0, ((z - a) * d.conjugate()).real / L))
    return abs(z - (a + t * d))


def convex_hull(points, tol: float = 1e-14) -> ConvexRegion:
    """Monotone-chain hull; collinear points within ``tol``·scale are dropped."""
    pts = np.unique(np.asarray(points, dtype=complex).ravel())
    if pts.size == 0:
        raise ValueError("hull of an empty set")
    order = np.lexsort((pts.imag, pts.real))
    P = [complex(p) for p in pts[order]]
    if len(P) <= 2:
        return ConvexRegion(np.array(P))
    scale = max(1.0, max(abs(p) for p in P))
    eps = tol * scale * scale

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-1] - out[-2], p - out[-2]) <= eps:
                out.pop()
            out.append(p)
        return out

    lower = half(P)
    upper = half(reversed(P))
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and abs(hull[0] - hull[1]) == 0:
        hull = hull[:1]
    return ConvexRegion(np.array(hull))


def _real_if_exact(M):
    # real symmetric LAPACK paths are several times faster
    if np.iscomplexobj(M) and not np.any(M.imag):
        return M.real
    return M


class EigenBackend:
    """Dense LAPACK eigensolvers; deterministic for identical inputs.

    Eigenvectors use the relatively robust representation driver, which is
    several times faster than divide and conquer on a single core.
    """

    def eigvalsh(self, M):
        return np.linalg.eigvalsh(_real_if_exact(M))

    def eigh(self, M):
        return scipy.linalg.eigh(_real_if_exact(M), driver="evr")

    def eigvals(self, M):
        if M.shape[0] > GENERAL_EIG_CAP:
            raise NumericError(f"general eigensolver limited to n <= {GENERAL_EIG_CAP}, got {M.shape[0]}")
        return np.linalg.eigvals(M)


DEFAULT_BACKEND = EigenBackend()


def spectrum(H: OperatorMatrix, backend: EigenBackend = DEFAULT_BACKEND) -> SpectralSet:
    M = H.matrix
    try:
        if H.hermitian:
            ev = backend.eigvalsh(M).astype(complex)
        else:
            ev = backend.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed on {H.provenance}: {exc}") from exc
    return SpectralSet(ev, "eigen", {"size": H.n, "hermitian": H.hermitian, "provenance": H.provenance})


# ---------------------------------------------------------------------------
# symbols and Bloch reductions


def symbol_coefficients(f: TwistedKernel, x) -> dict:
    """Kernel restricted to the isotropy group at ``x``, as ``{label: value}``.

    Requires an abelian group and a cocycle that is 1 on every pair of
    isotropy arrows in the support.
    """
    g = f.groupoid
    group = getattr(g.law, "group", None)
    if group is None or not group.abelian or group.finite:
        raise UnsupportedError("symbol route needs a lattice isotropy group Z^d; use the matrix route")
    iso = [(xi, v) for xi, v in f.by_source.get(x, ()) if xi.range == x]
    omega = f.cocycle.phase
    for a, _ in iso:
        for b, _ in iso:
            if abs(omega(a, b) - 1) > 1e-12:
                raise UnsupportedError("cocycle is nontrivial on the isotropy group; use the bloch or matrix route")
    return {xi.label: v for xi, v in iso}


def _dual_grid(m: int, dim: int) -> np.ndarray:
    t = 2 * np.pi * np.arange(m) / m
    if dim == 1:
        return t[:, None]
    mesh = np.meshgrid(*([t] * dim), indexing="ij")
    return np.stack([c.ravel() for c in mesh], axis=1)


def _as_vec(a) -> tuple:
    return (a,) if isinstance(a, (int, np.integer)) else tuple(a)


def symbol_values(coeffs: dict, thetas: np.ndarray, s: complex = 0) -> np.ndarray:
    """``Σ_a c_a exp(−i a·θ) + s`` at the rows of ``thetas``."""
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim == 1:
        thetas = thetas[:, None]
    out = np.full(thetas.shape[0], complex(s))
    for a, c in coeffs.items():
        vec = np.array(_as_vec(a), dtype=float)
        out += c * np.exp(-1j * (thetas @ vec))
    return out


def symbol_range(coeffs: dict, m: int = 512, dim: int | None = None, s: complex = 0) -> SpectralSet:
    """Samples of the Fourier transform on an ``m``-point (per axis) grid of the dual torus."""
    if dim is None:
        dim = max((len(_as_vec(a)) for a in coeffs), default=1)
    vals = symbol_values(coeffs, _dual_grid(m, dim), s)
    meta = {"grid": m, "dim": dim}
    if np.max(np.abs(vals.imag), initial=0.0) <= 1e-12:
        vals, meta["bands"] = _fill_bands(vals.real[:, None])
    return SpectralSet(vals, "symbol-range", meta)


def _fill_bands(ev: np.ndarray, step: float = BAND_FILL_STEP):
    """Samples plus a uniform fill of each band interval.

    A continuous real function on the (connected) torus has an interval as
    its image, so ``[min, max]`` of the samples of a band lies in the range.
    """
    bands = []
    parts = [ev.ravel()]
    for j in range(ev.shape[1]):
        lo, hi = float(ev[:, j].min()), float(ev[:, j].max())
        bands.append([lo, hi])
        parts.append(np.linspace(lo, hi, int(math.ceil((hi - lo) / step)) + 1))
    return np.concatenate(parts).astype(complex), bands


def bloch_matrix(coeffs: dict, p: int, q: int, k: tuple) -> np.ndarray:
    """Landau-gauge Bloch matrix at momentum ``k`` for flux ``2πp/q``.

    ``H(k)[r, (r − b₁) mod q] += c_b · exp(iα(r·b₂ − b₁b₂/2)) · exp(−ik·b)``.
    """
    alpha = 2 * np.pi * p / q
    H = np.zeros((q, q), dtype=complex)
    for b, c in coeffs.items():
        b1, b2 = b
        ph_k = np.exp(-1j * (k[0] * b1 + k[1] * b2))
        for r in range(q):
            H[r, (r - b1) % q] += c * np.exp(1j * alpha * (r * b2 - 0.5 * b1 * b2)) * ph_k
    return H


def _bloch_stack(coeffs, p, q, m):
    ks = _dual_grid(m, 2)
    return ks, np.stack([bloch_matrix(coeffs, p, q, tuple(k)) for k in ks])


def magnetic_bloch_range(coeffs: dict, p: int, q: int, m: int = 32, s: complex = 0,
                         hermitian: bool | None = None) -> SpectralSet:
    """Union over an ``m × m`` momentum grid of the eigenvalues of the Bloch matrices."""
    _, stack = _bloch_stack(coeffs, p, q, m)
    stack = stack + s * np.eye(q)
    if hermitian is None:
        hermitian = bool(np.max(np.abs(stack - np.conj(np.swapaxes(stack, 1, 2)))) <= 1e-12)
    meta = {"grid": m, "p": p, "q": q}
    if hermitian:
        pts, meta["bands"] = _fill_bands(np.linalg.eigvalsh(stack))
    else:
        pts = np.linalg.eigvals(stack).ravel()
    return SpectralSet(pts, "bloch", meta)


# ---------------------------------------------------------------------------
# boundary route


def _model_kernel(model, f):
    if f is not None:
        return f
    return model.instance(model.boundary_radius).kernel


def _piece_cloud(model, f, piece, grid) -> SpectralSet:
    if piece.route == "symbol":
        coeffs = symbol_coefficients(f, piece.generator)
        return symbol_range(coeffs, grid.get("symbol", 512))
    if piece.route == "bloch":
        coeffs = symbol_coefficients_twisted(f, piece.generator)
        p, q = model.flux
        return magnetic_bloch_range(coeffs, p, q, grid.get("bloch", 32))
    if piece.route == "matrix":
        H = regular_rep(f, piece.generator, piece.basis)
        return spectrum(H)
    raise ValueError(f"unknown route {piece.route!r}")


def symbol_coefficients_twisted(f: TwistedKernel, x) -> dict:
    """Isotropy coefficients without the untwisted-cocycle requirement."""
    return {xi.label: v for xi, v in f.by_source.get(x, ()) if xi.range == x}


def boundary_clouds(model, f: TwistedKernel | None = None, grid: dict | None = None,
                    nested: bool = False) -> dict:
    """Per-piece spectra of the boundary operators, keyed by piece label.

    ``nested=True`` adds the pieces declared only for containment checks.
    """
    f = _model_kernel(model, f)
    grid = dict(grid or {})
    pieces = tuple(model.covering) + (tuple(model.nested_pieces) if nested else ())
    return {piece.label: _piece_cloud(model, f, piece, grid) for piece in pieces}


def essential_spectrum_boundary(model, f: TwistedKernel | None = None, grid: dict | None = None) -> SpectralSet:
    """Union of boundary spectra over the declared covering, plus ``{s}`` for non-unital boundaries."""
    if model.covering is None:
        raise ValueError(f"model {model.name} declares no boundary covering")
    f = _model_kernel(model, f)
    clouds = boundary_clouds(model, f, grid)
    parts = [c.points for c in clouds.values()]
    if not model.boundary_unital:
        parts.append(np.array([f.s]))
    pts = np.concatenate(parts) if parts else np.zeros(0, dtype=complex)
    meta = {
        "pieces": {k: {"method": c.method, **{kk: vv for kk, vv in c.meta.items() if kk != "provenance"}}
                   for k, c in clouds.items()},
        "unit_scalar_included": not model.boundary_unital,
    }
    return SpectralSet(pts, "boundary-formula", meta)


# ---------------------------------------------------------------------------
# truncation route


@dataclass(frozen=True)
class TruncationConfig:
    sizes: tuple | None = None
    stability_fraction: float = 0.5
    cluster_tol: float = 0.05
    edge_fraction: float = 0.1
    edge_mass: float = 0.5


def _edge_mask(coords: np.ndarray, fraction: float) -> np.ndarray:
    """Sites within ``fraction`` of the window width from any face of the bounding box."""
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    width = np.maximum(hi - lo + 1, 1)
    depth = np.minimum(coords - lo, hi - coords) + 1
    return np.any(depth <= fraction * width, axis=1)


def _local_counts(ev_sorted: np.ndarray, centers: np.ndarray, tol: float) -> np.ndarray:
    left = np.searchsorted(ev_sorted, centers - tol, side="left")
    right = np.searchsorted(ev_sorted, centers + tol, side="right")
    return right - left


def essential_spectrum_truncation(model, f: TwistedKernel | None = None,
                                  config: TruncationConfig = TruncationConfig()) -> SpectralSet:
    """Eigenvalue cloud of the vector representation that behaves like essential spectrum.

    An eigenvalue of the largest window survives when

    * every window in the top ``stability_fraction`` of sizes has an
      eigenvalue within ``cluster_tol``;
    * the number of eigenvalues within ``cluster_tol`` grows from the
      smallest to the largest window (isolated eigenvalues keep a
      constant count and are reported as discrete);
    * at most ``edge_mass`` of its eigenvector lies in the outer
      ``edge_fraction`` of the window.
    """
    sizes = sorted(set(int(n) for n in (config.sizes or model.truncation_sizes)))
    if len(sizes) < 2:
        raise ValueError("the truncation route needs at least two window sizes")
    spectra = []
    top = None
    for N in sizes:
        H = model.operator(N, f)
        if not H.hermitian:
            raise NotHermitianError("the truncation route is restricted to Hermitian kernels")
        if N == sizes[-1]:
            ev, vec = DEFAULT_BACKEND.eigh(H.matrix)
            top = (ev, vec, model.window(N)[1])
        else:
            ev = DEFAULT_BACKEND.eigvalsh(H.matrix)
        spectra.append(np.sort(ev))
    ev, vec, coords = top
    tol = config.cluster_tol
    k_top = max(1, math.ceil(config.stability_fraction * len(sizes)))
    persistent = np.ones(ev.size, dtype=bool)
    for s in spectra[-k_top:]:
        persistent &= _local_counts(s, ev, tol) > 0
    c_small = _local_counts(spectra[0], ev, tol)
    c_large = _local_counts(spectra[-1], ev, tol)
    growing = (c_large >= 2) & (c_large > c_small)
    edge = _edge_mask(np.asarray(coords).reshape(ev.size, -1), config.edge_fraction)
    edge_mass = np.sum(np.abs(vec[edge, :]) ** 2, axis=0)
    not_edge = edge_mass <= config.edge_mass
    keep = persistent & growing & not_edge
    discrete = ev[persistent & ~growing & not_edge]
    meta = {
        "sizes": sizes,
        "cluster_tol": tol,
        "stability_fraction": config.stability_fraction,
        "edge_fraction": config.edge_fraction,
        "edge_mass": config.edge_mass,
        "discrete": [float(x) for x in discrete],
        "edge_rejected": int(np.sum(persistent & growing & ~not_edge)),
        "kept": int(np.sum(keep)),
    }
    return SpectralSet(ev[keep].astype(complex), "truncation-cloud", meta)


# ---------------------------------------------------------------------------
# numerical ranges


def _as_matrix(H) -> np.ndarray:
    return H.matrix if isinstance(H, OperatorMatrix) else np.asarray(H, dtype=complex)


def _support_points(M, thetas, chunk):
    """Boundary point ``⟨Mu, u⟩`` and support value for each direction."""
    Mh = M.conj().T
    pts = np.empty(len(thetas), dtype=complex)
    support = np.empty(len(thetas))
    for start in range(0, len(thetas), chunk):
        th = thetas[start:start + chunk]
        ph = np.exp(-1j * th)[:, None, None]
        K = 0.5 * (ph * M[None] + np.conj(ph) * Mh[None])
        w, V = np.linalg.eigh(K)
        u = V[:, :, -1]
        Mu = u @ M.T
        pts[start:start + chunk] = np.einsum("ij,ij->i", u.conj(), Mu)
        support[start:start + chunk] = w[:, -1]
    return pts, support


def numerical_range(H, n_angles: int = 360, chunk: int | None = None,
                    refine_tol: float = 1e-9, refine_budget: int | None = None) -> ConvexRegion:
    """Inscribed polygon from a sweep of supporting lines.

    For each angle θ the top eigenvector ``u`` of ``Re(e^{−iθ}H)`` gives the
    boundary point ``⟨Hu, u⟩``. A uniform sweep misses corners whose normal
    cone is narrower than the angle step, so intervals whose circumscribed
    corner lies farther than ``refine_tol`` from the polygon are bisected,
    worst first, adding at most ``refine_budget`` angles (default
    ``n_angles``; 0 disables). ``meta["outer_gap"]`` bounds the distance
    from the polygon to the true range.
    """
    if n_angles < 8:
        raise ValueError("n_angles must be at least 8")
    M = _as_matrix(H)
    n = M.shape[0]
    if chunk is None:
        chunk = max(1, min(n_angles, int(4e7 // max(1, 16 * n * n))))
    budget = n_angles if refine_budget is None else refine_budget
    thetas = 2 * np.pi * np.arange(n_angles) / n_angles
    pts, support = _support_points(M, thetas, chunk)
    added = 0
    while True:
        region = convex_hull(pts)
        gaps = _corner_gaps(thetas, support, region)
        bad = np.flatnonzero(gaps > refine_tol)
        if bad.size == 0 or added >= budget:
            break
        bad = bad[np.argsort(-gaps[bad], kind="stable")][:budget - added]
        nxt = thetas[(bad + 1) % len(thetas)] + np.where(bad + 1 == len(thetas), 2 * np.pi, 0.0)
        mids = 0.5 * (thetas[bad] + nxt)
        new_pts, new_sup = _support_points(M, mids, chunk)
        added += mids.size
        thetas = np.concatenate([thetas, mids])
        pts = np.concatenate([pts, new_pts])
        support = np.concatenate([support, new_sup])
        order = np.argsort(thetas, kind="stable")
        thetas, pts, support = thetas[order], pts[order], support[order]
    meta = {"n_angles": n_angles, "refined_angles": added, "outer_gap": float(gaps.max(initial=0.0))}
    return ConvexRegion(region.vertices, meta)


def _corner_gaps(thetas, support, region: ConvexRegion) -> np.ndarray:
    """Distance from each corner of the circumscribed polygon to the inscribed one."""
    t1, t2 = thetas, np.roll(thetas, -1)
    h1, h2 = support, np.roll(support, -1)
    det = np.sin(t2 - t1)
    ok = np.abs(det) >= 1e-15
    safe = np.where(ok, det, 1.0)
    x = (h1 * np.sin(t2) - h2 * np.sin(t1)) / safe
    y = (h2 * np.cos(t1) - h1 * np.cos(t2)) / safe
    return np.where(ok, region.distances(x + 1j * y), 0.0)


def _symbol_curve(coeffs, dim, m):
    return symbol_values(coeffs, _dual_grid(m, dim))


def essential_numerical_range(model, f: TwistedKernel | None = None, n_angles: int = 360,
                              grid: dict | None = None) -> ConvexRegion:
    """Hull of ``{s}`` (non-unital boundaries) and the numerical ranges of the boundary operators."""
    f = _model_kernel(model, f)
    grid = dict(grid or {})
    pts = []
    for piece in model.covering:
        if piece.route == "symbol":
            coeffs = symbol_coefficients(f, piece.generator)
            dim = max((len(_as_vec(a)) for a in coeffs), default=1)
            pts.append(_symbol_curve(coeffs, dim, grid.get("symbol", 512)))
        elif piece.route == "bloch":
            coeffs = symbol_coefficients_twisted(f, piece.generator)
            p, q = model.flux
            _, stack = _bloch_stack(coeffs, p, q, grid.get("bloch", 32))
            for Hk in stack:
                pts.append(numerical_range(Hk, min(n_angles, 64), refine_budget=0).vertices)
        elif piece.route == "matrix":
            pts.append(numerical_range(regular_rep(f, piece.generator, piece.basis), n_angles).vertices)
    if not model.boundary_unital:
        pts.append(np.array([f.s]))
    region = convex_hull(np.concatenate(pts))
    return ConvexRegion(region.vertices, {"n_angles": n_angles, "pieces": [p.label for p in model.covering]})


# ---------------------------------------------------------------------------
# Fredholm verdicts


FREDHOLM_TOL = 1e-8


def _symbol_margin(coeffs, lam, m=1024):
    dim = max((len(_as_vec(a)) for a in coeffs), default=1)
    if dim != 1:
        vals = symbol_values(coeffs, _dual_grid(int(round(m ** 0.5)) * 2, dim))
        return float(np.min(np.abs(vals - lam)))
    t = 2 * np.pi * np.arange(m) / m
    vals = np.abs(symbol_values(coeffs, t[:, None]) - lam)
    best = float(vals.min())
    h = 2 * np.pi / m
    for i in np.argsort(vals)[:4]:
        res = minimize_scalar(
            lambda th: abs(symbol_values(coeffs, np.array([[th]]))[0] - lam),
            bounds=(t[i] - h, t[i] + h), method="bounded", options={"xatol": 1e-12},
        )
        best = min(best, float(res.fun))
    return best


def fredholm_check(model, lam: complex, f: TwistedKernel | None = None, tol: float = FREDHOLM_TOL,
                   grid: dict | None = None) -> dict:
    """Verdict ``λ ∉ sp_ess`` with per-piece certificates.

    Each certificate is the smallest ``|symbol − λ|`` (symbol route), the
    smallest singular value of ``H(k) − λ`` over the momentum grid (bloch)
    or of ``H_x − λ`` on the window (matrix).
    """
    f = _model_kernel(model, f)
    grid = dict(grid or {})
    certs = []
    for piece in model.covering:
        if piece.route == "symbol":
            val = _symbol_margin(symbol_coefficients(f, piece.generator), lam)
            kind = "min |symbol - lambda|"
        elif piece.route == "bloch":
            p, q = model.flux
            _, stack = _bloch_stack(symbol_coefficients_twisted(f, piece.generator), p, q, grid.get("bloch", 32))
            sv = np.linalg.svd(stack - lam * np.eye(q), compute_uv=False)
            val = float(sv.min())
            kind = "min sigma_min(H(k) - lambda)"
        else:
            M = regular_rep(f, piece.generator, piece.basis).matrix
            val = float(np.linalg.svd(M - lam * np.eye(M.shape[0]), compute_uv=False).min())
            kind = "sigma_min(H_x - lambda)"
        certs.append({"piece": piece.label, "route": piece.route, "certificate": kind, "value": val})
    if not model.boundary_unital:
        certs.append({"piece": "unit scalar", "route": "scalar", "certificate": "|s - lambda|",
                      "value": float(abs(f.s - lam))})
    margin = min((c["value"] for c in certs), default=math.inf)
    return {"lambda": complex(lam), "fredholm": margin > tol, "margin": margin, "tol": tol, "certificates": certs}


# ---------------------------------------------------------------------------
# distances


def _cloud(A) -> np.ndarray:
    if isinstance(A, SpectralSet):
        pts = A.points
    elif isinstance(A, ConvexRegion):
        pts = A.vertices
    else:
        pts = np.asarray(A, dtype=complex).ravel()
    if pts.size == 0:
        raise ValueError("Hausdorff distance of an empty set")
    return np.column_stack([pts.real, pts.imag])


def directed_hausdorff(A, B) -> float:
    """``max_{a∈A} min_{b∈B} |a − b|``."""
    a, b = _cloud(A), _cloud(B)
    d, _ = cKDTree(b).query(a, k=1)
    return float(np.max(d))


def hausdorff_distance(A, B) -> float:
    return max(directed_hausdorff(A, B), directed_hausdorff(B, A))


# ---------------------------------------------------------------------------
# decomposition report


def verify_spectral_decomposition(model, f: TwistedKernel | None = None,
                                  config: TruncationConfig = TruncationConfig(),
                                  hausdorff_tol: float = 0.05, nested_tol: float = 0.05) -> dict:
    """Report comparing the boundary route with independent evidence.

    ``a``: Hausdorff distance to the truncation cloud (Hermitian only).
    ``b``: exact equality of boundary clouds with the model this one is a
    reduction of. ``c``: containment of nested boundary pieces.
    """
    report: dict = {"model": model.name}
    ess = essential_spectrum_boundary(model, f)
    if model.hermitian and model.truncation_enabled:
        trunc = essential_spectrum_truncation(model, f, config)
        dist = hausdorff_distance(ess, trunc)
        report["a"] = {"hausdorff": dist, "tol": hausdorff_tol, "pass": dist <= hausdorff_tol,
                       "discrete": trunc.meta["discrete"]}
    else:
        report["a"] = {"skipped": "non-Hermitian kernel or truncation disabled"}
    if model.reduction_of is not None:
        other = essential_spectrum_boundary(model.reduction_of)
        same = ess.points.shape == other.points.shape and bool(np.array_equal(ess.points, other.points))
        report["b"] = {"identical": same, "pass": same}
    if model.nested:
        clouds = boundary_clouds(model, f, nested=True)
        checks = []
        for inner, outer in model.nested:
            d = directed_hausdorff(clouds[inner], clouds[outer])
            checks.append({"inner": inner, "outer": outer, "directed_hausdorff": d,
                           "tol": nested_tol, "pass": d <= nested_tol})
        report["c"] = checks
    verdicts = [report["a"].get("pass", True), report.get("b", {}).get("pass", True)]
    verdicts += [c["pass"] for c in report.get("c", [])]
    report["pass"] = all(verdicts)
    return report


def write_cloud(obj, path, meta: dict | None = None) -> None:
    """CSV of ``re,im`` rows plus a ``.json`` sidecar with the metadata."""
    if isinstance(obj, SpectralSet):
        pts, info = obj.sorted(), {"method": obj.method, **obj.meta}
    else:
        pts, info = obj.vertices, {"method": "convex-region", **obj.meta}
    info.update(meta or {})
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["re", "im"])
        for z in pts:
            wr.writerow([repr(float(z.real)), repr(float(z.imag))])
    with open(str(path) + ".json", "w") as fh:
        json.dump(jsonable(info), fh, indent=2, sort_keys=True)


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    return x
