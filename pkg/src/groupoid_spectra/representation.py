"""Matrices of twisted convolution operators.

``regular_rep`` realizes left twisted convolution on a finite set of fiber
arrows. Its matrix is read off the product formula with ``η`` the column
and ``ζ = ξη⁻¹`` the kernel arrow::

    M[ξ, η] = w · f(ζ) · ω(ζ, η),    ξ = ζη,

plus ``s`` on the diagonal. On a truncated fiber the matrix is the
compression of the infinite one; contributions that land outside the
basis are counted in the provenance record instead of being reported as
errors.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .algebra import TwistedKernel, delta_embed, self_adjoint_residual
from .cocycles import circulation, roots_of_unity
from .errors import NotStandardError, OutOfWindowError
from .groupoids import Arrow, ExtensionLaw, is_standard

__all__ = [
    "TruncationWindow",
    "OperatorMatrix",
    "regular_rep",
    "vector_rep",
    "reduced_norm",
    "extension_diagram_check",
    "gauge_conjugate",
    "compress",
    "peierls_matrix",
    "connecting_gauge",
    "direct_sum",
    "write_matrix_csv",
    "HERMITIAN_TOL",
]

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class TruncationWindow:
    """Ordered basis of fiber arrows (or main-orbit units) at ``base``."""

    basis: tuple
    base: Hashable
    bounds: tuple | None = None

    def __post_init__(self):
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("window basis has repeated entries")

    def __len__(self):
        return len(self.basis)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    matrix: np.ndarray
    basis: tuple
    provenance: dict = field(default_factory=dict)
    hermitian: bool = False

    def __post_init__(self):
        self.matrix.setflags(write=False)
        if self.hermitian:
            asym = float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))
            if asym > HERMITIAN_TOL:
                raise ValueError(f"matrix flagged Hermitian but ||H - H*||_max = {asym:.2e}")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def index(self) -> dict:
        return {b: i for i, b in enumerate(self.basis)}


def _hermitian_flag(f: TwistedKernel, M: np.ndarray) -> bool:
    if self_adjoint_residual(f) > HERMITIAN_TOL:
        return False
    return float(np.max(np.abs(M - M.conj().T), initial=0.0)) <= HERMITIAN_TOL


def _assemble(f: TwistedKernel, basis: Sequence[Arrow]):
    g = f.groupoid
    law = g.law
    w = g.haar_weight
    omega = f.cocycle.phase
    idx = {b: i for i, b in enumerate(basis)}
    n = len(basis)
    M = np.zeros((n, n), dtype=complex)
    dropped = 0
    by_source = f.by_source
    for j, eta in enumerate(basis):
        for zeta, v in by_source.get(eta.range, ()):
            i = idx.get(law.compose(zeta, eta))
            if i is None:
                dropped += 1
                continue
            M[i, j] += w * v * omega(zeta, eta)
    if f.s != 0:
        M[np.diag_indices(n)] += f.s
    return M, dropped


def regular_rep(f: TwistedKernel, x, window: TruncationWindow | Sequence[Arrow] | None = None) -> OperatorMatrix:
    """Matrix of ``Π_x(f)`` on a basis of arrows with source ``x``.

    With ``window=None`` the whole materialized fiber is used, which is
    exact for finite groupoids. Basis arrows need not be materialized; the
    kernel's support must be.
    """
    g = f.groupoid
    if x not in g.units:
        raise OutOfWindowError(f"unit {x!r} is not materialized")
    if window is None:
        basis = g.fiber(x)
    elif isinstance(window, TruncationWindow):
        basis = window.basis
    else:
        basis = tuple(window)
    for b in basis:
        if b.source != x:
            raise ValueError(f"basis arrow {b!r} is not in the fiber over {x!r}")
    M, dropped = _assemble(f, basis)
    prov = {
        "representation": "regular",
        "unit": repr(x),
        "size": len(basis),
        "truncated": window is not None,
        "dropped_contributions": dropped,
    }
    return OperatorMatrix(M, tuple(basis), prov, _hermitian_flag(f, M))


def vector_rep(f: TwistedKernel, units: Sequence, z=None) -> OperatorMatrix:
    """Matrix of ``Π₀(f)`` on ``ℓ²`` of a finite set of main-orbit units.

    ``H[m, n] = Σ w·f(ζ)·ω(ζ, η_n)`` over kernel arrows ``ζ`` from ``n`` to
    ``m``, where ``η_n`` is the arrow from the base point ``z`` to ``n``.
    This is ``Π_z(f)`` relabelled by ``r``.
    """
    g = f.groupoid
    std = is_standard(g)
    if not std:
        raise NotStandardError(f"{g.name} has no dense open orbit with trivial isotropy")
    units = tuple(units)
    main = std.main_orbit
    for u in units:
        if u not in main:
            raise ValueError(f"{u!r} is not a main-orbit unit")
    z = units[0] if z is None else z
    if z not in main:
        raise ValueError(f"base point {z!r} is not on the main orbit")
    law = g.law
    w = g.haar_weight
    omega = f.cocycle.phase
    idx = {u: i for i, u in enumerate(units)}
    n = len(units)
    H = np.zeros((n, n), dtype=complex)
    dropped = 0
    by_source = f.by_source
    for j, u in enumerate(units):
        eta = law.connect(z, u)
        if eta is None:
            raise ValueError(f"no arrow from {z!r} to {u!r}")
        for zeta, v in by_source.get(u, ()):
            i = idx.get(zeta.range)
            if i is None:
                dropped += 1
                continue
            H[i, j] += w * v * omega(zeta, eta)
    if f.s != 0:
        H[np.diag_indices(n)] += f.s
    prov = {
        "representation": "vector",
        "base_point": repr(z),
        "size": n,
        "dropped_contributions": dropped,
    }
    return OperatorMatrix(H, units, prov, _hermitian_flag(f, H))


def direct_sum(mats: Sequence[OperatorMatrix]) -> np.ndarray:
    n = sum(m.n for m in mats)
    out = np.zeros((n, n), dtype=complex)
    k = 0
    for m in mats:
        out[k:k + m.n, k:k + m.n] = m.matrix
        k += m.n
    return out


def reduced_norm(f: TwistedKernel, units: Iterable, window: Callable | None = None):
    """``max_x ‖Π_x(f)‖`` over ``units``; returns ``(norm, witness unit)``.

    ``window(x)`` supplies the fiber basis for lattice models; ``None``
    uses whole materialized fibers. Ties keep the first unit.
    """
    units = tuple(units)
    if not units:
        raise ValueError("reduced_norm needs at least one unit")
    best, witness = -1.0, None
    for x in units:
        H = regular_rep(f, x, None if window is None else window(x))
        nrm = float(np.linalg.norm(H.matrix, 2)) if H.n else abs(f.s)
        if nrm > best:
            best, witness = nrm, x
    return best, witness


def extension_diagram_check(f: TwistedKernel, x, N: int, window: Sequence[Arrow] | None = None) -> float:
    """``max |Π^ω_x(δ(f)) − S ⊗ Π_x(f)|`` on ``ℓ²(μ_N × fiber)``.

    ``S`` is the projection onto ``t ↦ t⁻¹/√N``; the extended basis is
    ordered k-major, matching ``numpy.kron``.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    base = regular_rep(f, x, window)
    Phi = delta_embed(f, N).kernel
    ext_basis = tuple(ExtensionLaw.lift(k, b) for k in range(N) for b in base.basis)
    big = regular_rep(Phi, x, ext_basis)
    roots = roots_of_unity(N)
    psi = np.array([roots[(-k) % N] for k in range(N)])
    S = np.outer(psi, psi.conj()) / N
    expected = np.kron(S, base.matrix)
    return float(np.max(np.abs(big.matrix - expected), initial=0.0))


def gauge_conjugate(H: OperatorMatrix, nu) -> OperatorMatrix:
    """``D* H D`` with ``D = diag(exp(iν))``; ``nu`` is an array or a callable on the basis."""
    if callable(nu):
        nu = np.array([nu(b) for b in H.basis], dtype=float)
    nu = np.asarray(nu, dtype=float)
    if nu.shape != (H.n,):
        raise ValueError("gauge function has the wrong length")
    d = np.exp(1j * nu)
    M = d.conj()[:, None] * H.matrix * d[None, :]
    prov = dict(H.provenance, gauge="conjugated")
    herm = H.hermitian and float(np.max(np.abs(M - M.conj().T), initial=0.0)) <= HERMITIAN_TOL
    return OperatorMatrix(M, H.basis, prov, herm)


def compress(H: OperatorMatrix, sub: Sequence) -> OperatorMatrix:
    """Principal submatrix ``J* H J`` on the basis elements ``sub``."""
    idx = H.index()
    sub = tuple(sub)
    missing = [b for b in sub if b not in idx]
    if missing:
        raise ValueError(f"{len(missing)} sub-window elements are not in the window, e.g. {missing[0]!r}")
    rows = np.array([idx[b] for b in sub], dtype=int)
    M = H.matrix[np.ix_(rows, rows)].copy()
    prov = dict(H.provenance, compressed_to=len(sub))
    return OperatorMatrix(M, sub, prov, H.hermitian)


def peierls_matrix(hoppings: dict, A, points: Sequence) -> OperatorMatrix:
    """Tight-binding matrix ``H[m, n] = t(m − n)·exp(iΓ_A[n → m])``.

    ``hoppings`` maps lattice displacements to amplitudes and ``A`` is a
    :class:`~groupoid_spectra.cocycles.DiscreteVectorPotential` (circulation
    along the canonical path).
    """
    pts = [tuple(p) if not isinstance(p, int) else (p,) for p in points]
    idx = {p: i for i, p in enumerate(pts)}
    n = len(pts)
    H = np.zeros((n, n), dtype=complex)
    for j, p in enumerate(pts):
        for d, t in hoppings.items():
            d = (d,) if isinstance(d, int) else tuple(d)
            q = tuple(a + b for a, b in zip(p, d))
            i = idx.get(q)
            if i is None:
                continue
            H[i, j] += t * np.exp(1j * circulation(A, p, q))
    herm = float(np.max(np.abs(H - H.conj().T), initial=0.0)) <= HERMITIAN_TOL
    return OperatorMatrix(H, tuple(points), {"representation": "peierls", "size": n}, herm)


def connecting_gauge(A_from, A_to, points: Sequence, z=None) -> np.ndarray:
    """``ν(m) = Γ_{A_to − A_from}[z → m]``, so that ``H_{A_to} = gauge_conjugate(H_{A_from}, −ν)``.

    Meaningful when the two potentials have the same curl, so that their
    difference is a lattice gradient.
    """
    diff = A_to - A_from
    pts = [tuple(p) if not isinstance(p, int) else (p,) for p in points]
    z = pts[0] if z is None else (tuple(z) if not isinstance(z, int) else (z,))
    return np.array([circulation(diff, z, p) for p in pts])


def write_matrix_csv(H: OperatorMatrix, path) -> None:
    """Sparse CSV export: one ``row,col,re,im`` line per nonzero entry."""
    M = H.matrix
    rows, cols = np.nonzero(M)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["row", "col", "re", "im"])
        for i, j in zip(rows.tolist(), cols.tolist()):
            v = M[i, j]
            wr.writerow([i, j, repr(float(v.real)), repr(float(v.imag))])
