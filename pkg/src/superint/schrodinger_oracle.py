"""Finite-difference verification of the algebraic spectra.

Every catalog potential separates in Cartesian coordinates, so the 2D
spectrum is the set of sums Ex + Ey of two 1D grid problems. The 1D problems
use the three-point Laplacian with Dirichlet walls; eigenvalues are
Richardson-extrapolated over grid doubling and re-run until two successive
extrapolations agree.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sps
from scipy.linalg import eigh_tridiagonal

from . import potential_catalog as catalog
from .errors import GridNotConverged, GridTooLarge, SingularPotential
from .spectra import Spectrum, SpectrumEntry, merge_levels

GRID2D_CAP = 400  # points per axis for the sparse 2D commutator check


@dataclass(frozen=True)
class Grid1D:
    """Interior points of a Dirichlet box.

    kind 'line': the box is [-L, L] and h = 2L/(n+1).
    kind 'half': the box is [0, L] and h = L/(n+1), for parts with a wall at 0.
    """

    L: float
    n: int
    kind: str = "line"

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("Grid1D needs n >= 3")
        if not self.L > 0:
            raise ValueError("Grid1D needs L > 0")
        if self.kind not in ("line", "half"):
            raise ValueError("kind must be 'line' or 'half'")

    @property
    def h(self) -> float:
        width = 2.0 * self.L if self.kind == "line" else self.L
        return width / (self.n + 1)

    @property
    def x(self) -> np.ndarray:
        start = -self.L if self.kind == "line" else 0.0
        return start + self.h * np.arange(1, self.n + 1)

    def refined(self) -> "Grid1D":
        """Same box, half the spacing."""
        return Grid1D(self.L, 2 * self.n + 1, self.kind)


@dataclass
class GridHamiltonian:
    """H = -hbar^2/2 d^2/dx^2 + V(x) on a Grid1D (tridiagonal)."""

    grid: Grid1D
    potential: Callable
    hbar: float = 1.0

    @property
    def diagonal(self) -> np.ndarray:
        return self.potential(self.grid.x) + self.hbar**2 / self.grid.h**2

    @property
    def offdiagonal(self) -> np.ndarray:
        return np.full(self.grid.n - 1, -0.5 * self.hbar**2 / self.grid.h**2)

    def matrix(self):
        d, e = self.diagonal, self.offdiagonal
        return sps.diags([e, d, e], [-1, 0, 1], format="csr")

    def refined(self) -> "GridHamiltonian":
        return GridHamiltonian(self.grid.refined(), self.potential, self.hbar)


@dataclass
class ConvergenceRecord:
    """Per-run convergence report for one 1D part."""

    label: str
    L: float
    kind: str
    n_values: list
    raw: list                  # eigenvalues per n
    eigenvalues: np.ndarray    # final extrapolated values
    error_estimate: np.ndarray
    boundary_amplitude: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "L": self.L,
            "kind": self.kind,
            "n": self.n_values,
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "error_estimate": [float(v) for v in self.error_estimate],
            "boundary_amplitude": self.boundary_amplitude,
        }


def _lowest(ham: GridHamiltonian, k: int, vectors: bool = False):
    if k > ham.grid.n:
        raise ValueError("k must be <= n")
    return eigh_tridiagonal(ham.diagonal, ham.offdiagonal, eigvals_only=not vectors,
                            select="i", select_range=(0, k - 1))


def converge_1d(ham: GridHamiltonian, k: int, tol: float = 1e-6, max_doublings: int = 3,
                label: str = "") -> ConvergenceRecord:
    """k lowest eigenvalues, Richardson-extrapolated and certified by doubling.

    With h -> h/2 the three-point error drops by 4, so (4 E(h/2) - E(h))/3
    removes the leading term. Refinement stops once two successive
    extrapolations differ by less than ``tol``.
    """
    hams = [ham, ham.refined()]
    raw = [_lowest(hams[0], k), _lowest(hams[1], k)]
    prev = (4.0 * raw[1] - raw[0]) / 3.0
    for _ in range(max_doublings):
        hams.append(hams[-1].refined())
        raw.append(_lowest(hams[-1], k))
        cur = (4.0 * raw[-1] - raw[-2]) / 3.0
        err = np.abs(cur - prev)
        if np.all(err < tol):
            return ConvergenceRecord(label, ham.grid.L, ham.grid.kind,
                                     [h.grid.n for h in hams], [list(map(float, r)) for r in raw],
                                     cur, err)
        prev = cur
    raise GridNotConverged(
        f"{label or 'eigenvalues'} not converged to {tol:g} after {max_doublings} doublings "
        f"(last change {float(np.max(err)):.3g})")


def eigenvalues_1d(ham: GridHamiltonian, k: int, tol: float = 1e-6, max_doublings: int = 3) -> list:
    return list(converge_1d(ham, k, tol, max_doublings).eigenvalues)


def boundary_amplitude(ham: GridHamiltonian, k: int) -> float:
    """Largest |psi| at the outer wall(s) relative to max |psi|, over the k lowest states."""
    _, vecs = _lowest(ham, k, vectors=True)
    worst = 0.0
    for j in range(k):
        v = np.abs(vecs[:, j])
        edge = v[-1] if ham.grid.kind == "half" else max(v[0], v[-1])
        worst = max(worst, float(edge / v.max()))
    return worst


def auto_box(potential: Callable, k: int, hbar: float = 1.0, kind: str = "line",
             L0: float = 4.0, n_probe: int = 1500, amp_tol: float = 1e-8, grow: float = 1.4,
             max_steps: int = 30) -> tuple:
    """Grow L until the k lowest states have boundary amplitude below amp_tol."""
    L = L0
    for _ in range(max_steps):
        ham = GridHamiltonian(Grid1D(L, n_probe, kind), potential, hbar)
        amp = boundary_amplitude(ham, k)
        if amp < amp_tol:
            return L, amp
        L *= grow
    raise GridNotConverged(f"box growth did not confine {k} states (amplitude {amp:.3g})")


def solve_1d(potential: Callable, k: int, hbar: float = 1.0, kind: str = "line",
             n: int = 4000, L: Optional[float] = None, L0: float = 4.0, tol: float = 1e-6,
             label: str = "") -> ConvergenceRecord:
    amp = None
    if L is None:
        L, amp = auto_box(potential, k, hbar, kind, L0=L0)
    rec = converge_1d(GridHamiltonian(Grid1D(L, n, kind), potential, hbar), k, tol, label=label)
    rec.boundary_amplitude = amp
    return rec


# ---------------------------------------------------------------------------
# 2D

def _length(spec) -> float:
    p = spec.params
    if "omega" in p:
        return float(np.sqrt(p["hbar"] / p["omega"]))
    return float(p.get("a0", p.get("a", 1.0)))


def _parts(spec):
    if "singular" in spec.domains:
        raise SingularPotential(
            f"{spec.id} with real a has poles on the line; the grid problem is not defined")
    out = []
    for label, f, dom in (("x", spec.vx, spec.domains[0]), ("y", spec.vy, spec.domains[1])):
        out.append((label, f, "half" if dom == "half" else "line"))
    return out


def spectrum_2d(id: str, k: int = 10, n: int = 4000, L: Optional[float] = None,
                tol: float = 1e-6, merge_tol: float = 1e-6, return_records: bool = False,
                **params):
    """Lowest part of the 2D spectrum from the two 1D grid problems.

    Parts with a 1/s^2 wall at s = 0 are solved on the half-line s > 0 (the
    wall is impenetrable, the other half-line only repeats the spectrum).
    Levels are merged within merge_tol*max(1,|E|); the returned levels cover
    at least the k lowest states and every returned level carries its full
    degeneracy.
    """
    spec = catalog.get_potential(id, **params)
    hbar = spec.params["hbar"]
    length = _length(spec)
    recs = []
    for label, f, kind in _parts(spec):
        recs.append(solve_1d(f, k, hbar, kind, n=n, L=L, L0=4.0 * length, tol=tol,
                             label=f"{id}:{label}"))
    ex, ey = recs[0].eigenvalues, recs[1].eigenvalues
    sums = np.sort((ex[:, None] + ey[None, :]).ravel())
    # only sums below the (k)th x or y level are complete
    ceiling = min(ex[-1] + ey[0], ex[0] + ey[-1])
    entries = [SpectrumEntry(float(E), 1, "numeric") for E in sums if E <= ceiling + 1e-9]
    levels = merge_levels(entries, merge_tol, relative=True)
    kept, count = [], 0
    for lv in levels:
        if count >= k:
            break
        kept.append(SpectrumEntry(lv.energy, lv.degeneracy, "numeric"))
        count += lv.degeneracy
    sp = Spectrum(entries=kept, parameters=dict(spec.params), tol=merge_tol)
    if return_records:
        return sp, recs
    return sp


def spectrum_2d_states(sp: Spectrum) -> list:
    """Energies repeated by degeneracy (relative merge, as used for counting)."""
    out = []
    for e in sp.entries:
        out.extend([e.energy] * e.degeneracy)
    return out


# ---------------------------------------------------------------------------
# commutator check for the second-order integral

def _a_potential(spec):
    """Potential term W of A = Px^2 - Py^2 + W, as (wx, wy)."""
    h = spec.params["hbar"]
    p = spec.params
    if spec.id in ("p2", "p3"):
        w = p["omega"]
        wx = lambda x: 9.0 * w**2 * x**2
        if spec.id == "p2":
            wy = lambda y: -(w**2) * y**2
        else:
            wy = lambda y: -(w**2) * y**2 - 2 * h**2 / y**2
        return wx, wy
    a2 = -p["a0"] ** 2 if "a0" in p else p["a"] ** 2
    a4 = a2**2
    pair = lambda s: 2.0 * (s**2 + a2) / (s**2 - a2) ** 2
    if spec.id == "p1":
        return (lambda x: 2 * h**2 * (x**2 / (8 * a4) + pair(x)),
                lambda y: -2 * h**2 * y**2 / (8 * a4))
    if spec.id == "p4":
        # the singular pair enters with the sign of -2 Vy; see the decisions ledger
        return (lambda x: 2 * h**2 * 9 * x**2 / (8 * a4),
                lambda y: -2 * h**2 * (y**2 / (8 * a4) + pair(y)))
    raise ValueError(f"no second-order integral transcribed for {spec.id}")


def _ops_2d(spec, n: int, L: float, free: bool = False):
    h = spec.params["hbar"]
    parts = _parts(spec)
    grids = [Grid1D(L, n, kind) for _, _, kind in parts]
    lap = []
    for g in grids:
        e = np.full(g.n - 1, 1.0 / g.h**2)
        lap.append(sps.diags([e, np.full(g.n, -2.0 / g.h**2), e], [-1, 0, 1], format="csr"))
    Ix, Iy = sps.identity(grids[0].n, format="csr"), sps.identity(grids[1].n, format="csr")
    Px2 = sps.kron(-(h**2) * lap[0], Iy, format="csr")
    Py2 = sps.kron(Ix, -(h**2) * lap[1], format="csr")
    X, Y = np.meshgrid(grids[0].x, grids[1].x, indexing="ij")
    if free:
        V = np.zeros(X.size)
        W = np.zeros(X.size)
    else:
        V = (parts[0][1](X) + parts[1][1](Y)).ravel()
        wx, wy = _a_potential(spec)
        W = (wx(X) + wy(Y)).ravel()
    H = 0.5 * (Px2 + Py2) + sps.diags(V)
    A = Px2 - Py2 + sps.diags(W)
    return H, A, X, Y, grids


def _test_vectors(X, Y, grids, count, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        cx = 0.0 if grids[0].kind == "line" else 0.5 * grids[0].L
        cy = 0.0 if grids[1].kind == "line" else 0.5 * grids[1].L
        sx, sy = 0.12 * grids[0].L, 0.12 * grids[1].L
        x0 = cx + rng.uniform(-0.2, 0.2) * sx
        y0 = cy + rng.uniform(-0.2, 0.2) * sy
        c = rng.normal(size=4)
        poly = c[0] + c[1] * (X - x0) / sx + c[2] * (Y - y0) / sy + c[3] * (X - x0) * (Y - y0) / (sx * sy)
        out.append((poly * np.exp(-((X - x0) ** 2) / (2 * sx**2) - (Y - y0) ** 2 / (2 * sy**2))).ravel())
    return out


def commutator_residual_A(id: str, grid2d_n: int = 80, L: Optional[float] = None,
                          n_vectors: int = 5, seed: int = 0, cap: int = GRID2D_CAP,
                          free: bool = False, **params) -> float:
    """Mean of ||[H, A] psi|| / ||A psi|| over smooth test vectors away from the walls."""
    if grid2d_n > cap:
        raise GridTooLarge(f"grid2d_n = {grid2d_n} exceeds the cap of {cap} points per axis")
    spec = catalog.get_potential(id, **params)
    if L is None:
        L = 8.0 * _length(spec)
    H, A, X, Y, grids = _ops_2d(spec, grid2d_n, L, free=free)
    res = []
    for psi in _test_vectors(X, Y, grids, n_vectors, seed):
        Apsi = A @ psi
        comm = H @ Apsi - A @ (H @ psi)
        res.append(np.linalg.norm(comm) / np.linalg.norm(Apsi))
    return float(np.mean(res))


def commutator_convergence(id: str, n_list=(40, 81, 163), **params) -> dict:
    """Residuals over successive halvings of h, with the observed order.

    The order is reported as nan once the residual sits at the roundoff floor,
    where a ratio carries no information.
    """
    vals = [commutator_residual_A(id, grid2d_n=n, **params) for n in n_list]
    orders = []
    for r0, r1 in zip(vals, vals[1:]):
        if min(r0, r1) < 1e-9:
            orders.append(float("nan"))
        else:
            orders.append(float(np.log2(r0 / r1)))
    return {"potential": id, "n": list(n_list), "residual": vals, "order": orders}


def records_json(records) -> str:
    return json.dumps([r.to_json() for r in records], indent=2)
