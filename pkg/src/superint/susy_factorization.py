"""Superpartner factorization of the rational 1D blocks and the ladders built on it.

Everything here runs in the regular a = i*a0 mode. The block
    Vx = hbar^2 [x^2/(8 a0^4) + 2(x^2 - a0^2)/(x^2 + a0^2)^2]
factorizes as h1 = b^dagger b = Vx + 3 hbar^2/(4 a0^2) with
    b = (hbar/sqrt2) d/dx + W,   W = (hbar/sqrt2) (x/(2 a0^2) + 2x/(x^2 + a0^2)),
and its partner h2 = b b^dagger is a shifted harmonic oscillator of frequency
hbar/(2 a0^2). Grid operators use central differences with one-sided
second-order stencils at the two end points.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sps
from scipy.sparse.linalg import eigsh

from . import potential_catalog as catalog
from .errors import BasisTooSmall, NotSusyCatalogued, RaisingUndefined
from .schrodinger_oracle import Grid1D, GridHamiltonian, _lowest, auto_box, converge_1d
from .special import hermite_function, laguerre, laguerre_norm
from .spectra import Spectrum, SpectrumEntry

SQ2 = math.sqrt(2.0)


def deriv(f, h):
    """First derivative on a uniform grid.

    Fourth-order central stencil in the interior, second-order central next to
    the ends and second-order one-sided stencils at the two end points.
    """
    f = np.asarray(f)
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    d[1] = (f[2] - f[0]) / (2 * h)
    d[-2] = (f[-1] - f[-3]) / (2 * h)
    d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
    d[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
    return d


@dataclass
class Superpotential:
    W: Callable
    dW: Callable
    hbar: float = 1.0
    a0: float = 1.0


@dataclass
class FactorizedPair:
    """Superpartners h1 = b^dagger b and h2 = b b^dagger, with h1 = catalog part + shift."""

    superpotential: Superpotential
    h1: Callable
    h2: Callable
    shift: float

    @property
    def hbar(self) -> float:
        return self.superpotential.hbar

    @property
    def a0(self) -> float:
        return self.superpotential.a0

    def b(self, psi, x, h):
        return self.hbar / SQ2 * deriv(psi, h) + self.superpotential.W(x) * psi

    def b_dag(self, psi, x, h):
        return -self.hbar / SQ2 * deriv(psi, h) + self.superpotential.W(x) * psi


@dataclass
class WaveFunction1D:
    x: np.ndarray
    values: np.ndarray
    label: str = ""
    descriptor: dict = field(default_factory=dict)

    @property
    def h(self) -> float:
        return float(self.x[1] - self.x[0])

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.h))

    def normalized(self) -> "WaveFunction1D":
        return WaveFunction1D(self.x, self.values / self.norm(), self.label, dict(self.descriptor))


def partner_pair_p1(a0: float = 1.0, hbar: float = 1.0) -> FactorizedPair:
    if a0 <= 0 or hbar <= 0:
        raise ValueError("a0 and hbar must be > 0")
    c = hbar / SQ2

    def W(x):
        x = np.asarray(x, float)
        return c * (x / (2 * a0**2) + 2 * x / (x**2 + a0**2))

    def dW(x):
        x = np.asarray(x, float)
        return c * (1 / (2 * a0**2) + 2 * (a0**2 - x**2) / (x**2 + a0**2) ** 2)

    def h1(x):
        return W(x) ** 2 - c * dW(x)

    def h2(x):
        x = np.asarray(x, float)
        return hbar**2 * x**2 / (8 * a0**4) + 5 * hbar**2 / (4 * a0**2)

    return FactorizedPair(Superpotential(W, dW, hbar, a0), h1, h2, 3 * hbar**2 / (4 * a0**2))


def default_grid(a0: float = 1.0, n: int = 40001, L: Optional[float] = None) -> Grid1D:
    return Grid1D(L if L is not None else 20.0 * a0, n, "line")


def phi0_closed(x, a0: float = 1.0):
    """Zero mode of h1, normalized on the line."""
    x = np.asarray(x, float)
    return a0**1.5 * (2 / np.pi) ** 0.25 * np.exp(-(x**2) / (4 * a0**2)) / (a0**2 + x**2)


def harmonic_state(k: int, x, a0: float = 1.0):
    """Normalized eigenfunction k of the oscillator with frequency hbar/(2 a0^2)."""
    s = SQ2 * a0
    return hermite_function(k, np.asarray(x, float) / s) / math.sqrt(s)


def raised_closed(k: int, x, a0: float = 1.0):
    """Normalized h1 eigenfunction k+1 obtained by raising harmonic state k."""
    x = np.asarray(x, float)
    front = x * (x**2 + 3 * a0**2) / (a0**2 * (x**2 + a0**2)) * harmonic_state(k, x, a0)
    if k > 0:
        front = front - math.sqrt(k) / a0 * harmonic_state(k - 1, x, a0)
    return a0 / math.sqrt(k + 3) * front


def ground_state_p1(a0: float = 1.0, hbar: float = 1.0, grid: Optional[Grid1D] = None) -> WaveFunction1D:
    grid = grid or default_grid(a0)
    wf = WaveFunction1D(grid.x, phi0_closed(grid.x, a0), "phi0",
                        {"form": "rational-gaussian", "a0": a0})
    return wf.normalized()


def raise_eigenfunction(pair: FactorizedPair, psi2: WaveFunction1D, E2: float) -> WaveFunction1D:
    """psi1 = b^dagger psi2 / sqrt(E2), normalized on the grid."""
    if not E2 > 0:
        raise RaisingUndefined(f"partner energy {E2:g} must be > 0 to raise")
    vals = pair.b_dag(psi2.values, psi2.x, psi2.h) / math.sqrt(E2)
    out = WaveFunction1D(psi2.x, vals, f"raised({psi2.label})",
                         {"form": "raised", "from": psi2.descriptor})
    return out.normalized()


def apply_h(potential, psi: WaveFunction1D, hbar: float = 1.0):
    """Grid action of -hbar^2/2 d2 + V (second differences, zero outside the grid)."""
    f = psi.values
    h = psi.h
    d2 = np.empty_like(f)
    d2[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / h**2
    d2[0] = (f[1] - 2 * f[0]) / h**2
    d2[-1] = (f[-2] - 2 * f[-1]) / h**2
    return -0.5 * hbar**2 * d2 + potential(psi.x) * f


def eigen_residual(potential, psi: WaveFunction1D, E: float, hbar: float = 1.0) -> float:
    r = apply_h(potential, psi, hbar) - E * psi.values
    return float(np.linalg.norm(r) / np.linalg.norm(psi.values))


def spectral_residual(potential, psi: WaveFunction1D, E: float, hbar: float = 1.0,
                      n_states: int = 40) -> float:
    """Eigen-residual of psi at E measured in the grid eigenbasis of -hbar^2/2 d2 + V.

    sqrt(sum_i (E_i - E)^2 |c_i|^2) over the n_states lowest grid eigenvectors,
    plus the norm of the part outside them, all relative to ||psi||. This is the
    residual to use for vectors produced by stacked first-order stencils: their
    odd-even grid noise is harmless in this norm but swamps a direct second
    difference.
    """
    x = psi.x
    grid = Grid1D(0.5 * (x[-1] - x[0]) + psi.h, len(x))
    ham = GridHamiltonian(grid, lambda _: potential(x), hbar)
    ev, vecs = _lowest(ham, n_states, vectors=True)
    v = psi.values / np.linalg.norm(psi.values)
    c = vecs.T @ v
    rest = max(0.0, 1.0 - float(np.sum(c**2)))
    return float(np.sqrt(np.sum((ev - E) ** 2 * c**2) + rest * max(1.0, abs(E)) ** 2))


def partner_levels(pair: FactorizedPair, k: int = 8, n: int = 4000) -> tuple:
    """Grid eigenvalues of h1 (k+1 of them) and h2 (k)."""
    L, _ = auto_box(pair.h1, k + 1, pair.hbar, L0=4.0 * pair.a0)
    r1 = converge_1d(GridHamiltonian(Grid1D(L, n), pair.h1, pair.hbar), k + 1, label="h1")
    r2 = converge_1d(GridHamiltonian(Grid1D(L, n), pair.h2, pair.hbar), k, label="h2")
    return r1.eigenvalues, r2.eigenvalues


# ---------------------------------------------------------------------------
# spectra from 1D blocks

def _block_levels(kind: str, U: float, E_max: float, other_min: float) -> list:
    """(energy, index, form) of one 1D block up to E_max - other_min."""
    top = E_max - other_min + 1e-12
    out = []
    if kind == "rational":
        if -0.75 * U <= top:
            out.append((-0.75 * U, 0, "phi0"))
        k = 0
        while U * (k + 1.5) / 2 <= top:
            out.append((U * (k + 1.5) / 2, k + 1, f"raised-hermite[{k}]"))
            k += 1
    elif kind in ("osc1", "osc3"):
        m = 1 if kind == "osc1" else 3
        k = 0
        while U * m * (k + 0.5) / 2 <= top:
            out.append((U * m * (k + 0.5) / 2, k, f"hermite[{k}]"))
            k += 1
    elif kind == "radial":
        k = 0
        while U * (2 * k + 2.5) / 2 <= top:
            out.append((U * (2 * k + 2.5) / 2, k, f"y^2 laguerre^(3/2)[{k}]"))
            k += 1
    return out


_BLOCKS = {
    "p1": ("rational", "osc1"),
    "p4": ("osc3", "rational"),
    "p5": ("rational", "radial"),
    "p6": ("rational", "rational"),
}


@dataclass(frozen=True)
class SusyState:
    energy: float
    kx: int
    ky: int
    x_form: str
    y_form: str
    family_id: str


def susy_spectrum(id: str, E_max: float, hbar: float = 1.0, a0: float = 1.0) -> Spectrum:
    """Levels of the separated problem built from the factorized 1D blocks.

    Family labels: 'susy:doublet' when neither factor is the zero mode phi0,
    'susy:singlet' (or -x / -y for p6) when one is, and 'susy:double-singlet'
    when both are.
    """
    if id not in _BLOCKS:
        raise NotSusyCatalogued(f"no SUSY spectrum for {id!r}; available: {', '.join(_BLOCKS)}")
    U = hbar**2 / a0**2
    bx, by = _BLOCKS[id]
    lo = {"rational": -0.75 * U, "osc1": 0.25 * U, "osc3": 0.75 * U, "radial": 1.25 * U}
    xs = _block_levels(bx, U, E_max, lo[by])
    ys = _block_levels(by, U, E_max, lo[bx])
    states = []
    for Ex, kx, fx in xs:
        for Ey, ky, fy in ys:
            E = Ex + Ey
            if E > E_max + 1e-12:
                continue
            sx, sy = fx == "phi0", fy == "phi0"
            if sx and sy:
                fam = "susy:double-singlet"
            elif sx or sy:
                fam = "susy:singlet"
                if id == "p6":
                    fam = "susy:singlet-x" if sx else "susy:singlet-y"
            else:
                fam = "susy:doublet"
            states.append(SusyState(float(E), kx, ky, fx, fy, fam))
    states.sort(key=lambda s: (s.energy, s.family_id, s.kx))
    entries = [SpectrumEntry(s.energy, 1, s.family_id) for s in states]
    return Spectrum(entries=entries, parameters={"hbar": hbar, "a0": a0}, solutions=states)


def laguerre_state(k: int, y, a0: float = 1.0):
    """Normalized half-line eigenfunction k of hbar^2[y^2/(8a0^4) + 1/y^2] (centrifugal l = 1)."""
    y = np.asarray(y, float)
    t = y**2 / (2 * a0**2)
    raw = y**2 * np.exp(-t / 2) * laguerre(k, 1.5, t)
    # int_0^inf y^4 e^{-t} L^2 dy with t = y^2/(2a0^2): dy = a0^2 dt / y, y^3 = (2a0^2 t)^{3/2}
    integral = (2 * a0**2) ** 1.5 * a0**2 * laguerre_norm(k, 1.5)
    return raw / math.sqrt(integral)


# ---------------------------------------------------------------------------
# ladders

def ladder_operators_p1(a0: float = 1.0, hbar: float = 1.0, grid: Optional[Grid1D] = None):
    """Grid callables (M, M_dag, L, L_dag) acting on sampled vectors.

    c, c^dagger are the ladders of the oscillator h2, written so that c
    annihilates in the a = i*a0 mode: c = (hbar/2a0^2)(x + 2 a0^2 d/dx).
    M = b^dagger c b lowers h1 levels and M^dagger = b^dagger c^dagger b raises
    them, both by hbar^2/(2 a0^2). L, L^dagger are the same ladders in y.
    """
    grid = grid or default_grid(a0)
    pair = partner_pair_p1(a0, hbar)
    x, h = grid.x, grid.h
    k = hbar / (2 * a0**2)

    def c(f):
        return k * (x * f + 2 * a0**2 * deriv(f, h))

    def c_dag(f):
        return k * (x * f - 2 * a0**2 * deriv(f, h))

    def M(f):
        return pair.b_dag(c(pair.b(f, x, h)), x, h)

    def M_dag(f):
        return pair.b_dag(c_dag(pair.b(f, x, h)), x, h)

    return M, M_dag, c, c_dag


def _project(op, vecs, h):
    """Matrix <v_i| op |v_j> for grid vectors (columns) normalized with weight h."""
    applied = np.column_stack([op(vecs[:, j]) for j in range(vecs.shape[1])])
    return vecs.T @ applied * h


def _lowest_5pt(x, v, hbar, k):
    """k lowest eigenpairs of -hbar^2/2 d2 + V with the five-point Laplacian (Dirichlet ends)."""
    h = x[1] - x[0]
    t = hbar**2 / (24 * h**2)
    n = len(x)
    mat = sps.diags([np.full(n - 2, t), np.full(n - 1, -16 * t), v + 30 * t,
                     np.full(n - 1, -16 * t), np.full(n - 2, t)], [-2, -1, 0, 1, 2], format="csc")
    w, vec = eigsh(mat, k=k, sigma=float(np.min(v)) - 1.0, which="LM")
    order = np.argsort(w)
    return w[order], vec[:, order]


def _basis_2d(ex, ey, size):
    """The `size` lowest product states (ix, iy), ordered by energy."""
    pairs = sorted(((ex[i] + ey[j], i, j) for i in range(len(ex)) for j in range(len(ey))))
    return pairs[:size]


def quintic_subset_check(a0: float = 1.0, hbar: float = 1.0, basis_size: int = 30,
                         points_per_state: int = 400) -> dict:
    """Residuals of the tractable quintic relations in a truncated product basis.

    Basis: the `basis_size` lowest products of Hx and Hy grid eigenfunctions
    (five-point Laplacian, grid refined in step with the basis). H and
    A = 2Hx - 2Hy are taken from the grid eigenvalues; G+ = (L^dagger)^2 and G- = L^2 are projections of
    the grid-applied ladders. Each relation X = Y is scored on the lower half of
    the basis (by energy) as ||P (X - Y) P|| / ||P Y P||, since products of
    truncated matrices are only complete away from the truncation edge.

    Checked, with kappa = hbar^2/a0^2:
        [H, G+-] = +-kappa G+-,  [A, G+-] = -+2 kappa G+-,
        [G-, G+] = 4 kappa (H - A/2).
    """
    if basis_size < 4:
        raise BasisTooSmall("basis_size must be >= 4")
    kappa = hbar**2 / a0**2
    spec = catalog.get_potential("p1", hbar=hbar, a0=a0)
    L_box = 20.0 * a0
    # the grid is refined together with the basis: h halves when the basis doubles
    n = points_per_state * basis_size
    grid = Grid1D(L_box, n)
    x, h = grid.x, grid.h
    m = basis_size
    ex = _lowest_5pt(x, spec.vx(x), hbar, m)[0]
    ey, vy_ = _lowest_5pt(x, spec.vy(x), hbar, m)
    vy_ = vy_ / math.sqrt(h)
    basis = _basis_2d(ex, ey, m)
    kk = hbar / (2 * a0**2)

    def Lop(f):
        return kk * (x * f + 2 * a0**2 * deriv(f, h))

    def Ldag(f):
        return kk * (x * f - 2 * a0**2 * deriv(f, h))

    # eigenvector signs are arbitrary; every relation below is invariant under them
    Gm_y = _project(lambda f: Lop(Lop(f)), vy_, h)
    Gp_y = _project(lambda f: Ldag(Ldag(f)), vy_, h)

    idx_x = np.array([b[1] for b in basis])
    idx_y = np.array([b[2] for b in basis])
    same_x = idx_x[:, None] == idx_x[None, :]
    Gp = np.where(same_x, Gp_y[idx_y[:, None], idx_y[None, :]], 0.0)
    Gm = np.where(same_x, Gm_y[idx_y[:, None], idx_y[None, :]], 0.0)
    Hd = np.diag([b[0] for b in basis])
    Ad = np.diag([2 * ex[b[1]] - 2 * ey[b[2]] for b in basis])
    probe = np.arange(m) < (m + 1) // 2

    def score(X, Y):
        P = np.ix_(probe, probe)
        den = np.linalg.norm(Y[P])
        return float(np.linalg.norm((X - Y)[P]) / den) if den > 0 else float(np.linalg.norm(X[P]))

    res = {
        "[H,G+]": score(Hd @ Gp - Gp @ Hd, kappa * Gp),
        "[H,G-]": score(Hd @ Gm - Gm @ Hd, -kappa * Gm),
        "[A,G+]": score(Ad @ Gp - Gp @ Ad, -2 * kappa * Gp),
        "[A,G-]": score(Ad @ Gm - Gm @ Ad, 2 * kappa * Gm),
        "[G-,G+]": score(Gm @ Gp - Gp @ Gm, 4 * kappa * (Hd - 0.5 * Ad)),
    }
    return {"basis_size": m, "a0": a0, "hbar": hbar, "residuals": res,
            "max_residual": max(res.values())}


def export_csv(path, x, columns: dict) -> None:
    """Write x and one column per named eigenfunction."""
    names = list(columns)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x"] + names)
        for i, xi in enumerate(x):
            w.writerow([f"{xi:.12g}"] + [f"{float(np.real(columns[n][i])):.12g}" for n in names])
