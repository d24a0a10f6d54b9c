"""Potential 1 with real a, regularized by moving the line to Im x = -eps.

On the shifted contour the poles at x = +-a are never touched, so the
Hamiltonian is a complex symmetric (non-Hermitian, PT-symmetric) operator.
Eigenvalues come from a shift-invert sparse solve of the three-point matrix,
extrapolated in h the same way as in :mod:`schrodinger_oracle`.

Parts
-----
``x``   Hx = P^2/2 + hbar^2 (z^2/8a^4 + 1/(z-a)^2 + 1/(z+a)^2),  z = x - i eps
``y``   Hy = P^2/2 + hbar^2 z^2/8a^4
``h1``  Hx - 3 hbar^2/4a^2       (the b' b factor)
``h2``  Hy - 5 hbar^2/4a^2       (the b b' factor)
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sps
from scipy.sparse.linalg import eigs

from .errors import GridNotConverged, SelfOrthogonal
from .schrodinger_oracle import Grid1D
from .special import hermite
from .spectra import Spectrum, SpectrumEntry

__all__ = [
    "ComplexGridHamiltonian", "PTRecord", "PseudoNorm", "pt_potential", "pt_eigenvalues",
    "pt_eigenpairs", "pt_spectrum_2d", "pseudo_norm", "closed_state", "closed_state_residual",
    "raised_partner_levels", "pt_records",
]

PARTS = ("x", "y", "h1", "h2")


def default_epsilon(a: float) -> float:
    return 0.1 * a


def pt_potential(part: str, a: float = 1.0, hbar: float = 1.0) -> Callable:
    """V(z) for one of PARTS, valid for complex z."""
    if part not in PARTS:
        raise ValueError(f"part must be one of {PARTS}, got {part!r}")
    k = hbar**2

    def osc(z):
        return k * z**2 / (8 * a**4)

    if part == "y":
        return osc
    if part == "h2":
        return lambda z: osc(z) - 5 * k / (4 * a**2)

    def vx(z):
        return osc(z) + k / (z - a) ** 2 + k / (z + a) ** 2

    if part == "x":
        return vx
    return lambda z: vx(z) - 3 * k / (4 * a**2)


@dataclass
class ComplexGridHamiltonian:
    """-hbar^2/2 d^2/dx^2 + V(x - i eps) on a Grid1D; complex symmetric tridiagonal."""

    grid: Grid1D
    potential: Callable
    epsilon: float
    hbar: float = 1.0

    @property
    def z(self) -> np.ndarray:
        return self.grid.x - 1j * self.epsilon

    @property
    def diagonal(self) -> np.ndarray:
        return self.potential(self.z) + self.hbar**2 / self.grid.h**2

    @property
    def offdiagonal(self) -> np.ndarray:
        return np.full(self.grid.n - 1, -0.5 * self.hbar**2 / self.grid.h**2, dtype=complex)

    def matrix(self):
        e = self.offdiagonal
        return sps.diags([e, self.diagonal, e], [-1, 0, 1], format="csc")

    def apply(self, psi) -> np.ndarray:
        return self.matrix() @ psi

    def refined(self) -> "ComplexGridHamiltonian":
        return ComplexGridHamiltonian(self.grid.refined(), self.potential, self.epsilon, self.hbar)


def _lowest_complex(ham: ComplexGridHamiltonian, k: int, vectors: bool = False):
    """k eigenvalues with the lowest real part (shift-invert below the potential)."""
    extra = min(k + 6, ham.grid.n - 2)
    sigma = float(np.min(ham.potential(ham.z).real)) - 1.0
    if vectors:
        w, v = eigs(ham.matrix(), k=extra, sigma=sigma, which="LM")
    else:
        w = eigs(ham.matrix(), k=extra, sigma=sigma, which="LM", return_eigenvectors=False)
    order = np.argsort(w.real)[:k]
    return (w[order], v[:, order]) if vectors else w[order]


def _grid_for(a, L, n):
    return Grid1D(20.0 * a if L is None else L, n)


def pt_eigenvalues(part: str, a: float = 1.0, hbar: float = 1.0, eps: Optional[float] = None,
                   k: int = 8, n: int = 2000, L: Optional[float] = None, tol: float = 1e-6,
                   max_doublings: int = 3) -> np.ndarray:
    """k lowest-by-real-part eigenvalues of one complexified part, extrapolated in h.

    The three-point error is O(h^2) for complex potentials too, so the same
    (4 E(h/2) - E(h))/3 step is used; refinement stops once two successive
    extrapolations agree to ``tol``.
    """
    if not a > 0:
        raise ValueError("a must be real and > 0")
    eps = default_epsilon(a) if eps is None else eps
    if not eps > 0:
        raise ValueError("eps must be > 0")
    ham = ComplexGridHamiltonian(_grid_for(a, L, n), pt_potential(part, a, hbar), eps, hbar)
    raw = [_lowest_complex(ham, k)]
    ham = ham.refined()
    raw.append(_lowest_complex(ham, k))
    prev = (4 * raw[1] - raw[0]) / 3
    for _ in range(max_doublings):
        ham = ham.refined()
        raw.append(_lowest_complex(ham, k))
        cur = (4 * raw[-1] - raw[-2]) / 3
        if np.all(np.abs(cur - prev) < tol):
            return cur
        prev = cur
    raise GridNotConverged(f"complexified {part}-part not converged to {tol:g} "
                           f"after {max_doublings} doublings")


def pt_eigenpairs(part: str, a: float = 1.0, hbar: float = 1.0, eps: Optional[float] = None,
                  k: int = 8, n: int = 4000, L: Optional[float] = None):
    """Unextrapolated eigenvalues and grid eigenvectors (columns) at a single n."""
    eps = default_epsilon(a) if eps is None else eps
    ham = ComplexGridHamiltonian(_grid_for(a, L, n), pt_potential(part, a, hbar), eps, hbar)
    w, v = _lowest_complex(ham, k, vectors=True)
    return w, v, ham


def pt_spectrum_2d(a: float = 1.0, hbar: float = 1.0, eps: Optional[float] = None, k: int = 10,
                   merge_tol: float = 1e-5, **grid) -> Spectrum:
    """Sums Ex_n + Ey_m of the complexified parts; the k lowest complete levels.

    Energies are the real parts; the largest imaginary part seen is stored in
    ``parameters["max_imag"]``.
    """
    ex = pt_eigenvalues("x", a, hbar, eps, k=k, **grid)
    ey = pt_eigenvalues("y", a, hbar, eps, k=k, **grid)
    entries = [SpectrumEntry(float((u + v).real) + 0.0, 1, f"pt:({i},{j})")
               for i, u in enumerate(ex) for j, v in enumerate(ey)]
    # sums above the smaller ceiling may be missing partners
    ceiling = min(ex[-1].real + ey[0].real, ex[0].real + ey[-1].real)
    entries = [e for e in entries if e.energy <= ceiling + merge_tol]
    params = {"a": a, "hbar": hbar, "eps": default_epsilon(a) if eps is None else eps,
              "max_imag": float(max(np.max(np.abs(ex.imag)), np.max(np.abs(ey.imag))))}
    spec = Spectrum(entries=entries, parameters=params, tol=merge_tol)
    keep = spec.levels()[:k]
    if keep:
        top = keep[-1].energy + merge_tol
        spec.entries = [e for e in spec.entries if e.energy <= top]
    return spec


@dataclass(frozen=True)
class PseudoNorm:
    sigma: int
    value: float          # integral of psi*(-x) psi(x) after L2 normalization
    error: float          # trapezoid vs Simpson difference
    imag: float           # residual imaginary part (zero in exact arithmetic)


def pseudo_norm(psi, grid: Grid1D, floor: float = 1e-10) -> PseudoNorm:
    """Indefinite PT inner product of psi with itself on a symmetric grid.

    The integrand psi*(-x) psi(x) integrates to a real number (swap x -> -x in
    its conjugate), and is invariant under a global phase of psi.
    """
    from scipy.integrate import simpson

    psi = np.asarray(psi, dtype=complex)
    if not np.allclose(grid.x, -grid.x[::-1]):
        raise ValueError("pseudo_norm needs a grid symmetric about 0")
    l2 = math.sqrt(float(np.sum(np.abs(psi) ** 2)) * grid.h)
    if l2 == 0.0:
        raise SelfOrthogonal("zero vector")
    f = np.conj(psi[::-1]) * psi / l2**2
    trap = complex(np.sum(f) * grid.h)
    simp = complex(simpson(f, x=grid.x))
    if abs(simp) < floor:
        raise SelfOrthogonal(f"pseudo-norm {abs(simp):.3g} below {floor:g}: exceptional point?")
    return PseudoNorm(sigma=1 if simp.real > 0 else -1, value=float(simp.real),
                      error=float(abs(trap - simp)), imag=float(simp.imag))


def closed_state(n: int, x, a: float = 1.0, eps: Optional[float] = None):
    """Raised h1 eigenfunction from the oscillator level n+3, on the contour.

    exp(-z^2/4a^2) [2z/(z^2 - a^2) H_{n+3}(s) - (2(n+3)/(sqrt2 a)) H_{n+2}(s)],
    s = z/(sqrt2 a); h1 eigenvalue (n+1) hbar^2/2a^2. Unnormalized.
    """
    eps = default_epsilon(a) if eps is None else eps
    z = np.asarray(x, float) - 1j * eps
    s = z / (math.sqrt(2) * a)
    return np.exp(-z**2 / (4 * a**2)) * (2 * z / (z**2 - a**2) * hermite(n + 3, s)
                                          - 2 * (n + 3) / (math.sqrt(2) * a) * hermite(n + 2, s))


def closed_state_residual(n: int, a: float = 1.0, hbar: float = 1.0, eps: Optional[float] = None,
                          grid_n: int = 400_000, L: Optional[float] = None) -> float:
    """||(H1 - E_n) phi_n|| / (max(1, E_n) ||phi_n||) with the three-point stencil.

    The contour passes the poles at distance eps, where phi_n varies on that
    scale, so the stencil needs h << eps; a matrix-vector product is cheap even
    at a few hundred thousand points.
    """
    eps = default_epsilon(a) if eps is None else eps
    ham = ComplexGridHamiltonian(_grid_for(a, L, grid_n), pt_potential("h1", a, hbar), eps, hbar)
    psi = closed_state(n, ham.grid.x, a, eps)
    E = (n + 1) * hbar**2 / (2 * a**2)
    r = ham.apply(psi) - E * psi
    return float(np.linalg.norm(r) / (max(1.0, abs(E)) * np.linalg.norm(psi)))


def raised_partner_levels(a: float = 1.0, hbar: float = 1.0, k: int = 8):
    """h2 levels hbar^2 (m/2 - 1)/a^2 with the one annihilated by b' (m = 2) removed."""
    out = []
    m = 0
    while len(out) < k:
        if m != 2:
            out.append(hbar**2 * (m / 2 - 1) / a**2)
        m += 1
    return np.array(out)


@dataclass(frozen=True)
class PTRecord:
    part: str
    index: int
    re: float
    im: float
    sigma: Optional[int]
    eps: float
    n: int
    L: float

    def to_json(self) -> dict:
        return {"part": self.part, "index": self.index, "re": self.re, "im": self.im,
                "sigma": self.sigma, "eps": self.eps, "n": self.n, "L": self.L}


def pt_records(part: str = "h1", a: float = 1.0, hbar: float = 1.0, eps: Optional[float] = None,
               k: int = 8, n: int = 2000, L: Optional[float] = None) -> list:
    """Extrapolated eigenvalues with the pseudo-norm sign of the matching grid eigenvector."""
    eps = default_epsilon(a) if eps is None else eps
    vals = pt_eigenvalues(part, a, hbar, eps, k=k, n=n, L=L)
    _, vecs, ham = pt_eigenpairs(part, a, hbar, eps, k=k, n=2 * n + 1, L=L)
    out = []
    for i, E in enumerate(vals):
        try:
            sigma = pseudo_norm(vecs[:, i], ham.grid).sigma
        except SelfOrthogonal:
            sigma = None
        out.append(PTRecord(part, i, float(E.real), float(E.imag), sigma, eps, n, ham.grid.L))
    return out
