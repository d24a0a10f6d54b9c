"""Unitary finite-dimensional representations and the spectra they imply.

A representation of dimension p+1 needs Phi(0) = Phi(p+1) = 0 and Phi(x) > 0
for x = 1..p. With the catalogued factored form Phi = c prod(z - r_i(E)),
z = x + u, the two boundary conditions pick two roots: u = r_i(E) and
p + 1 = r_j(E) - r_i(E), which is linear in E.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import potential_catalog as catalog
from .algebra_core import CubicAlgebra, structure_function
from .errors import NoFiniteCubicAlgebra, NotCatalogued, RootFindFailure, UnknownPotential
from .spectra import Spectrum, SpectrumEntry

__all__ = [
    "RepresentationSolution", "Spectrum", "solve_factored", "solve_generic",
    "physical_filter", "assemble_spectrum",
]

_SLOPE_EPS = 1e-14


@dataclass(frozen=True)
class RepresentationSolution:
    u: float
    p: int
    energy: float
    family_id: str
    phi_values: tuple           # Phi(1..p)
    unitary: bool
    physical: bool = True
    pairing: Optional[tuple] = None   # 1-based (i, j) root pairing, if known
    x_roots: tuple = ()               # zeros of Phi in x at (u, E)
    phi_boundary: tuple = (0.0, 0.0)  # Phi(0), Phi(p+1)

    @property
    def dimension(self) -> int:
        return self.p + 1


def _is_unitary(values, scale) -> bool:
    thr = 1e-12 * scale
    return all(v > thr for v in values)


def solve_factored(phi_roots: Sequence, c: float, p: int, include_nonunitary: bool = False,
                   skipped: Optional[list] = None) -> list:
    """Exhaustive root pairing for the factored structure function.

    ``phi_roots`` are four (slope, intercept) pairs for r_i(E) = slope*E + intercept
    (roots in z = x + u); ``c`` is the overall constant (only its sign matters
    for unitarity). Pairings with r_j - r_i constant in E are skipped: if the
    constant equals p+1 they would give a representation at every E, which is
    not a discrete level; such pairings are appended to ``skipped`` when given.
    """
    if p < 0:
        raise ValueError("p must be >= 0")
    roots = [(float(s), float(t)) for s, t in phi_roots]
    out = []
    seen = {}
    for i, j in itertools.permutations(range(len(roots)), 2):
        (si, ti), (sj, tj) = roots[i], roots[j]
        ds, dt = sj - si, tj - ti
        if abs(ds) < _SLOPE_EPS:
            if abs(dt - (p + 1)) < 1e-12 and skipped is not None:
                skipped.append((i + 1, j + 1, p))
            continue
        E = (p + 1 - dt) / ds
        E += 0.0  # no negative zero in reports
        u = si * E + ti
        r_at = np.array([s * E + t for s, t in roots])
        xr = tuple(sorted(float(r - u) for r in r_at))
        xs = np.arange(0, p + 2, dtype=float)
        vals = c * np.prod([xs + u - r for r in r_at], axis=0)
        scale = abs(c) * max(1.0, float(np.max(np.abs(xs[:, None] + u - r_at[None, :])))) ** len(roots)
        phi_in = tuple(float(v) for v in vals[1:p + 1])
        sol = RepresentationSolution(
            u=float(u), p=p, energy=float(E), family_id=f"({i + 1},{j + 1})",
            phi_values=phi_in, unitary=_is_unitary(phi_in, scale), pairing=(i + 1, j + 1),
            x_roots=xr, phi_boundary=(float(vals[0]), float(vals[-1])))
        if not sol.unitary and not include_nonunitary:
            continue
        key = (round(E, 9), p)
        if key in seen:
            k = seen[key]
            if sol.unitary and not out[k].unitary:
                out[k] = sol
            continue
        seen[key] = len(out)
        out.append(sol)
    out.sort(key=lambda s: (s.energy, s.pairing))
    return out


# ---------------------------------------------------------------------------
# numeric fallback

def _z_roots(alg: CubicAlgebra, E: float) -> tuple:
    sf = structure_function(alg, E, 0.0)
    coeffs = np.trim_zeros(np.asarray(sf.coefficients, dtype=float), "b")
    if len(coeffs) < 2:
        return coeffs, np.array([])
    with np.errstate(all="ignore"):
        r = np.roots(coeffs[::-1])
    if not np.all(np.isfinite(r)):
        raise RootFindFailure(f"non-finite roots of Phi(z) at E={E:g}")
    # a double root comes back split by ~sqrt(eps) in opposite directions;
    # the pair mean is accurate to roundoff
    scale = max(1.0, float(np.max(np.abs(r))))
    for a, b in itertools.combinations(range(len(r)), 2):
        if abs(r[a] - r[b]) < 1e-6 * scale:
            m = 0.5 * (r[a] + r[b])
            r[a] = r[b] = m
    return coeffs, r


def _perms(n, _cache={}):
    if n not in _cache:
        _cache[n] = np.array(list(itertools.permutations(range(n))), dtype=int)
    return _cache[n]


def _nearest(roots, target):
    return roots[int(np.argmin(np.abs(roots - target)))]


def solve_generic(alg: CubicAlgebra, p: int, E_range: Sequence[float], grid: int = 2001,
                  tol: float = 1e-10, include_nonunitary: bool = False) -> list:
    """Numeric fallback: scan E and locate where two real roots of Phi(z) sit p+1 apart.

    At each grid energy the candidate u values are the real roots of the
    quartic Phi(x=0) in u. Roots are followed across the grid by
    nearest-neighbour matching with linear extrapolation; for every ordered
    pair of branches the difference z_j - z_i - (p+1) is bracketed and bisected
    to ``tol`` in E, and the result is accepted only if |Phi(p+1)| vanishes
    there. Brackets on which the difference is negligible at both ends are
    rejected: the pair then sits p+1 apart at every E, which is not an
    isolated level.
    """
    lo, hi = float(E_range[0]), float(E_range[1])
    if not hi > lo:
        return []
    Es = np.linspace(lo, hi, int(grid))
    branches = []
    prev = prev2 = None
    for E in Es:
        _, r = _z_roots(alg, E)
        if prev is None or len(r) != len(prev):
            cur = np.sort_complex(r)
            prev2 = None
        else:
            guess = prev if prev2 is None else 2 * prev - prev2
            perms = _perms(len(r))
            cost = np.abs(r[perms] - guess[None, :]).sum(axis=1)
            cur = r[perms[int(np.argmin(cost))]]
        branches.append(cur)
        prev2, prev = prev, cur
    nb = min(len(b) for b in branches) if branches else 0
    Z = np.array([b[:nb] for b in branches])

    def real(z):
        return abs(z.imag) <= 1e-7 * max(1.0, abs(z))

    found = []
    for i, j in itertools.permutations(range(nb), 2):
        G = np.full(len(Es), np.nan)
        for k in range(len(Es)):
            if real(Z[k, i]) and real(Z[k, j]):
                G[k] = Z[k, j].real - Z[k, i].real - (p + 1)
        for k in range(len(Es) - 1):
            ga, gb = G[k], G[k + 1]
            if not (np.isfinite(ga) and np.isfinite(gb)):
                continue
            if abs(ga) <= 1e-9 * (p + 1) and abs(gb) <= 1e-9 * (p + 1):
                continue  # constant separation p+1: holds along E, not a level
            if ga == 0.0:
                found.append((Es[k], Z[k, i].real))
                continue
            if ga * gb > 0:
                continue
            Ea, Eb = Es[k], Es[k + 1]
            zia, zib, zja, zjb = Z[k, i], Z[k + 1, i], Z[k, j], Z[k + 1, j]
            ok = True
            while Eb - Ea > tol:
                Em = 0.5 * (Ea + Eb)
                _, r = _z_roots(alg, Em)
                zi = _nearest(r, 0.5 * (zia + zib))
                zj = _nearest(r, 0.5 * (zja + zjb))
                if not (real(zi) and real(zj)):
                    ok = False
                    break
                gm = zj.real - zi.real - (p + 1)
                if gm == 0.0:
                    Ea = Eb = Em
                    zia = zib = zi
                    break
                if ga * gm < 0:
                    Eb, zib, zjb = Em, zi, zj
                else:
                    Ea, zia, zja, ga = Em, zi, zj, gm
            if ok:
                Em = 0.5 * (Ea + Eb)
                _, r = _z_roots(alg, Em)
                found.append((Em, _nearest(r, 0.5 * (zia + zib)).real))
    out = []
    seen = set()
    for E, u in sorted(found):
        key = (round(E, 7), p)
        if key in seen:
            continue
        sf = structure_function(alg, E, u)
        xs = np.arange(0, p + 2, dtype=float)
        vals = sf(xs)
        coeffs = np.asarray(sf.coefficients)
        scale = abs(coeffs[-1]) * max(1.0, abs(u) + p + 1) ** (len(coeffs) - 1)
        if abs(vals[0]) > 1e-6 * scale or abs(vals[-1]) > 1e-6 * scale:
            continue
        phi_in = tuple(float(v) for v in vals[1:p + 1])
        unitary = _is_unitary(phi_in, scale)
        if not unitary and not include_nonunitary:
            continue
        seen.add(key)
        xr = sf.x_roots()
        out.append(RepresentationSolution(
            u=float(u), p=p, energy=float(E) + 0.0, family_id="generic", phi_values=phi_in,
            unitary=unitary, x_roots=tuple(np.sort(np.real(xr))),
            phi_boundary=(float(vals[0]), float(vals[-1]))))
    return out


def physical_filter(solutions, v_min: float) -> list:
    """Flag (never drop) solutions below the potential minimum; the bound is inclusive."""
    return [replace(s, physical=bool(s.energy >= v_min)) for s in solutions]


def _match_family(spec, sol, tol=1e-8):
    for fam in spec.reference_families:
        if fam.kind != "algebraic" or fam.pattern is None:
            continue
        if fam.p_max is not None and sol.p > fam.p_max:
            continue
        if abs(fam.energy(sol.p) - sol.energy) > tol * max(1.0, abs(sol.energy)):
            continue
        want = sorted(fam.x_roots(sol.p))
        if np.allclose(want, sorted(sol.x_roots), atol=tol, rtol=0):
            return fam.family_id
    return None


def representations(potential_id: str, p_max: int, include_nonunitary: bool = False,
                    **params) -> list:
    """All solutions for p = 0..p_max, labelled with catalog family ids and physical flags."""
    if potential_id not in catalog.IDS:
        raise UnknownPotential(f"unknown potential id {potential_id!r}")
    spec = catalog.get_potential(potential_id, **params)
    if spec.phi_factored is None:
        if potential_id in ("p5", "p6"):
            raise NoFiniteCubicAlgebra(f"{potential_id} has no finite cubic algebra")
        raise NotCatalogued(f"{potential_id}: no structure function catalogued")
    sols = []
    for p in range(p_max + 1):
        for s in solve_factored(spec.phi_factored.roots, spec.phi_factored.c, p,
                                include_nonunitary=include_nonunitary):
            fid = _match_family(spec, s)
            if fid is not None:
                s = replace(s, family_id=fid)
            sols.append(s)
    return physical_filter(sols, spec.v_min)


def assemble_spectrum(potential_id: str, p_max: int, merge_tol: float = 1e-8, **params) -> Spectrum:
    """Union of the unitary physical representations for p = 0..p_max.

    Each entry keeps its own family label; ``Spectrum.levels()`` gives the
    merged totals. Unitary but unphysical solutions go to ``flagged``.
    """
    sols = representations(potential_id, p_max, **params)
    spec = catalog.get_potential(potential_id, **params)
    entries, flagged = [], []
    for s in sols:
        e = SpectrumEntry(s.energy, s.dimension, s.family_id)
        (entries if s.physical else flagged).append(e)
    return Spectrum(entries=entries, parameters=dict(spec.params), flagged=flagged,
                    tol=merge_tol, solutions=sols)
