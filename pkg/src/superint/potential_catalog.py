"""Catalog of the two-dimensional superintegrable potentials.

Each entry carries its potential (as a sum of two 1D parts), the cubic algebra
constants and Casimir where a finite cubic algebra exists, the factored
structure function (four roots affine in E), and closed-form reference
families of the spectrum.

Parameter modes for the entries with a singular pair 1/(x-a)^2 + 1/(x+a)^2:
``a0`` selects a = i*a0 (the pair becomes the regular 2(x^2-a0^2)/(x^2+a0^2)^2),
``a`` selects a real a (poles on the line). Internally only a^2 is needed,
stored as ``a2`` (negative in the a = i*a0 mode).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from .algebra_core import CubicAlgebra, EnergyPolynomial
from .errors import NoFiniteCubicAlgebra, NotCatalogued, SingularPoint, UnknownPotential
from .spectra import Spectrum, SpectrumEntry

IDS = ("reducible_iso", "reducible_sw1", "reducible_sw2", "p1", "p2", "p3", "p4", "p5", "p6")

FORMULAS = {
    "reducible_iso": "V = w^2 (x^2 + y^2) / 2",
    "reducible_sw1": "V = w^2 (x^2 + y^2) / 2 + b/x^2 + c/y^2",
    "reducible_sw2": "V = w^2 (4x^2 + y^2) / 2 + b/y^2 + c x",
    "p1": "V = hbar^2 [ (x^2 + y^2)/(8a^4) + 1/(x-a)^2 + 1/(x+a)^2 ]",
    "p2": "V = w^2 (9x^2 + y^2) / 2",
    "p3": "V = w^2 (9x^2 + y^2) / 2 + hbar^2/y^2",
    "p4": "V = hbar^2 [ (9x^2 + y^2)/(8a^4) + 1/(y-a)^2 + 1/(y+a)^2 ]",
    "p5": "V = hbar^2 [ (x^2 + y^2)/(8a^4) + 1/y^2 + 1/(x-a)^2 + 1/(x+a)^2 ]",
    "p6": "V = hbar^2 [ (x^2 + y^2)/(8a^4) + 1/(x-a)^2 + 1/(x+a)^2 + 1/(y-a)^2 + 1/(y+a)^2 ]",
}

_A_ENTRIES = ("p1", "p4", "p5", "p6")


@dataclass(frozen=True)
class FamilyDescriptor:
    """Closed-form family of levels.

    kind 'algebraic':  E = scale * (offset + weights[0] * p), degeneracy p+1,
                       p = 0..p_max (p_max None means unbounded).
    kind 'separation' / 'susy':  one state per index tuple k >= 0 with
                       E = scale * (offset + sum(w_i k_i)).
    ``counts`` marks the families whose union enumerates the full spectrum
    (algebraic families that duplicate them are kept for comparison only).
    ``pattern`` lists the x-roots of Phi as (coef_p, const) pairs.
    """

    family_id: str
    kind: str
    formula: str
    scale: float
    offset: Fraction
    weights: tuple
    counts: bool = True
    p_max: Optional[int] = None
    pattern: Optional[tuple] = None
    flags: tuple = ()

    def energy(self, *k) -> float:
        val = self.offset + sum(Fraction(w) * int(ki) for w, ki in zip(self.weights, k))
        return self.scale * float(val)

    def enumerate(self, E_max: float, tol: float = 1e-9) -> list:
        """(E, degeneracy, index) triples with E <= E_max."""
        out = []
        if self.kind == "algebraic":
            p = 0
            while True:
                if self.p_max is not None and p > self.p_max:
                    break
                E = self.energy(p)
                if E > E_max + tol:
                    if float(self.weights[0]) * self.scale > 0:
                        break
                else:
                    out.append((E, p + 1, (p,)))
                p += 1
                if p > 10000:
                    break
            return out
        n = len(self.weights)
        if n == 0:
            E = self.energy()
            return [(E, 1, ())] if E <= E_max + tol else []
        steps = [float(w) * self.scale for w in self.weights]
        if any(s <= 0 for s in steps):
            raise ValueError("separation families need positive index weights")
        base = self.energy(*([0] * n))
        ranges = [range(int(max(0, np.floor((E_max - base) / s + 1e-9))) + 1) for s in steps]
        for k in itertools.product(*ranges):
            E = self.energy(*k)
            if E <= E_max + tol:
                out.append((E, 1, k))
        return out

    def x_roots(self, p: int) -> list:
        return [float(Fraction(c) * p + Fraction(d)) for c, d in self.pattern]

    def to_json(self) -> dict:
        d = {
            "family_id": self.family_id,
            "kind": self.kind,
            "formula": self.formula,
            "scale": self.scale,
            "offset": str(self.offset),
            "weights": [str(Fraction(w)) for w in self.weights],
            "counts": self.counts,
        }
        if self.p_max is not None:
            d["p_max"] = self.p_max
        if self.pattern is not None:
            d["phi_x_roots"] = [[str(Fraction(c)), str(Fraction(v))] for c, v in self.pattern]
        if self.flags:
            d["flags"] = list(self.flags)
        return d


@dataclass(frozen=True)
class FactoredPhi:
    """Phi(x) = c * prod_i (x + u - r_i(E)),  r_i(E) = slope_i * E + intercept_i."""

    c: float
    roots: tuple  # ((slope, intercept), ...)

    def at(self, E: float) -> tuple:
        return self.c, tuple(s * E + t for s, t in self.roots)


@dataclass
class PotentialSpec:
    id: str
    params: dict
    formula: str
    vx: Callable
    vy: Callable
    domains: tuple  # per axis: 'line', 'half' (pole at 0) or 'singular' (poles on the line)
    algebra: Optional[CubicAlgebra] = None
    phi_factored: Optional[FactoredPhi] = None
    reference_families: list = field(default_factory=list)
    v_min: Optional[float] = None
    poles: tuple = ((), ())
    parity: tuple = ()
    notes: tuple = ()

    def v_xy(self, x, y):
        return self.vx(x) + self.vy(y)

    @property
    def mode(self) -> str:
        if "a0" in self.params:
            return "imag"
        if "a" in self.params:
            return "real"
        return "none"


# ---------------------------------------------------------------------------
# 1D building blocks

def _pair(s, a2):
    """1/(s-a)^2 + 1/(s+a)^2 written through a^2 (real rational also for a = i*a0)."""
    return 2.0 * (s**2 + a2) / (s**2 - a2) ** 2


def _check_poles(s, poles, what):
    s = np.asarray(s, dtype=float)
    for pole in poles:
        if np.any(np.isclose(s, pole, rtol=0.0, atol=1e-14)):
            raise SingularPoint(f"{what} = {pole:g} is a pole of the potential")


def _resolve_a(id_, a0, a):
    if a0 is not None and a is not None:
        raise ValueError("give either a0 (a = i*a0) or a (real), not both")
    if a is None and a0 is None:
        a0 = 1.0
    if a0 is not None:
        if a0 <= 0:
            raise ValueError("a0 must be > 0")
        return {"a0": float(a0)}, -float(a0) ** 2
    if a <= 0:
        raise ValueError("a must be > 0")
    return {"a": float(a)}, float(a) ** 2


def _fam(fid, kind, formula, scale, offset, weights, **kw):
    return FamilyDescriptor(fid, kind, formula, float(scale), Fraction(offset),
                            tuple(Fraction(w) for w in weights), **kw)


def _P(*pairs):
    return tuple((Fraction(c), Fraction(d)) for c, d in pairs)


def get_potential(id: str, hbar: float = 1.0, omega: float = 1.0, a0: Optional[float] = None,
                  a: Optional[float] = None, b: float = 1.0, c: float = 1.0) -> PotentialSpec:
    """Build the catalog entry ``id`` at the given parameters."""
    if id not in IDS:
        raise UnknownPotential(f"unknown potential id {id!r}; known: {', '.join(IDS)}")
    if hbar <= 0 or omega <= 0:
        raise ValueError("hbar and omega must be > 0")
    h, w = float(hbar), float(omega)
    F = Fraction

    if id == "reducible_iso":
        return PotentialSpec(
            id, {"hbar": h, "omega": w}, FORMULAS[id],
            vx=lambda x: 0.5 * w**2 * np.asarray(x, float) ** 2,
            vy=lambda y: 0.5 * w**2 * np.asarray(y, float) ** 2,
            domains=("line", "line"), v_min=0.0, parity=("x", "y"),
            reference_families=[_fam("separation", "separation", "E = hbar w (k1 + k2 + 1)",
                                     h * w, 1, (1, 1))])
    if id == "reducible_sw1":
        ex = 1 + 0.5 * np.sqrt(1 + 8 * b / h**2)
        ey = 1 + 0.5 * np.sqrt(1 + 8 * c / h**2)
        fam = FamilyDescriptor("separation", "separation",
                               "E = hbar w (2k1 + 2k2 + 2 + sqrt(1+8b/hbar^2)/2 + sqrt(1+8c/hbar^2)/2)",
                               h * w, F(ex + ey), (F(2), F(2)))
        return PotentialSpec(
            id, {"hbar": h, "omega": w, "b": float(b), "c": float(c)}, FORMULAS[id],
            vx=lambda x: _sw_part(x, w, b), vy=lambda y: _sw_part(y, w, c),
            domains=("half", "half"), poles=((0.0,), (0.0,)), parity=("x", "y"),
            reference_families=[fam])
    if id == "reducible_sw2":
        ey = 1 + 0.5 * np.sqrt(1 + 8 * b / h**2)
        off = (h * w + h * w * ey - c**2 / (8 * w**2)) / (h * w)
        fam = FamilyDescriptor("separation", "separation",
                               "E = hbar w (4k1 + 2k2 + 1 + 1 + sqrt(1+8b/hbar^2)/2) - c^2/(8w^2)",
                               h * w, F(off), (F(4), F(2)))
        return PotentialSpec(
            id, {"hbar": h, "omega": w, "b": float(b), "c": float(c)}, FORMULAS[id],
            vx=lambda x: 2.0 * w**2 * np.asarray(x, float) ** 2 + c * np.asarray(x, float),
            vy=lambda y: _sw_part(y, w, b),
            domains=("line", "half"), poles=((), (0.0,)), parity=("y",),
            reference_families=[fam])
    if id in ("p2", "p3"):
        return _p23(id, h, w)
    return _a_entry(id, h, a0, a)


def _sw_part(s, w, g):
    s = np.asarray(s, float)
    return 0.5 * w**2 * s**2 + g / s**2


def _p23(id_, h, w):
    F = Fraction
    k = 1.0 / (6 * w * h)
    U = w * h
    mu = -2 * h**2
    delta = EnergyPolynomial.const(144 * w**2 * h**2)
    nu = EnergyPolynomial((0.0, 6 * h**2))
    zeta = EnergyPolynomial((0.0, 72 * w**2 * h**4, 0.0, -8 * h**2))
    if id_ == "p2":
        xi = EnergyPolynomial.const(-56 * w**2 * h**4)
        K = EnergyPolynomial((720 * w**4 * h**6, 0.0, 64 * w**2 * h**4, 0.0, -16 * h**2))
        roots = ((-k, 0.5), (k, 1 / 6), (k, 0.5), (k, 5 / 6))
        fams = [
            _fam("separation", "separation", "E = w hbar (3k1 + k2 + 2)", U, 2, (3, 1)),
            _fam("alg:p+2/3", "algebraic", "E = 3 w hbar (p + 2/3)", U, 2, (3,), counts=False,
                 pattern=_P((0, 0), (1, 1), (1, F(2, 3)), (1, F(1, 3)))),
            _fam("alg:p+1", "algebraic", "E = 3 w hbar (p + 1)", U, 3, (3,), counts=False,
                 pattern=_P((0, 0), (1, 1), (1, F(2, 3)), (1, F(4, 3)))),
            _fam("alg:p+4/3", "algebraic", "E = 3 w hbar (p + 4/3)", U, 4, (3,), counts=False,
                 pattern=_P((0, 0), (1, 1), (1, F(5, 3)), (1, F(4, 3)))),
        ]
        vy = lambda y: 0.5 * w**2 * np.asarray(y, float) ** 2
        v_min, domains, poles, parity = 0.0, ("line", "line"), ((), ()), ("x", "y")
    else:
        xi = EnergyPolynomial.const(-8 * w**2 * h**4)
        K = EnergyPolynomial((-1008 * w**4 * h**6, 0.0, 256 * w**2 * h**4, 0.0, -16 * h**2))
        roots = ((-k, 0.5), (k, -1 / 6), (k, 0.5), (k, 7 / 6))
        fams = [
            _fam("separation", "separation", "E = w hbar (3k1 + 2k2 + 4)", U, 4, (3, 2)),
            _fam("alg:p+5/3", "algebraic", "E = 3 w hbar (p + 5/3)", U, 5, (3,), counts=False,
                 pattern=_P((0, 0), (1, F(5, 3)), (1, 1), (1, F(7, 3)))),
            _fam("alg:p+1", "algebraic", "E = 3 w hbar (p + 1)", U, 3, (3,), counts=False,
                 pattern=_P((0, 0), (1, F(1, 3)), (1, F(5, 3)), (1, 1))),
        ]

        def vy(y):
            y = np.asarray(y, float)
            _check_poles(y, (0.0,), "y")
            return 0.5 * w**2 * y**2 + h**2 / y**2

        v_min, domains, poles, parity = np.sqrt(2.0) * w * h, ("line", "half"), ((), (0.0,)), ("x", "y")
    alg = CubicAlgebra(alpha=0.0, beta=0.0, mu=mu, delta=delta, nu=nu, xi=xi, zeta=zeta, casimir=K)
    notes = ()
    if id_ == "p3":
        notes = ("the algebraic families do not reproduce the separated spectrum; "
                 "see the decisions ledger",)
    return PotentialSpec(
        id_, {"hbar": h, "omega": w}, FORMULAS[id_],
        vx=lambda x: 4.5 * w**2 * np.asarray(x, float) ** 2, vy=vy, domains=domains,
        algebra=alg, phi_factored=FactoredPhi(-36 * w**2 * h**4, roots),
        reference_families=fams, v_min=v_min, poles=poles, parity=parity, notes=notes)


def _a_entry(id_, h, a0, a):
    params, a2 = _resolve_a(id_, a0, a)
    params = {"hbar": h, **params}
    imag = a2 < 0
    a4 = a2**2
    U = h**2 / abs(a2)  # hbar^2/a0^2 or hbar^2/a^2
    F = Fraction
    poles_1d = () if imag else (-np.sqrt(a2), np.sqrt(a2))
    dom_pair = "line" if imag else "singular"

    def p1_part(s):
        s = np.asarray(s, float)
        if not imag:
            _check_poles(s, poles_1d, "coordinate")
        return h**2 * (s**2 / (8 * a4) + _pair(s, a2))

    def osc(scale2):
        return lambda s: h**2 * scale2 * np.asarray(s, float) ** 2 / (8 * a4)

    def radial(s):
        s = np.asarray(s, float)
        _check_poles(s, (0.0,), "y")
        return h**2 * (s**2 / (8 * a4) + 1.0 / s**2)

    alg = phi = None
    fams: list = []
    v_min = None
    notes: tuple = ()
    sign = 1 if a2 > 0 else -1
    if id_ == "p1":
        vx, vy = p1_part, osc(1.0)
        domains, poles, parity = (dom_pair, "line"), (poles_1d, ()), ("x", "y")
        alg = CubicAlgebra(
            mu=-2 * h**2,
            delta=EnergyPolynomial.const(4 * h**4 / a4),
            nu=EnergyPolynomial((6 * h**4 / a2, -6 * h**2)),
            xi=EnergyPolynomial((2 * h**6 / a4, 8 * h**4 / a2)),
            zeta=EnergyPolynomial((-6 * h**8 / a2**3, -2 * h**6 / a4, -8 * h**4 / a2, 8 * h**2)),
            casimir=EnergyPolynomial((-3 * h**10 / a4**2, -40 * h**8 / a2**3, 16 * h**6 / a4,
                                      32 * h**4 / a2, -16 * h**2)),
            sqrt_delta_sign=sign)
        s_ = a2 / h**2
        phi = FactoredPhi(-h**6 / a4, ((-s_, -0.5), (s_, 0.5), (-s_, 1.5), (-s_, 2.5)))
        if imag:
            fams = [
                _fam("alg:(p+2)/2", "algebraic", "E = hbar^2 (p+2) / (2 a0^2)", U, 1, (F(1, 2),),
                     counts=False, pattern=_P((0, 0), (1, 1), (1, 3), (1, 4))),
                _fam("alg:-p/2", "algebraic", "E = -hbar^2 p / (2 a0^2), p in {0, 1}", U, 0,
                     (F(-1, 2),), counts=False, p_max=1,
                     pattern=_P((0, 0), (1, 1), (0, 3), (0, 2))),
                _fam("susy:doublet", "susy", "E = hbar^2 (k1 + k2 + 2) / (2 a0^2)", U, 1,
                     (F(1, 2), F(1, 2))),
                _fam("susy:singlet", "susy", "E = hbar^2 (k2 - 1) / (2 a0^2)", U, F(-1, 2),
                     (F(1, 2),)),
            ]
            v_min = -2.0 * U
        else:
            fams = [_fam("alg:(p+3)/2", "algebraic", "E = hbar^2 (p+3) / (2 a^2)", U, F(3, 2),
                         (F(1, 2),), flags=("real_a_unverified",),
                         pattern=_P((0, 0), (1, 1), (0, -1), (0, -3)))]
    elif id_ == "p4":
        vx, vy = osc(9.0), p1_part
        domains, poles, parity = ("line", dom_pair), ((), poles_1d), ("y",)
        alg = CubicAlgebra(
            mu=-2 * h**2,
            delta=EnergyPolynomial.const(36 * h**4 / a4),
            nu=EnergyPolynomial((0.0, 6 * h**2)),
            xi=EnergyPolynomial.const(10 * h**6 / a4),
            zeta=EnergyPolynomial((-24 * h**8 / a2**3, 18 * h**6 / a4, 0.0, -8 * h**2)),
            casimir=EnergyPolynomial((-171 * h**10 / a4**2, 96 * h**8 / a2**3, 112 * h**6 / a4,
                                      0.0, -16 * h**2)),
            sqrt_delta_sign=sign)
        s_ = a2 / (3 * h**2)
        phi = FactoredPhi(-9 * h**6 / a4, ((s_, -0.5), (-s_, 0.5), (s_, 5 / 6), (s_, 7 / 6)))
        if imag:
            fams = [
                _fam("alg:3p/2", "algebraic", "E = 3 hbar^2 p / (2 a0^2)", U, 0, (F(3, 2),),
                     counts=False, pattern=_P((0, 0), (1, 1), (0, F(4, 3)), (0, F(5, 3)))),
                _fam("alg:3(p+4/3)/2", "algebraic", "E = 3 hbar^2 (p + 4/3) / (2 a0^2)", U, 2,
                     (F(3, 2),), counts=False,
                     pattern=_P((0, 0), (1, 1), (0, F(-4, 3)), (0, F(1, 3)))),
                _fam("alg:3(p+5/3)/2", "algebraic", "E = 3 hbar^2 (p + 5/3) / (2 a0^2)", U,
                     F(5, 2), (F(3, 2),), counts=False,
                     pattern=_P((0, 0), (1, 1), (0, F(-5, 3)), (0, F(-1, 3))),
                     flags=("pattern_from_factored_form",)),
                _fam("susy:doublet", "susy", "E = hbar^2 (3k1 + k2 + 3) / (2 a0^2)", U, F(3, 2),
                     (F(3, 2), F(1, 2))),
                _fam("susy:singlet", "susy", "E = 3 hbar^2 k1 / (2 a0^2)", U, 0, (F(3, 2),)),
            ]
            v_min = -2.0 * U
        else:
            flag = ("real_a_unverified",)
            fams = [
                _fam("alg:3(p+2)/2", "algebraic", "E = 3 hbar^2 (p + 2) / (2 a^2)", U, 3,
                     (F(3, 2),), flags=flag,
                     pattern=_P((0, 0), (1, 1), (1, F(7, 3)), (1, F(8, 3)))),
                _fam("alg:3(p+2/3)/2", "algebraic", "E = 3 hbar^2 (p + 2/3) / (2 a^2)", U, 1,
                     (F(3, 2),), flags=flag + ("unitary_only_p0",),
                     pattern=_P((0, 0), (1, 1), (1, F(4, 3)), (1, F(-1, 3)))),
                _fam("alg:3(p+1/3)/2", "algebraic", "E = 3 hbar^2 (p + 1/3) / (2 a^2)", U,
                     F(1, 2), (F(3, 2),), flags=flag + ("unitary_only_p0",),
                     pattern=_P((0, 0), (1, 1), (1, F(2, 3)), (1, F(-2, 3)))),
            ]
    elif id_ == "p5":
        vx, vy = p1_part, radial
        domains, poles, parity = (dom_pair, "half"), (poles_1d, (0.0,)), ("x", "y")
        if imag:
            fams = [
                _fam("susy:doublet", "susy", "E = hbar^2 (k1 + 2k2 + 5) / (2 a0^2)", U, F(5, 2),
                     (F(1, 2), 1), flags=("printed_offset",)),
                _fam("susy:singlet", "susy", "E = hbar^2 (2k2 + 2) / (2 a0^2)", U, 1, (1,),
                     flags=("printed_offset",)),
            ]
            notes = ("the printed p5 families sit hbar^2/(2a0^2) above the separated "
                     "spectrum of this potential; susy_spectrum reports the derived values",)
    else:  # p6
        vx, vy = p1_part, p1_part
        domains, poles, parity = (dom_pair, dom_pair), (poles_1d, poles_1d), ("x", "y")
        if imag:
            fams = [
                _fam("susy:doublet", "susy", "E = hbar^2 (k1 + k2 + 3) / (2 a0^2)", U, F(3, 2),
                     (F(1, 2), F(1, 2))),
                _fam("susy:singlet-x", "susy", "E = hbar^2 k2 / (2 a0^2)", U, 0, (F(1, 2),)),
                _fam("susy:singlet-y", "susy", "E = hbar^2 k1 / (2 a0^2)", U, 0, (F(1, 2),)),
                _fam("susy:double-singlet", "susy", "E = -3 hbar^2 / (2 a0^2)", U, F(-3, 2), ()),
            ]
            v_min = -4.0 * U
    spec = PotentialSpec(id_, params, FORMULAS[id_], vx=vx, vy=vy, domains=domains,
                         algebra=alg, phi_factored=phi, reference_families=fams, v_min=v_min,
                         poles=poles, parity=parity, notes=notes)
    if spec.v_min is None:
        spec.v_min = estimate_vmin(spec)
    return spec


# ---------------------------------------------------------------------------
# operations

def evaluate(id: str, x: float, y: float, **params) -> float:
    spec = get_potential(id, **params)
    return float(spec.v_xy(x, y))


def get_algebra(id: str, **params) -> CubicAlgebra:
    if id in ("p5", "p6"):
        raise NoFiniteCubicAlgebra(f"{id}: the integrals do not close in a finite cubic algebra")
    if id.startswith("reducible"):
        raise NotCatalogued(f"{id}: quadratic-algebra data is not catalogued")
    spec = get_potential(id, **params)
    return spec.algebra


def _part_minimum(f, poles, domain, length):
    """Global minimum of a 1D part by dense sampling plus bounded refinement."""
    R = 40.0 * length
    if domain == "half":
        xs = np.geomspace(1e-3 * length, R, 20001)
    else:
        xs = np.linspace(-R, R, 40001)
    mask = np.ones_like(xs, dtype=bool)
    for pole in poles:
        mask &= np.abs(xs - pole) > 1e-3 * length
    xs = xs[mask]
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.asarray(f(xs), float)
    i = int(np.nanargmin(vals))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    if lo < hi:
        res = optimize.minimize_scalar(f, bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-12 * length})
        if res.fun < vals[i]:
            return float(res.fun)
    return float(vals[i])


def estimate_vmin(spec: PotentialSpec) -> float:
    length = np.sqrt(abs(spec.params.get("a0", spec.params.get("a", 1.0))) ** 2)
    if "omega" in spec.params:
        length = np.sqrt(spec.params["hbar"] / spec.params["omega"])
    total = 0.0
    for f, poles, dom in zip((spec.vx, spec.vy), spec.poles, spec.domains):
        total += _part_minimum(f, poles, dom, length)
    return total


def reference_spectrum(id: str, E_max: float, counting_only: bool = True, **params) -> Spectrum:
    """Closed-form enumeration of the catalogued families up to E_max."""
    spec = get_potential(id, **params)
    entries = []
    for fam in spec.reference_families:
        if counting_only and not fam.counts:
            continue
        for E, deg, _ in fam.enumerate(E_max):
            entries.append(SpectrumEntry(E, deg, fam.family_id))
    return Spectrum(entries=entries, parameters=dict(spec.params))


def catalog_json(**params) -> dict:
    out = {}
    for id_ in IDS:
        kw = {}
        if id_ in _A_ENTRIES:
            kw = {k: params[k] for k in ("hbar", "a0", "a") if k in params}
        else:
            kw = {k: params[k] for k in ("hbar", "omega", "b", "c") if k in params}
        spec = get_potential(id_, **kw)
        entry = {
            "formula": spec.formula,
            "params": spec.params,
            "domains": list(spec.domains),
            "has_cubic_algebra": spec.algebra is not None,
            "v_min": spec.v_min,
            "families": [f.to_json() for f in spec.reference_families],
        }
        if spec.phi_factored is not None:
            entry["phi_factored"] = {
                "c": spec.phi_factored.c,
                "roots_affine_in_E": [list(r) for r in spec.phi_factored.roots],
            }
        if spec.notes:
            entry["notes"] = list(spec.notes)
        out[id_] = entry
    return out


def dump_catalog(path=None, **params) -> str:
    text = json.dumps(catalog_json(**params), indent=2, sort_keys=False)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
