"""Cubic algebras, their deformed-oscillator realizations and matrix representations.

The cubic algebra generated by A, B and C = [A, B] is

    [A, C] = alpha A^2 + beta {A, B} + gamma A + delta B + epsilon
    [B, C] = mu A^3 + nu A^2 - beta B^2 - alpha {A, B} + xi A - gamma B + zeta

with gamma, delta, epsilon, nu, xi, zeta polynomials in the Hamiltonian H.
On an energy eigenspace H = E, every coefficient becomes a number, and the
algebra is realized on a Fock space |n> with

    A = A(N),   B = b(N) + b^dagger rho(N) + rho(N) b,   b^dagger b = Phi(N).

Conventions used throughout
---------------------------
* ``z = N + u`` is the shifted number operator; structure functions are
  stored as polynomials in ``z``.
* The off-diagonal matrix element of B is ``B[n, n-1] = sqrt(rho(n-1) Phi(n))``.
  This is the normalization under which the recurrence and the realized
  Casimir are linear in rho, and it is the one that turns the rho of Case 1
  into a polynomial structure function.
* Case 2 (beta = 0) has two admissible branches ``A(N) = +/- sqrt(delta) (N+u)``.
  ``CubicAlgebra.sqrt_delta_sign`` selects one; the catalogued factored forms
  for the a = i*a0 entries use the negative branch.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
import numpy.polynomial.polynomial as npoly

from .errors import NonUnitary, RealizationUndefined, RecurrenceSingular, RhoPole

# Case 1 gauge: rho(N) = 1 / (RHO_SCALE beta^8 z (1+z) (1+2z)^2),  z = N+u
RHO_SCALE = 3 * 2**12

_DEGREE_BOUNDS = {
    "gamma": 1, "delta": 1, "nu": 1,
    "epsilon": 2, "xi": 2,
    "zeta": 3,
    "casimir": 4,
}


@dataclass(frozen=True)
class EnergyPolynomial:
    """Polynomial in the energy, constant term first."""

    coefficients: tuple = (0.0,)

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients) or (0.0,)
        if not all(np.isfinite(coeffs)):
            raise ValueError("EnergyPolynomial coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coefficients) if c != 0.0]
        return nz[-1] if nz else 0

    def __call__(self, E):
        return npoly.polyval(E, self.coefficients)

    @classmethod
    def const(cls, c: float) -> "EnergyPolynomial":
        return cls((c,))


def _ep(x) -> EnergyPolynomial:
    if isinstance(x, EnergyPolynomial):
        return x
    if np.isscalar(x):
        return EnergyPolynomial((float(x),))
    return EnergyPolynomial(tuple(x))


@dataclass(frozen=True)
class AlgebraValues:
    """All algebra coefficients evaluated at one energy."""

    alpha: float
    beta: float
    mu: float
    gamma: float
    delta: float
    epsilon: float
    nu: float
    xi: float
    zeta: float
    K: float


@dataclass(frozen=True)
class CubicAlgebra:
    """Constant set of a cubic algebra together with its Casimir K(H)."""

    alpha: float = 0.0
    beta: float = 0.0
    mu: float = 0.0
    gamma: EnergyPolynomial = field(default_factory=EnergyPolynomial)
    delta: EnergyPolynomial = field(default_factory=EnergyPolynomial)
    epsilon: EnergyPolynomial = field(default_factory=EnergyPolynomial)
    nu: EnergyPolynomial = field(default_factory=EnergyPolynomial)
    xi: EnergyPolynomial = field(default_factory=EnergyPolynomial)
    zeta: EnergyPolynomial = field(default_factory=EnergyPolynomial)
    casimir: EnergyPolynomial = field(default_factory=EnergyPolynomial)
    sqrt_delta_sign: int = 1

    def __post_init__(self):
        for name in ("gamma", "delta", "epsilon", "nu", "xi", "zeta", "casimir"):
            poly = _ep(getattr(self, name))
            object.__setattr__(self, name, poly)
            if poly.degree > _DEGREE_BOUNDS[name]:
                raise ValueError(
                    f"{name} has degree {poly.degree} > {_DEGREE_BOUNDS[name]} allowed in H")
        if self.sqrt_delta_sign not in (1, -1):
            raise ValueError("sqrt_delta_sign must be +1 or -1")

    @property
    def is_case1(self) -> bool:
        return self.beta != 0.0

    def at(self, E: float) -> AlgebraValues:
        return AlgebraValues(
            float(self.alpha), float(self.beta), float(self.mu),
            float(self.gamma(E)), float(self.delta(E)), float(self.epsilon(E)),
            float(self.nu(E)), float(self.xi(E)), float(self.zeta(E)),
            float(self.casimir(E)),
        )


@dataclass(frozen=True)
class StructureFunction:
    """Phi(x) at fixed (u, E), in factored and/or coefficient form.

    ``coefficients`` is a polynomial in z = x + u (constant first).
    ``factored`` is ``(c, roots)`` meaning c * prod(x + u - r).
    """

    E: float
    u: float
    coefficients: Optional[tuple] = None
    factored: Optional[tuple] = None

    def __call__(self, x, form: Optional[str] = None):
        x = np.asarray(x, dtype=float)
        if form is None:
            form = "coefficient" if self.coefficients is not None else "factored"
        if form == "coefficient":
            if self.coefficients is None:
                raise ValueError("coefficient form not populated")
            return npoly.polyval(x + self.u, self.coefficients)
        if self.factored is None:
            raise ValueError("factored form not populated")
        c, roots = self.factored
        out = np.full(x.shape, float(c))
        for r in roots:
            out = out * (x + self.u - r)
        return out

    @property
    def degree(self) -> int:
        if self.coefficients is not None:
            nz = [i for i, c in enumerate(self.coefficients) if c != 0.0]
            return nz[-1] if nz else 0
        return len(self.factored[1])

    def x_roots(self) -> np.ndarray:
        """Zeros of Phi as a function of x (not of z)."""
        if self.factored is not None:
            return np.sort(np.array([r - self.u for r in self.factored[1]], dtype=float))
        c = np.trim_zeros(np.asarray(self.coefficients, dtype=float), "b")
        if len(c) <= 1:
            return np.array([])
        return np.sort_complex(npoly.polyroots(c) - self.u)


@dataclass(frozen=True)
class MatrixRepresentation:
    dimension: int
    energy: float
    u: float
    N: np.ndarray
    b_raise: np.ndarray
    b_lower: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    K: np.ndarray
    H: np.ndarray


# ---------------------------------------------------------------------------
# realizations

def _sqrt_delta(alg: CubicAlgebra, v: AlgebraValues) -> float:
    if not v.delta > 0.0:
        raise RealizationUndefined(f"delta(E) = {v.delta:g} must be > 0 for the Case 2 realization")
    return alg.sqrt_delta_sign * np.sqrt(v.delta)


def realize_case2(alg: CubicAlgebra, E: float, u: float):
    """A(N) = s (N+u), b(N) = -alpha (N+u)^2 - gamma (N+u)/s - epsilon/delta, s = +/-sqrt(delta)."""
    if alg.is_case1:
        raise ValueError("realize_case2 needs beta = 0")
    v = alg.at(E)
    s = _sqrt_delta(alg, v)

    def A_of_N(N):
        return s * (np.asarray(N, dtype=float) + u)

    def b_of_N(N):
        z = np.asarray(N, dtype=float) + u
        return -v.alpha * z**2 - v.gamma * z / s - v.epsilon / v.delta

    return A_of_N, b_of_N


def _check_case1_poles(z, what="rho"):
    z = np.atleast_1d(np.asarray(z, dtype=float))
    bad = {0.0: "0", -1.0: "-1", -0.5: "-1/2"} if what == "rho" else {0.5: "1/2", -0.5: "-1/2"}
    for pole, label in bad.items():
        if np.any(np.isclose(z, pole, rtol=0.0, atol=1e-12)):
            raise RhoPole(f"N+u = {label} hits a pole of {what}(N)")


def realize_case1(alg: CubicAlgebra, E: float, u: float, n_range: Optional[Sequence[int]] = None):
    """Case 1 realization with the polynomial-making gauge rho(N).

    b(N) is the solution of alpha A^2 + 2 beta A b + gamma A + delta b + epsilon = 0,
    i.e. b = -(alpha A^2 + gamma A + epsilon) / (2 beta A + delta).
    """
    if not alg.is_case1:
        raise ValueError("realize_case1 needs beta != 0")
    v = alg.at(E)
    be = v.beta
    if n_range is not None:
        _check_case1_poles(np.asarray(n_range, dtype=float) + u, "rho")

    def A_of_N(N):
        z = np.asarray(N, dtype=float) + u
        return be / 2.0 * (z**2 - 0.25 - v.delta / be**2)

    def b_of_N(N):
        z = np.asarray(N, dtype=float) + u
        _check_case1_poles(z, "b")
        A = A_of_N(N)
        return -(v.alpha * A**2 + v.gamma * A + v.epsilon) / (2.0 * be * A + v.delta)

    def rho_of_N(N):
        z = np.asarray(N, dtype=float) + u
        _check_case1_poles(z, "rho")
        return 1.0 / (RHO_SCALE * be**8 * z * (1.0 + z) * (1.0 + 2.0 * z) ** 2)

    return A_of_N, b_of_N, rho_of_N


# ---------------------------------------------------------------------------
# structure functions

def structure_function_case2(alg: CubicAlgebra, E: float, u: float) -> StructureFunction:
    """Closed-form quartic structure function of the beta = 0 case (coefficients in z = N+u)."""
    if alg.is_case1:
        raise ValueError("structure_function_case2 needs beta = 0")
    v = alg.at(E)
    s = _sqrt_delta(alg, v)
    al, ga, de, ep, nu, xi, ze, mu, K = (v.alpha, v.gamma, v.delta, v.epsilon,
                                         v.nu, v.xi, v.zeta, v.mu, v.K)
    s3 = s * de  # (sqrt delta)^3 with the branch sign
    c0 = K / (-4 * de) - ga * ep / (4 * s3) - ze / (4 * s) + ep**2 / (4 * de**2)
    c1 = (-al * ep / (2 * de) - xi / 4 - ga**2 / (4 * de) + ga * ep / (2 * s3)
          + al * ga / (4 * s) + ze / (2 * s) + nu * s / 12)
    c2 = (-nu * s / 4 - 3 * al * ga / (4 * s) + ga**2 / (4 * de) + ep * al / (2 * de)
          + al**2 / 4 + xi / 4 + mu * de / 8)
    c3 = -al**2 / 2 + ga * al / (2 * s) + nu * s / 6 - mu * de / 4
    c4 = al**2 / 4 + mu * de / 8
    return StructureFunction(E=E, u=u, coefficients=(c0, c1, c2, c3, c4))


def _fpoly(*coeffs) -> np.ndarray:
    return np.array([Fraction(c) for c in coeffs], dtype=object)


def case1_polynomial(v: AlgebraValues) -> np.ndarray:
    """Degree-10 polynomial Phi(z) of Case 1, computed in exact rational arithmetic.

    Eliminates Phi(N+1) between the realized [B, C] relation and the realized
    Casimir, multiplies by 1/rho(N-1), and divides out the common denominator.
    Returned as float coefficients, constant term first.
    """
    F = Fraction
    al, be, mu = F(v.alpha), F(v.beta), F(v.mu)
    ga, de, ep = F(v.gamma), F(v.delta), F(v.epsilon)
    nu, xi, ze, K = F(v.nu), F(v.xi), F(v.zeta), F(v.K)
    mul, add = npoly.polymul, npoly.polyadd

    def scal(c, p):
        return np.array([c * t for t in p], dtype=object)

    A = _fpoly(be / 2 * (F(-1, 4) - de / be**2), 0, be / 2)
    dA_up = _fpoly(be, be)            # A(z+1) - A(z) = beta z + beta/2, plus beta/2
    dA_dn = _fpoly(-be, be)           # A(z) - A(z-1) = beta z - beta/2, minus beta/2
    dA = _fpoly(be / 2, be)           # A(z+1) - A(z)
    dAm = _fpoly(-be / 2, be)         # A(z) - A(z-1)
    D = _fpoly(-be**2 / 4, 0, be**2)  # 2 beta A + delta
    A2 = mul(A, A)
    A3 = mul(A2, A)
    A4 = mul(A3, A)
    Nb = scal(F(-1), add(add(scal(al, A2), scal(ga, A)), _fpoly(ep)))  # b = Nb / D
    D2 = mul(D, D)
    NbD = mul(Nb, D)
    Nb2 = mul(Nb, Nb)
    base = add(_fpoly(be**2 - de), scal(-2 * be, A))  # beta^2 - delta - 2 beta A
    f = add(base, scal(F(-1), mul(dA, dA)))
    g = add(base, scal(F(-1), mul(dAm, dAm)))

    cubic = add(add(add(scal(mu, A3), scal(nu, A2)), scal(xi, A)), _fpoly(ze))
    rhs = add(add(mul(cubic, D2), scal(-be, Nb2)),
              add(scal(-2 * al, mul(A, NbD)), scal(-ga, NbD)))
    c2 = -mu * be**2 / 6 + be * nu / 3 + de * mu / 2 + al**2 + xi
    c1 = -mu * be * de / 6 + de * nu / 3 + al * ga + 2 * ze
    quartic = add(add(scal(mu / 2, A4), scal(F(2, 3) * (nu + mu * be), A3)),
                  add(scal(c2, A2), scal(c1, A)))
    Q = add(add(scal(-2 * al, mul(A2, NbD)), mul(base, Nb2)),
            add(add(scal(2 * (al * be - ga), mul(A, NbD)), scal(be * ga - 2 * ep, NbD)),
                mul(quartic, D2)))
    num = add(mul(dA_up, add(scal(K, D2), scal(F(-1), Q))), scal(F(-1, 2), mul(f, rhs)))
    den = mul(D2, add(mul(dA_dn, f), mul(dA_up, g)))
    # 1/rho(N-1) = RHO_SCALE beta^8 (z-1) z (2z-1)^2
    rho_inv = scal(RHO_SCALE * be**8, mul(mul(_fpoly(-1, 1), _fpoly(0, 1)), mul(_fpoly(-1, 2), _fpoly(-1, 2))))
    num = mul(num, rho_inv)
    num = np.trim_zeros(num, "b")
    den = np.trim_zeros(den, "b")
    if len(num) == 0:
        return np.zeros(1)
    quo, rem = npoly.polydiv(num, den)
    if any(r != 0 for r in np.atleast_1d(rem)):
        raise ArithmeticError("Case 1 structure function is not polynomial; check inputs")
    return np.array([float(c) for c in quo])


def structure_function_case1(alg: CubicAlgebra, E: float, u: float) -> StructureFunction:
    """Case 1 structure function: exact degree-10 polynomial in z = N+u."""
    if not alg.is_case1:
        raise ValueError("structure_function_case1 needs beta != 0")
    v = alg.at(E)
    coeffs = case1_polynomial(v)
    return StructureFunction(E=E, u=u, coefficients=tuple(coeffs))


def structure_function(alg: CubicAlgebra, E: float, u: float) -> StructureFunction:
    if alg.is_case1:
        return structure_function_case1(alg, E, u)
    return structure_function_case2(alg, E, u)


# ---------------------------------------------------------------------------
# recurrence oracle

def _site_terms(alg: CubicAlgebra, v: AlgebraValues, z: float):
    """Pieces of the realized [B,C] and Casimir relations at z = n+u.

    Returns (up, down, f_rho, g_rho, rhs, Q) such that
        2 up Phi(n+1) - 2 down Phi(n) = rhs
        f_rho Phi(n+1) + g_rho Phi(n) = K - Q
    """
    be = v.beta
    if alg.is_case1:
        if np.isclose(z, 0.0, atol=1e-12) or np.isclose(abs(z), 0.5, atol=1e-12):
            raise RhoPole(f"N+u = {z:g} hits a pole of the Case 1 realization")
        c = RHO_SCALE * be**8
        # (dA(n)+beta/2) rho(n) and (dA(n-1)-beta/2) rho(n-1) with the common factors cancelled
        up = be / (c * z * (2 * z + 1) ** 2)
        down = be / (c * z * (2 * z - 1) ** 2)
        f_rho = -be * (2 * z - 1) * up
        g_rho = -be * (2 * z + 1) * down
        A = be / 2.0 * (z**2 - 0.25 - v.delta / be**2)
        b = -(v.alpha * A**2 + v.gamma * A + v.epsilon) / (2.0 * be * A + v.delta)
    else:
        s = _sqrt_delta(alg, v)
        up = down = s
        f_rho = g_rho = -2.0 * v.delta
        A = s * z
        b = -v.alpha * z**2 - v.gamma * z / s - v.epsilon / v.delta
    rhs = (v.mu * A**3 + v.nu * A**2 - be * b**2 - 2 * v.alpha * A * b + v.xi * A
           - v.gamma * b + v.zeta)
    base = be**2 - v.delta - 2 * be * A
    c2 = -v.mu * be**2 / 6 + be * v.nu / 3 + v.delta * v.mu / 2 + v.alpha**2 + v.xi
    c1 = -v.mu * be * v.delta / 6 + v.delta * v.nu / 3 + v.alpha * v.gamma + 2 * v.zeta
    Q = (-2 * v.alpha * A**2 * b + base * b**2 + 2 * (v.alpha * be - v.gamma) * A * b
         + (be * v.gamma - 2 * v.epsilon) * b + v.mu / 2 * A**4
         + 2.0 / 3.0 * (v.nu + v.mu * be) * A**3 + c2 * A**2 + c1 * A)
    return up, down, f_rho, g_rho, rhs, Q


def casimir_seed(alg: CubicAlgebra, E: float, u: float) -> float:
    """Phi(0) implied by the realized Casimir together with the recurrence at N=0."""
    v = alg.at(E)
    up, down, f_rho, g_rho, rhs, Q = _site_terms(alg, v, u)
    M = np.array([[2 * up, -2 * down], [f_rho, g_rho]])
    det = np.linalg.det(M)
    if abs(det) < 1e-300:
        raise RecurrenceSingular("recurrence and Casimir are degenerate at N=0")
    sol = np.linalg.solve(M, np.array([rhs, v.K - Q]))
    return float(sol[1])


def recurrence_oracle(alg: CubicAlgebra, E: float, u: float, n_max: int,
                      phi0: Optional[float] = 0.0) -> list:
    """Phi(1..n_max) by forward recursion of the realized [B, C] relation.

    ``phi0`` seeds Phi(0). The Fock boundary condition is phi0 = 0; pass
    ``phi0=None`` to take the seed from the realized Casimir at N=0, which
    makes the recursion comparable with the closed forms at any (E, u).
    """
    v = alg.at(E)
    if phi0 is None:
        phi0 = casimir_seed(alg, E, u)
    out = []
    phi = float(phi0)
    for n in range(n_max):
        up, down, _, _, rhs, _ = _site_terms(alg, v, n + u)
        if up == 0.0 or not np.isfinite(up):
            raise RecurrenceSingular(f"leading factor vanishes at N={n}")
        phi = (rhs + 2.0 * down * phi) / (2.0 * up)
        out.append(phi)
    return out


def casimir_value(alg: CubicAlgebra, E: float) -> float:
    return float(alg.casimir(E))


# ---------------------------------------------------------------------------
# matrix representations

def _anti(X, Y):
    return X @ Y + Y @ X


def build_matrix_representation(alg: CubicAlgebra, phi: StructureFunction, p: int,
                                E: Optional[float] = None) -> MatrixRepresentation:
    """(p+1)-dimensional matrices of N, b, b^dagger, A, B, C, K and H = E*1.

    Phi values are taken from the coefficient form consistent with ``alg``
    (recomputed from the algebra when ``phi`` only carries a factored form,
    so that the matrices satisfy the algebra with its own normalization).
    The sign pattern of the supplied ``phi`` must agree with it.
    """
    if p < 0:
        raise ValueError("p must be >= 0")
    E = phi.E if E is None else E
    u = phi.u
    n = np.arange(p + 1)
    closed = structure_function(alg, E, u)
    vals = closed(np.arange(1, p + 1))
    if np.any(vals <= 0.0):
        x_bad = int(np.arange(1, p + 1)[vals <= 0.0][0])
        raise NonUnitary(f"Phi({x_bad}) = {closed(x_bad):.6g} <= 0")
    if phi.coefficients is None and phi.factored is not None and p >= 1:
        given = phi(np.arange(1, p + 1), form="factored")
        if np.any(np.sign(given) != np.sign(vals)):
            raise ValueError("supplied factored Phi disagrees in sign with the algebra's closed form")

    v = alg.at(E)
    if alg.is_case1:
        A_of_N, b_of_N, rho_of_N = realize_case1(alg, E, u)
        rho_prev = np.array([rho_of_N(k - 1) for k in range(1, p + 1)])
        off = np.sqrt(rho_prev * vals)
    else:
        A_of_N, b_of_N = realize_case2(alg, E, u)
        off = np.sqrt(vals)
    dim = p + 1
    b_raise = np.zeros((dim, dim))
    if p >= 1:
        b_raise[np.arange(1, dim), np.arange(0, p)] = np.sqrt(vals)
    b_lower = b_raise.T.copy()
    A = np.diag(A_of_N(n).astype(float))
    B = np.diag(np.atleast_1d(b_of_N(n)).astype(float))
    if p >= 1:
        B[np.arange(1, dim), np.arange(0, p)] = off
        B[np.arange(0, p), np.arange(1, dim)] = off
    C = A @ B - B @ A
    I = np.eye(dim)
    A2 = A @ A
    B2 = B @ B
    c2 = -v.mu * v.beta**2 / 6 + v.beta * v.nu / 3 + v.delta * v.mu / 2 + v.alpha**2 + v.xi
    c1 = -v.mu * v.beta * v.delta / 6 + v.delta * v.nu / 3 + v.alpha * v.gamma + 2 * v.zeta
    K = (C @ C - v.alpha * _anti(A2, B) - v.beta * _anti(A, B2)
         + (v.alpha * v.beta - v.gamma) * _anti(A, B) + (v.beta**2 - v.delta) * B2
         + (v.beta * v.gamma - 2 * v.epsilon) * B + v.mu / 2 * A2 @ A2
         + 2.0 / 3.0 * (v.nu + v.mu * v.beta) * A2 @ A + c2 * A2 + c1 * A)
    return MatrixRepresentation(
        dimension=dim, energy=float(E), u=float(u), N=np.diag(n.astype(float)),
        b_raise=b_raise, b_lower=b_lower, A=A, B=B, C=C, K=K, H=E * I)


def _rel(lhs, terms) -> float:
    """||lhs - sum(terms)|| relative to ||lhs|| + sum ||term||.

    Normalizing by the individual term sizes keeps the measure meaningful for
    singlets, where both sides cancel to zero up to roundoff.
    """
    rhs = sum(terms)
    scale = np.linalg.norm(lhs) + sum(np.linalg.norm(t) for t in terms)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(lhs - rhs) / scale)


def representation_residuals(alg: CubicAlgebra, rep: MatrixRepresentation) -> dict:
    """Relative residuals of the [A,C] and [B,C] relations and of the Casimir identity."""
    v = alg.at(rep.energy)
    A, B, C = rep.A, rep.B, rep.C
    I = np.eye(rep.dimension)
    AC = A @ C - C @ A
    rhs_ac = [v.alpha * A @ A, v.beta * _anti(A, B), v.gamma * A, v.delta * B, v.epsilon * I]
    BC = B @ C - C @ B
    rhs_bc = [v.mu * A @ A @ A, v.nu * A @ A, -v.beta * B @ B, -v.alpha * _anti(A, B),
              v.xi * A, -v.gamma * B, v.zeta * I]
    K_target = casimir_value(alg, rep.energy) * I
    return {
        "AC": _rel(AC, rhs_ac),
        "BC": _rel(BC, rhs_bc),
        "casimir": _rel(rep.K, [K_target]),
    }
