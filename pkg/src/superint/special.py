"""Hermite and Laguerre functions by three-term recurrence.

Only what the closed-form eigenfunctions need. The Hermite *functions* are
built with the normalized recurrence, which stays well scaled for large n and
large |x| where the bare polynomials overflow.
"""
import math

import numpy as np


def hermite(n, x):
    """Physicists' Hermite polynomial H_n(x)."""
    x = np.asarray(x, dtype=complex if np.iscomplexobj(x) else float)
    if n < 0:
        raise ValueError("n must be >= 0")
    h0 = np.ones_like(x)
    if n == 0:
        return h0
    h1 = 2.0 * x
    for k in range(1, n):
        h0, h1 = h1, 2.0 * x * h1 - 2.0 * k * h0
    return h1


def hermite_function(n, xi):
    """Normalized oscillator eigenfunction (2^n n! sqrt(pi))^{-1/2} H_n(xi) exp(-xi^2/2).

    Accepts complex xi (used on the shifted contour of the PT module).
    """
    xi = np.asarray(xi, dtype=complex if np.iscomplexobj(xi) else float)
    psi0 = np.pi ** -0.25 * np.exp(-xi**2 / 2.0)
    if n == 0:
        return psi0
    psi1 = np.sqrt(2.0) * xi * psi0
    for k in range(1, n):
        psi0, psi1 = psi1, np.sqrt(2.0 / (k + 1)) * xi * psi1 - np.sqrt(k / (k + 1)) * psi0
    return psi1


def laguerre(n, alpha, x):
    """Generalized Laguerre polynomial L_n^(alpha)(x)."""
    x = np.asarray(x, dtype=float)
    if n < 0:
        raise ValueError("n must be >= 0")
    l0 = np.ones_like(x)
    if n == 0:
        return l0
    l1 = 1.0 + alpha - x
    for k in range(1, n):
        l0, l1 = l1, ((2 * k + 1 + alpha - x) * l1 - (k + alpha) * l0) / (k + 1)
    return l1


def laguerre_norm(n, alpha):
    """Integral of x^alpha e^{-x} L_n^(alpha)(x)^2 over x > 0."""
    return math.gamma(n + alpha + 1) / math.factorial(n)
