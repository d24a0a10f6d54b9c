import numpy as np
import pytest

from superint import pt_complexification as pt
from superint.errors import SelfOrthogonal
from superint.schrodinger_oracle import Grid1D
from superint.special import hermite_function


def test_potential_is_pt_symmetric():
    x = np.linspace(-3, 3, 61)
    eps = 0.1
    V = pt.pt_potential("x")
    # V(-x - i eps) = V(x - i eps)^* on the shifted line
    assert np.allclose(V(-x - 1j * eps), np.conj(V(x - 1j * eps)))


def test_matrix_complex_symmetric():
    ham = pt.ComplexGridHamiltonian(Grid1D(5.0, 50), pt.pt_potential("h1"), 0.1)
    M = ham.matrix().toarray()
    assert np.allclose(M, M.T)
    assert not np.allclose(M, M.conj().T)


def test_harmonic_part_real_spectrum():
    e = pt.pt_eigenvalues("y", k=6)
    assert e.real == pytest.approx([(m + 0.5) / 2 for m in range(6)], abs=1e-6)
    assert np.max(np.abs(e.imag)) < 1e-8


def test_h1_spectrum_and_partner():
    e = pt.pt_eigenvalues("h1", k=8)
    assert np.max(np.abs(e.imag)) < 1e-8
    assert e.real == pytest.approx(pt.raised_partner_levels(k=8), abs=1e-6)
    # the h2 ground state is not annihilated: h1 starts at -1, not at 1/2
    assert e.real[0] == pytest.approx(-1.0, abs=1e-6)


def test_epsilon_independence():
    base = pt.pt_eigenvalues("h1", eps=0.05, k=6).real
    for eps in (0.1, 0.2, 0.3):
        assert np.max(np.abs(pt.pt_eigenvalues("h1", eps=eps, k=6).real - base)) < 1e-6


def test_invalid_inputs():
    with pytest.raises(ValueError):
        pt.pt_eigenvalues("h1", eps=0.0)
    with pytest.raises(ValueError):
        pt.pt_potential("z")


def test_pseudo_norm_harmonic_ground_state():
    g = Grid1D(15.0, 3001)
    for eps in (0.05, 0.1, 0.2):
        z = (g.x - 1j * eps) / np.sqrt(2)
        pn = pt.pseudo_norm(hermite_function(0, z), g)
        assert pn.sigma == 1
        assert abs(pn.imag) < 1e-10


def test_pseudo_norm_sign_and_self_orthogonal():
    g = Grid1D(5.0, 1001)
    odd = 1j * g.x * np.exp(-g.x**2)
    # (i(-x))^* (i x) = -x^2 < 0
    assert pt.pseudo_norm(odd, g).sigma == -1
    # two narrow bumps at +-1 with a relative phase i: the integrand is
    # 2 g(x+1) g(x-1) + i (g(x+1)^2 - g(x-1)^2), which integrates to ~e^-40
    bump = lambda s: np.exp(-20 * s**2)
    psi = bump(g.x - 1) + 1j * bump(g.x + 1)
    with pytest.raises(SelfOrthogonal):
        pt.pseudo_norm(psi, g)


def test_closed_state_residual():
    for n in range(3):
        assert pt.closed_state_residual(n) < 1e-4


def test_spectrum_2d_and_records():
    sp = pt.pt_spectrum_2d(k=6)
    assert sp.parameters["max_imag"] < 1e-8
    lv = sp.levels()
    assert lv[0].energy == pytest.approx(0.0, abs=1e-6)
    recs = pt.pt_records(k=4)
    assert [r.sigma for r in recs] == [1, -1, 1, -1]
    assert set(recs[0].to_json()) == {"part", "index", "re", "im", "sigma", "eps", "n", "L"}
