import json

import numpy as np
import pytest

from superint.errors import GridTooLarge, SingularPotential
from superint.schrodinger_oracle import (
    Grid1D, GridHamiltonian, commutator_convergence, commutator_residual_A, converge_1d,
    records_json, solve_1d, spectrum_2d,
)


def test_grid_symmetric_and_refined():
    g = Grid1D(5.0, 99)
    assert np.allclose(g.x, -g.x[::-1])
    r = g.refined()
    assert r.n == 199 and r.h == pytest.approx(g.h / 2)


def test_harmonic_oscillator_levels():
    ham = GridHamiltonian(Grid1D(10.0, 800), lambda x: 0.5 * x**2)
    rec = converge_1d(ham, 5)
    assert rec.eigenvalues == pytest.approx([0.5, 1.5, 2.5, 3.5, 4.5], abs=1e-7)


def test_half_line_centrifugal():
    # l = 1 radial oscillator: E = 2k + 5/2 for V = y^2/2 + 1/y^2
    rec = solve_1d(lambda y: 0.5 * y**2 + 1.0 / y**2, 3, kind="half", n=1500, L0=4.0)
    assert rec.eigenvalues == pytest.approx([2.5, 4.5, 6.5], abs=1e-6)
    assert rec.boundary_amplitude < 1e-8


@pytest.mark.parametrize("id_,expected", [
    ("p2", [(2, 1), (3, 1), (4, 1), (5, 2), (6, 2)]),
    ("p3", [(4, 1), (6, 1), (7, 1), (8, 1), (9, 1)]),
    ("reducible_iso", [(1, 1), (2, 2), (3, 3)]),
])
def test_spectrum_2d(id_, expected):
    sp = spectrum_2d(id_, k=6, n=1500)
    got = [(lv.energy, lv.degeneracy) for lv in sp.levels()][:len(expected)]
    assert [d for _, d in got] == [d for _, d in expected]
    assert [e for e, _ in got] == pytest.approx([e for e, _ in expected], abs=1e-6)


def test_spectrum_2d_p1_susy_degeneracy():
    sp = spectrum_2d("p1", k=10, n=2000)
    levels = [(lv.energy, lv.degeneracy) for lv in sp.levels()]
    assert [d for _, d in levels[:6]] == [1, 1, 1, 2, 3, 4]
    assert [e for e, _ in levels[:6]] == pytest.approx([-0.5, 0.0, 0.5, 1.0, 1.5, 2.0], abs=1e-6)


def test_real_a_singular():
    with pytest.raises(SingularPotential):
        spectrum_2d("p1", k=3, a=1.0)


def test_records_json_roundtrip():
    _, recs = spectrum_2d("p2", k=3, n=500, return_records=True)
    data = json.loads(records_json(recs))
    assert data[0]["n"][0] == 500


def test_commutator_residual_small_and_capped():
    res = commutator_residual_A("p2", grid2d_n=60)
    assert res < 1e-8
    with pytest.raises(GridTooLarge):
        commutator_residual_A("p2", grid2d_n=1000)


def test_commutator_convergence_report():
    rep = commutator_convergence("p1", n_list=(30, 61))
    assert len(rep["residual"]) == 2 and len(rep["order"]) == 1
    # [H, A] = 0 holds exactly for the discretized operators up to roundoff
    assert max(rep["residual"]) < 1e-9
