import numpy as np
import pytest

from superint import potential_catalog as pc
from superint.errors import NoFiniteCubicAlgebra, NotCatalogued
from superint.spectrum_solver import (
    assemble_spectrum, physical_filter, representations, solve_factored, solve_generic,
)


def test_solve_factored_simple_pairing():
    # roots r1 = 0, r2 = E + 1: r2 - r1 = p + 1 gives E = p, r1 - r2 = p + 1 gives E = -p - 2
    roots = [(0.0, 0.0), (1.0, 1.0)]
    sols = solve_factored(roots, -1.0, 2)
    assert [s.energy for s in sols] == pytest.approx([-4.0, 2.0])
    assert all(s.unitary for s in sols)
    assert sols[1].u == pytest.approx(0.0)
    assert sols[1].phi_boundary == pytest.approx((0.0, 0.0), abs=1e-12)


def test_constant_difference_pairs_are_skipped():
    skipped = []
    solve_factored([(1.0, 0.0), (1.0, 3.0)], 1.0, 2, skipped=skipped)
    assert skipped == [(1, 2, 2)]


def test_p2_families():
    sp = assemble_spectrum("p2", 3)
    fams = sp.families()
    assert sorted(fams) == ["alg:p+1", "alg:p+2/3", "alg:p+4/3"]
    assert [e.energy for e in fams["alg:p+1"]] == pytest.approx([3, 6, 9, 12])
    assert all(e.energy < 0 for e in sp.flagged)


def test_p1_second_family_only_p_le_1():
    sols = [s for s in representations("p1", 6) if s.family_id == "alg:-p/2"]
    assert sorted(s.p for s in sols) == [0, 1]


def test_p4_real_families_need_nonunitary_for_p_ge_1():
    strict = {(s.family_id, s.p) for s in representations("p4", 3, a=1.0)}
    loose = {(s.family_id, s.p) for s in representations("p4", 3, include_nonunitary=True, a=1.0)}
    assert ("alg:3(p+2/3)/2", 2) not in strict
    assert ("alg:3(p+2/3)/2", 2) in loose


def test_physical_filter_inclusive():
    sols = solve_factored([(0.0, 0.0), (1.0, 1.0)], -1.0, 0)
    out = physical_filter(sols, v_min=sols[0].energy)
    assert out[0].physical


def test_no_structure_function():
    with pytest.raises(NoFiniteCubicAlgebra):
        representations("p5", 2)
    with pytest.raises(NotCatalogued):
        representations("reducible_iso", 2)


@pytest.mark.parametrize("id_,kw", [("p2", {}), ("p3", {}), ("p1", {}), ("p4", {"a": 1.0})])
def test_generic_matches_factored(id_, kw):
    spec = pc.get_potential(id_, **kw)
    for p in (0, 2):
        fac = solve_factored(spec.phi_factored.roots, spec.phi_factored.c, p)
        gen = solve_generic(spec.algebra, p, (-8.5, 8.5))
        Ef = sorted(s.energy for s in fac if -8.5 < s.energy < 8.5)
        Eg = sorted(s.energy for s in gen)
        assert np.allclose(Ef, Eg, atol=1e-8)
