import numpy as np
import pytest

from superint.algebra_core import (
    CubicAlgebra, EnergyPolynomial, build_matrix_representation, case1_polynomial,
    realize_case1, realize_case2, recurrence_oracle, representation_residuals,
    structure_function, structure_function_case1, structure_function_case2,
)
from superint.errors import NonUnitary, RealizationUndefined, RhoPole


def random_algebra(rng, case):
    kw = dict(alpha=rng.normal(), mu=rng.normal(), gamma=rng.normal(size=2),
              epsilon=rng.normal(size=3), nu=rng.normal(size=2), xi=rng.normal(size=3),
              zeta=rng.normal(size=4), casimir=rng.normal(size=5))
    if case == 1:
        kw["beta"] = rng.uniform(0.5, 2.0) * rng.choice([-1, 1])
        kw["delta"] = rng.normal(size=2)
    else:
        kw["delta"] = (rng.uniform(0.5, 3.0), 0.1 * rng.normal())
        kw["sqrt_delta_sign"] = int(rng.choice([-1, 1]))
    return CubicAlgebra(**kw)


def test_energy_polynomial_degree_bounds():
    with pytest.raises(ValueError):
        CubicAlgebra(gamma=(1.0, 2.0, 3.0))
    p = EnergyPolynomial((1.0, 0.0, 2.0))
    assert p.degree == 2
    assert p(2.0) == pytest.approx(9.0)


def test_case2_realization_needs_positive_delta():
    alg = CubicAlgebra(delta=-1.0)
    with pytest.raises(RealizationUndefined):
        realize_case2(alg, 0.0, 0.0)


def test_case2_realization_is_linear_in_N():
    alg = CubicAlgebra(delta=4.0, alpha=1.0, gamma=2.0, epsilon=3.0)
    A, b = realize_case2(alg, 0.0, 0.5)
    assert A(np.array([0, 1, 2])) == pytest.approx([1.0, 3.0, 5.0])
    # b(N) = -alpha z^2 - gamma z / 2 - epsilon / 4
    assert b(0) == pytest.approx(-0.25 - 0.5 - 0.75)


def test_case1_rho_poles():
    alg = CubicAlgebra(beta=1.0)
    with pytest.raises(RhoPole):
        realize_case1(alg, 0.0, 0.0, n_range=[0, 1])


@pytest.mark.parametrize("case", [1, 2])
def test_closed_form_matches_recurrence(case):
    rng = np.random.default_rng(11 + case)
    sf_fn = structure_function_case1 if case == 1 else structure_function_case2
    for _ in range(5):
        alg = random_algebra(rng, case)
        E = rng.normal()
        u = rng.uniform(0.6, 3.0) if case == 1 else rng.uniform(-2, 2)
        sf = sf_fn(alg, E, u)
        orc = np.array(recurrence_oracle(alg, E, u, 12, phi0=None))
        cf = sf(np.arange(1, 13))
        assert np.max(np.abs(orc - cf) / np.abs(cf)) < 1e-9


def test_case1_leading_coefficient():
    for beta, mu in [(1.0, 1.0), (2.0, -0.5), (0.7, 1.3)]:
        v = CubicAlgebra(beta=beta, mu=mu).at(0.2)
        lead = case1_polynomial(v)[10]
        assert lead == pytest.approx(384 * mu * beta**10, rel=1e-14)


def test_factored_and_coefficient_forms_agree_for_catalog_algebra():
    from superint import potential_catalog as pc

    spec = pc.get_potential("p2")
    for E, u in [(2.0, 0.0), (5.0, -2.0 / 3.0), (3.7, 1.1)]:
        coef = structure_function(spec.algebra, E, u)
        c, roots = spec.phi_factored.at(E)
        x = np.arange(0, 8, dtype=float)
        fac = c * np.prod([x + u - r for r in roots], axis=0)
        assert np.allclose(coef(x), fac, rtol=1e-12, atol=1e-9 * np.max(np.abs(fac)))


def test_nonunitary_representation_is_rejected():
    from superint import potential_catalog as pc

    alg = pc.get_algebra("p2")
    sf = structure_function(alg, 2.0, 0.7)  # Phi < 0 on x = 1..7
    with pytest.raises(NonUnitary):
        build_matrix_representation(alg, sf, 3)


def test_representation_residuals_catalog_entry():
    from superint import potential_catalog as pc
    from superint.spectrum_solver import representations

    spec = pc.get_potential("p2")
    for s in representations("p2", 3):
        if not s.physical:
            continue
        rep = build_matrix_representation(spec.algebra, structure_function(spec.algebra, s.energy, s.u),
                                          s.p, s.energy)
        r = representation_residuals(spec.algebra, rep)
        assert r["AC"] < 1e-9 and r["BC"] < 1e-9 and r["casimir"] < 1e-8
        assert np.allclose(rep.H, s.energy * np.eye(s.p + 1))
