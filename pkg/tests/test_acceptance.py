"""Acceptance criteria 1-10, one printed PASS/FAIL line each.

Every test prints its verdict with the measured numbers before asserting, so
the log shows what was reached even when a criterion fails.
"""
import time

import numpy as np
import pytest

from superint import potential_catalog as pc
from superint.algebra_core import (
    CubicAlgebra, build_matrix_representation, case1_polynomial, recurrence_oracle,
    representation_residuals, structure_function, structure_function_case1,
    structure_function_case2,
)
from superint.schrodinger_oracle import spectrum_2d
from superint.spectra import merge_levels
from superint.spectrum_solver import assemble_spectrum, representations

TOL = 1e-8


@pytest.fixture
def say(capsys):
    def _say(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} | {detail}")
    return _say


def _family_energies_ok(sp, formulas, p_max):
    fams = sp.families()
    if set(fams) != set(formulas):
        return False, f"families {sorted(fams)}"
    for fid, f in formulas.items():
        got = sorted(e.energy for e in fams[fid])
        want = [f(p) for p in range(p_max + 1)]
        if len(got) != len(want) or not np.allclose(got, want, atol=TOL, rtol=0):
            return False, f"{fid}: {got}"
        if sorted(e.degeneracy for e in fams[fid]) != list(range(1, p_max + 2)):
            return False, f"{fid}: degeneracies"
    return True, "families ok"


def _as_set(values):
    out = []
    for v in sorted(values):
        if not out or abs(v - out[-1]) > TOL:
            out.append(v)
    return out


def _same_set(a, b):
    a, b = _as_set(a), _as_set(b)
    return len(a) == len(b) and np.allclose(a, b, atol=TOL, rtol=0)


def test_criterion_1_p2_closed_form(say):
    t0 = time.perf_counter()
    sp = assemble_spectrum("p2", 6, hbar=1.0, omega=1.0)
    dt = time.perf_counter() - t0
    formulas = {"alg:p+2/3": lambda p: 3 * (p + 2 / 3), "alg:p+1": lambda p: 3 * (p + 1),
                "alg:p+4/3": lambda p: 3 * (p + 4 / 3)}
    fam_ok, fam_msg = _family_energies_ok(sp, formulas, 6)
    target = [3 * k1 + k2 + 2 for k1 in range(10) for k2 in range(25) if 3 * k1 + k2 + 2 <= 23]
    # the E = 23 member of the target set is 3(7 + 2/3); it first appears at p = 7
    sp7 = assemble_spectrum("p2", 7, hbar=1.0, omega=1.0)
    union = [e.energy for e in sp7.entries if e.energy <= 23 + TOL]
    union6 = [e.energy for e in sp.entries if e.energy <= 22 + TOL]
    set_ok = _same_set(union, target) and _same_set(union6, [t for t in target if t <= 22])
    # multiplicities: number of (k1, k2) with 3k1 + k2 + 2 = E is the level degeneracy
    counts = {}
    for t in target:
        counts[t] = counts.get(t, 0) + 1
    deg_ok = all(lv.degeneracy == counts[round(lv.energy)]
                 for lv in merge_levels([e for e in sp7.entries if e.energy <= 23 + TOL]))
    ok = fam_ok and set_ok and deg_ok and dt < 1.0
    say(1, ok, f"{fam_msg}; union [0,22] at p_max=6 and [0,23] at p_max=7 match: {set_ok}; "
               f"degeneracies match counting: {deg_ok}; {dt:.3f} s")
    assert ok


def test_criterion_2_p3_closed_form(say):
    t0 = time.perf_counter()
    sp = assemble_spectrum("p3", 6, hbar=1.0, omega=1.0)
    dt = time.perf_counter() - t0
    formulas = {"alg:p+5/3": lambda p: 3 * (p + 5 / 3), "alg:p+1": lambda p: 3 * (p + 1)}
    fam_ok, fam_msg = _family_energies_ok(sp, formulas, 6)
    target = _as_set(3 * k1 + 2 * k2 + 4 for k1 in range(10) for k2 in range(12)
                     if 3 * k1 + 2 * k2 + 4 <= 22)
    union = _as_set(e.energy for e in sp.entries if e.energy <= 22 + TOL)
    set_ok = _same_set(union, target)
    missing = [t for t in target if not any(abs(t - u) < TOL for u in union)]
    extra = [u for u in union if not any(abs(t - u) < TOL for t in target)]
    ok = fam_ok and set_ok and dt < 1.0
    say(2, ok, f"{fam_msg}; union == {{3k1+2k2+4}} up to 22: {set_ok} "
               f"(missing {missing[:5]}, extra {extra[:5]}); {dt:.3f} s")
    assert ok


def test_criterion_3_p1_imaginary_mode(say):
    spec = pc.get_potential("p1", a0=1.0, hbar=1.0)
    sols = representations("p1", 6, a0=1.0, hbar=1.0)
    main = [s for s in sols if s.family_id == "alg:(p+2)/2"]
    pattern_ok = len(main) == 7
    xs = np.arange(40) * 0.25 + 0.125
    for s in main:
        p = s.p
        want = [0.0, p + 1.0, p + 3.0, p + 4.0]
        pattern_ok &= np.allclose(sorted(s.x_roots), want, atol=TOL, rtol=0)
        pattern_ok &= abs(s.energy - (p + 2) / 2) < TOL
        ours = structure_function(spec.algebra, s.energy, s.u)(xs)
        ref = xs * (p + 1 - xs) * (p + 3 - xs) * (p + 4 - xs)
        ratio = ours / ref
        # equal up to one positive overall constant
        pattern_ok &= bool(np.all(ratio > 0) and np.ptp(ratio) < 1e-9 * np.abs(ratio).max())
    second = [s for s in sols if s.family_id == "alg:-p/2"]
    ps = sorted(s.p for s in second)
    second_ok = ps == [0, 1] and all(abs(s.energy + s.p / 2) < TOL for s in second)
    vmin_ok = abs(spec.v_min + 2.0) < 1e-9 and all(s.physical and s.energy >= spec.v_min
                                                   for s in second)
    ok = pattern_ok and second_ok and vmin_ok
    say(3, ok, f"(p+2)/2 family with roots {{0,p+1,p+3,p+4}} for p=0..6: {bool(pattern_ok)}; "
               f"-p/2 family at p={ps}; v_min={spec.v_min:.12g}, filter passed: {vmin_ok}")
    assert ok


P4_FAMILIES = {
    "imag": {"alg:3p/2": lambda p: 1.5 * p, "alg:3(p+4/3)/2": lambda p: 1.5 * (p + 4 / 3),
             "alg:3(p+5/3)/2": lambda p: 1.5 * (p + 5 / 3)},
    "real": {"alg:3(p+2)/2": lambda p: 1.5 * (p + 2), "alg:3(p+2/3)/2": lambda p: 1.5 * (p + 2 / 3),
             "alg:3(p+1/3)/2": lambda p: 1.5 * (p + 1 / 3)},
}


def test_criterion_4_p4_both_modes(say):
    found, missing = 0, []
    for mode, kw in (("imag", {"a0": 1.0}), ("real", {"a": 1.0})):
        spec = pc.get_potential("p4", hbar=1.0, **kw)
        fams = {f.family_id: f for f in spec.reference_families}
        # the real-mode p >= 1 members have a root of Phi inside [1, p]; they are
        # matched as root patterns, unitarity is reported separately
        sols = representations("p4", 6, include_nonunitary=True, hbar=1.0, **kw)
        for fid, E_of in P4_FAMILIES[mode].items():
            fam = fams[fid]
            pmax = 6 if fam.p_max is None else min(6, fam.p_max)
            for p in range(pmax + 1):
                hit = [s for s in sols if s.p == p and abs(s.energy - E_of(p)) < TOL
                       and np.allclose(sorted(s.x_roots), sorted(fam.x_roots(p)), atol=TOL, rtol=0)]
                if hit:
                    found += 1
                else:
                    missing.append((mode, fid, p))
    ok = not missing
    say(4, ok, f"{found} (family, p) root patterns matched over six families, p <= 6; "
               f"missing {missing[:6]}")
    assert ok


def _compare(num_levels, ref_levels, tol=1e-3):
    bad = []
    for lv in num_levels:
        ref = min(ref_levels, key=lambda r: abs(r.energy - lv.energy))
        if abs(ref.energy - lv.energy) >= tol or ref.degeneracy != lv.degeneracy:
            bad.append((round(lv.energy, 6), lv.degeneracy, ref.energy, ref.degeneracy))
    return bad


def test_criterion_5_oracle_agreement(say):
    t0 = time.perf_counter()
    details, ok = [], True
    for id_ in ("p2", "p3"):
        num = spectrum_2d(id_, k=10, n=4000, hbar=1.0, omega=1.0)
        states = num.expanded()[:10]
        levels = merge_levels([e for e in num.entries if e.energy <= states[-1] + 1e-6], 1e-6)
        ref = assemble_spectrum(id_, 6, hbar=1.0, omega=1.0).levels()
        bad = _compare(levels, ref)
        ok &= not bad
        # informational: the grid against the counting formula itself
        a, b = (1, 2) if id_ == "p2" else (2, 4)
        count = {}
        for k1 in range(8):
            for k2 in range(30):
                count[3 * k1 + a * k2 + b] = count.get(3 * k1 + a * k2 + b, 0) + 1
        vs_count = all(abs(lv.energy - round(lv.energy)) < 1e-3
                       and count.get(round(lv.energy)) == lv.degeneracy for lv in levels)
        details.append(f"{id_}: {len(levels)} levels, mismatches vs algebraic spectrum {bad[:4]}, "
                       f"grid matches 3k1+{a}k2+{b} counting: {vs_count}")
    num = spectrum_2d("p1", k=40, n=4000, a0=1.0, hbar=1.0)
    levels = num.levels()[:8]
    top = levels[-1].energy + 1e-3
    fam_E = [e.energy for e in pc.reference_spectrum("p1", top, counting_only=False).entries]
    # named algebraic families only; unlabelled root pairings are reported by the solver
    # but have no counterpart on the grid
    fam_E += [e.energy for e in assemble_spectrum("p1", 8, a0=1.0, hbar=1.0).entries
              if e.family_id.startswith("alg:")]
    merged = _as_set(E for E in fam_E if E <= top)
    num_E = [lv.energy for lv in levels]
    e_ok = len(merged) == len(num_E) and np.allclose(merged, num_E, atol=1e-3, rtol=0)
    deg_ok = all(lv.degeneracy == round(2 * lv.energy - 2) + 2
                 for lv in levels if lv.energy > 1.25)
    ok &= e_ok and deg_ok
    dt = time.perf_counter() - t0
    ok &= dt < 60.0
    details.append(f"p1: 8 lowest {['%.6g(%d)' % (lv.energy, lv.degeneracy) for lv in levels]}, "
                   f"energies match merged families: {e_ok}, degeneracy p+2: {deg_ok}")
    say(5, ok, "; ".join(details) + f"; {dt:.1f} s")
    assert ok


def test_criterion_6_matrix_residuals(say):
    worst = {"AC": 0.0, "BC": 0.0, "casimir": 0.0}
    count = 0
    for id_, kw in (("p1", {"a0": 1.0}), ("p1", {"a": 1.0}), ("p2", {}), ("p3", {}),
                    ("p4", {"a0": 1.0}), ("p4", {"a": 1.0})):
        spec = pc.get_potential(id_, **kw)
        for s in representations(id_, 6, **kw):
            phi = structure_function(spec.algebra, s.energy, s.u)
            rep = build_matrix_representation(spec.algebra, phi, s.p, s.energy)
            r = representation_residuals(spec.algebra, rep)
            for k in worst:
                worst[k] = max(worst[k], r[k])
            count += 1
    ok = worst["AC"] < 1e-9 and worst["BC"] < 1e-9 and worst["casimir"] < 1e-8
    say(6, ok, f"{count} representations; max relative residuals "
               f"[A,C] {worst['AC']:.2e}, [B,C] {worst['BC']:.2e}, Casimir {worst['casimir']:.2e}")
    assert ok


def _random_algebra(rng, case):
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


def test_criterion_7_structure_function_oracle(say):
    rng = np.random.default_rng(2024)
    worst = {1: 0.0, 2: 0.0}
    x = np.arange(1, 13)
    for case, fn in ((1, structure_function_case1), (2, structure_function_case2)):
        for _ in range(20):
            alg = _random_algebra(rng, case)
            E = rng.normal()
            u = rng.uniform(0.6, 3.0) if case == 1 else rng.uniform(-2.0, 2.0)
            cf = fn(alg, E, u)(x)
            orc = np.array(recurrence_oracle(alg, E, u, 12, phi0=None))
            worst[case] = max(worst[case], float(np.max(np.abs(orc - cf) / np.abs(cf))))
    lead_err = 0.0
    for _ in range(20):
        beta, mu = rng.uniform(0.3, 2.0) * rng.choice([-1, 1]), rng.normal()
        v = _random_algebra(rng, 1).at(0.0)
        v = v.__class__(**{**v.__dict__, "beta": beta, "mu": mu})
        lead = case1_polynomial(v)[10]
        lead_err = max(lead_err, abs(lead / (384 * mu * beta**10) - 1.0))
    ok = worst[1] < 1e-9 and worst[2] < 1e-9 and lead_err < 1e-14
    say(7, ok, f"max relative deviation case 1 {worst[1]:.2e}, case 2 {worst[2]:.2e}; "
               f"leading coefficient vs 384 mu beta^10: {lead_err:.1e}")
    assert ok


def test_criterion_8_susy_suite(say):
    from superint import susy_factorization as sf

    grid = sf.default_grid(1.0)
    x, h = grid.x, grid.h
    pair = sf.partner_pair_p1(1.0, 1.0)
    phi0 = sf.ground_state_p1(1.0, 1.0, grid)
    n0 = np.linalg.norm(phi0.values)
    zero = np.linalg.norm(pair.b(phi0.values, x, h)) / n0
    raised = 0.0
    for k in range(6):
        psi = sf.WaveFunction1D(x, sf.harmonic_state(k, x))
        out = sf.raise_eigenfunction(pair, psi, (k + 0.5) / 2).values
        cf = sf.raised_closed(k, x)
        raised = max(raised, float(np.max(np.abs(out - np.sign(out @ cf) * cf))))
    l1, l2 = sf.partner_levels(pair, k=8)
    iso = float(np.max(np.abs(l1[1:] - l2)))
    M, M_dag, _, _ = sf.ladder_operators_p1(1.0, 1.0, grid)
    m0 = np.linalg.norm(M(phi0.values)) / n0
    md0 = np.linalg.norm(M_dag(phi0.values)) / n0
    ok = zero < 1e-6 and raised < 1e-6 and iso < 1e-4 and m0 < 1e-5 and md0 < 1e-5
    say(8, ok, f"b phi0 {zero:.1e}; raised vs closed form {raised:.1e}; "
               f"isospectral (8 levels) {iso:.1e}; M phi0 {m0:.1e}, M^dag phi0 {md0:.1e}")
    assert ok


def test_criterion_9_quintic_subset(say):
    from superint.susy_factorization import quintic_subset_check

    sizes = (8, 16, 32, 64)
    reps = [quintic_subset_check(1.0, 1.0, basis_size=b)["residuals"] for b in sizes]
    mono = all(all(r1[k] < r0[k] for k in r0) for r0, r1 in zip(reps, reps[1:]))
    at30 = quintic_subset_check(1.0, 1.0, basis_size=30)["max_residual"]
    ok = mono and at30 < 1e-3
    trail = ", ".join(f"{b}: {max(r.values()):.1e}" for b, r in zip(sizes, reps))
    say(9, ok, f"max residual by basis size {trail}; monotone: {mono}; at 30: {at30:.1e}")
    assert ok


def test_criterion_10_pt_suite(say):
    from superint import pt_complexification as pt

    e = pt.pt_eigenvalues("h1", a=1.0, hbar=1.0, k=10)
    ex = pt.pt_eigenvalues("x", a=1.0, hbar=1.0, k=4).real
    target = np.array([(n + 1) / 2 for n in range(8)])
    lowest_ok = bool(np.max(np.abs(e.real[:8] - target)) < 1e-4)
    imag_ok = bool(np.max(np.abs(e.imag)) < 1e-8)
    # where the claimed sequence does sit: it is the spectrum above the two extra states
    contained = bool(np.max(np.abs(e.real[2:10] - target)) < 1e-4)
    sp = pt.pt_spectrum_2d(a=1.0, hbar=1.0, k=8)
    lv = sp.levels()
    want2d = [((p + 3) / 2, p + 1) for p in range(len(lv))]
    two_d_ok = all(abs(l.energy - E) < 1e-4 and l.degeneracy == d for l, (E, d) in zip(lv, want2d))
    base = pt.pt_eigenvalues("h1", eps=0.05, k=8).real
    drift = max(float(np.max(np.abs(pt.pt_eigenvalues("h1", eps=eps, k=8).real - base)))
                for eps in (0.1, 0.2, 0.3))
    ok = lowest_ok and imag_ok and two_d_ok and drift < 1e-6
    say(10, ok, f"8 lowest h1 levels {np.round(e.real[:8], 6).tolist()} vs (n+1)/2: {lowest_ok} "
                f"((n+1)/2 found as levels 3..10: {contained}; x-part with constant {np.round(ex, 6).tolist()}); max |Im E| {np.max(np.abs(e.imag)):.1e}; "
                f"2D levels {[(round(l.energy, 6), l.degeneracy) for l in lv[:5]]} vs (p+3)/2 "
                f"with p+1: {two_d_ok}; Re E drift over eps in [0.05, 0.3] {drift:.1e}")
    assert ok
