"""Acceptance gate: the eight headline claims, each at its stated tolerance.

Every test prints one PASS/FAIL line on the uncaptured stdout so the
gate reads as a checklist in the terminal. Tolerances and draw counts
here are contractual; do not loosen them to make a failure go away.
"""

import time

import numpy as np
import pytest

from pcs_spectra import (
    BranchSign,
    Grid,
    Sl2Params,
    Superpotential,
    SusyParams,
    build_sl2_potential,
    complexify,
    correspondence_residuals,
    discretize,
    dual_superpotentials,
    eigen_near,
    exchange_map,
    m_square_identities,
    partner_potentials,
    pcs_partner_coefficients,
    pt_constraint_check,
    solve_correspondence,
    solve_m_given_b,
    two_series_spectrum,
    verify_spectrum,
)

PLUS, MINUS = BranchSign.PLUS, BranchSign.MINUS


def announce(capsys, index, name, ok, detail):
    status = "PASS" if ok else "FAIL"
    with capsys.disabled():
        print(f"\n[criterion {index}/8] {name}: {status} ({detail})", flush=True)


def random_branch(rng):
    return PLUS if rng.random() < 0.5 else MINUS


def test_criterion_1_two_real_series_reproduced(capsys):
    t0 = time.perf_counter()
    rep = verify_spectrum(SusyParams(2.5, 3.2, 0, 1))
    elapsed = time.perf_counter() - t0

    want = sorted(
        [-((2.5 - n) ** 2) for n in range(3)] + [-((2.7 - n) ** 2) for n in range(3)]
    )
    got_analytic = sorted(m.analytic.energy.real for m in rep.matches)
    exact_count = (
        len(rep.matches) == 6
        and not rep.unmatched_analytic
        and not rep.unmatched_numeric
    )
    ok = (
        rep.passed
        and exact_count
        and np.allclose(got_analytic, want, atol=1e-12)
        and rep.max_abs_err <= 1e-6
        and elapsed <= 10.0
    )
    announce(capsys, 1, "two real eigenvalue series found numerically", ok,
             f"6 states, max |dE| = {rep.max_abs_err:.2e}, {elapsed:.1f}s")
    assert rep.passed and exact_count
    assert np.allclose(got_analytic, want, atol=1e-12)
    assert rep.max_abs_err <= 1e-6
    assert elapsed <= 10.0


def test_criterion_2_exchange_invariance(capsys):
    rng = np.random.default_rng(1002)
    worst = 0.0
    for _ in range(1000):
        A, B = rng.uniform(0.5, 3.5, 2)
        C = rng.uniform(-1.5, 1.5)
        alpha = rng.uniform(0.5, 2.0)
        p = SusyParams(A, B, C, alpha)
        w, wx = dual_superpotentials(p, random_branch(rng))
        v1 = partner_potentials(w)[0]
        v2 = partner_potentials(wx)[0]
        worst = max(
            worst,
            abs(v1.t2 - v2.t2) / max(1.0, abs(v1.t2)),
            abs(v1.st - v2.st) / max(1.0, abs(v1.st)),
        )

    # exact involution on a dyadic parameter lattice, where the
    # half-step shifts are exact float operations
    scale = 2.0**-20
    involution_exact = True
    for _ in range(1000):
        p = SusyParams(
            float(rng.integers(1, 4 * 2**20)) * scale,
            float(rng.integers(1, 4 * 2**20)) * scale,
            float(rng.integers(-2 * 2**20, 2 * 2**20)) * scale,
            float(rng.choice([0.5, 1.0, 2.0, 4.0])),
        )
        if exchange_map(exchange_map(p)) != p:
            involution_exact = False
        cp = complexify(p, random_branch(rng))
        back = exchange_map(exchange_map(cp))
        if back.calA != cp.calA or back.calB != cp.calB:
            involution_exact = False

    ok = worst <= 1e-14 and involution_exact
    announce(capsys, 2, "profile invariant under parameter exchange", ok,
             f"worst rel diff {worst:.2e} over 1000 draws, involution exact: {involution_exact}")
    assert worst <= 1e-14
    assert involution_exact


def test_criterion_3_constraint_equivalence(capsys):
    rng = np.random.default_rng(1003)
    cases = []
    for _ in range(700):
        cases.append(SusyParams(
            rng.uniform(0.5, 3.5), rng.uniform(0.5, 3.5),
            rng.uniform(-1.5, 1.5), rng.uniform(0.5, 2.0),
        ))
    for _ in range(150):
        cases.append(SusyParams(
            rng.uniform(0.5, 3.5), rng.uniform(0.5, 3.5), 0.0, rng.uniform(0.5, 2.0),
        ))
    for _ in range(150):
        # the non-generic way to satisfy the constraint: A = B - alpha/2
        b = rng.uniform(1.0, 3.5)
        alpha = rng.uniform(0.5, 2.0)
        cases.append(SusyParams(b - 0.5 * alpha, b, rng.uniform(0.2, 1.5), alpha))

    agree = 0
    for p in cases:
        want = pt_constraint_check(p).pt_symmetric
        got_p = pcs_partner_coefficients(p, PLUS).is_pt_symmetric()
        got_m = pcs_partner_coefficients(p, MINUS).is_pt_symmetric()
        agree += got_p == want == got_m

    ok = agree == len(cases) == 1000
    announce(capsys, 3, "constraint test equals coefficient reality test", ok,
             f"{agree} of {len(cases)} draws agree")
    assert agree == len(cases) == 1000


def test_criterion_4_spectral_bifurcation(capsys):
    t0 = time.perf_counter()
    p0 = SusyParams(2, 3, 0, 1)
    c_grid = np.linspace(0.0, 1.0, 11)

    analytic_ok = True
    for c in c_grid:
        p = SusyParams(2, 3, float(c), 1)
        levels = {}
        for br in (PLUS, MINUS):
            s1, s2 = two_series_spectrum(p, br)
            levels[br] = sorted(s1.energies + s2.energies, key=lambda e: (e.real, e.imag))
        if c == 0.0:
            if max(abs(e.imag) for e in levels[PLUS]) > 0.0:
                analytic_ok = False
        conj = sorted((e.conjugate() for e in levels[MINUS]), key=lambda e: (e.real, e.imag))
        if max(abs(a - b) for a, b in zip(levels[PLUS], conj)) > 1e-6:
            analytic_ok = False

    numeric_ok = True
    numeric_worst = 0.0
    for c in (0.0, 0.5, 1.0):
        p = SusyParams(2, 3, c, 1)
        reps = {}
        for br in (PLUS, MINUS):
            rep = verify_spectrum(p, branch=br)
            reps[br] = rep
            if not rep.passed:
                numeric_ok = False
        plus = sorted((m.numeric for m in reps[PLUS].matches), key=lambda e: (e.real, e.imag))
        minus = sorted(
            (m.numeric.conjugate() for m in reps[MINUS].matches),
            key=lambda e: (e.real, e.imag),
        )
        if len(plus) != len(minus):
            numeric_ok = False
            continue
        numeric_worst = max(
            numeric_worst, max(abs(a - b) for a, b in zip(plus, minus))
        )
    if numeric_worst > 1e-6:
        numeric_ok = False
    elapsed = time.perf_counter() - t0

    ok = analytic_ok and numeric_ok and elapsed <= 60.0
    announce(capsys, 4, "spectrum bifurcates into conjugate pairs", ok,
             f"numeric conjugacy worst {numeric_worst:.2e}, {elapsed:.1f}s")
    assert analytic_ok
    assert numeric_ok
    assert elapsed <= 60.0


def test_criterion_5_sl2_correspondence(capsys):
    rng = np.random.default_rng(1005)
    worst_res = worst_ident = worst_round = worst_mforb = 0.0
    for _ in range(1000):
        p = SusyParams(
            rng.uniform(0.5, 3.5), rng.uniform(0.5, 3.5),
            rng.uniform(-1.5, 1.5), rng.uniform(0.5, 2.0),
        )
        br = random_branch(rng)
        target = pcs_partner_coefficients(p, br)
        for m, b in solve_correspondence(p, br):
            s = Sl2Params(m=m, b=b, alpha=p.alpha)
            worst_res = max(worst_res, float(np.abs(correspondence_residuals(s, p, br)).max()))
            worst_mforb = max(worst_mforb, abs(m - solve_m_given_b(b, p, br)))
            re_m2, half_im_m2 = m_square_identities(b, p, br)
            worst_ident = max(
                worst_ident,
                abs((m * m).real - re_m2),
                abs(0.5 * (m * m).imag - half_im_m2),
            )
            v = build_sl2_potential(s)
            worst_round = max(
                worst_round, abs(v.t2 - target.t2), abs(v.st - target.st)
            )

    pair = solve_correspondence(SusyParams(2, 3, 0, 1))
    worked = (
        len(pair) == 2
        and abs(pair[0][0] + 2.5) <= 1e-10 and abs(pair[0][1] - 3j) <= 1e-10
        and abs(pair[1][0] + 3.0) <= 1e-10 and abs(pair[1][1] - 2.5j) <= 1e-10
    )

    ok = max(worst_res, worst_mforb, worst_ident, worst_round) <= 1e-10 and worked
    announce(capsys, 5, "algebraic labels reproduce the factorization", ok,
             f"worst residual {worst_res:.2e}, worked pair recovered: {worked}")
    assert worst_res <= 1e-10
    assert worst_mforb <= 1e-10
    assert worst_ident <= 1e-10
    assert worst_round <= 1e-10
    assert worked


def test_criterion_6_shape_invariance(capsys):
    rng = np.random.default_rng(1006)
    worst = 0.0
    for _ in range(100):
        lam = complex(rng.uniform(0.5, 3.0), rng.uniform(-1.0, 1.0))
        mu = complex(rng.uniform(-3.0, 3.0), rng.uniform(-1.0, 1.0))
        alpha = rng.uniform(0.5, 2.0)
        w = Superpotential(lam=lam, mu=mu, alpha=alpha, factorization_energy=-lam * lam)
        w_dn = Superpotential(
            lam=lam - alpha, mu=mu, alpha=alpha,
            factorization_energy=-((lam - alpha) ** 2),
        )
        x = np.linspace(-12.0 / alpha, 12.0 / alpha, 2001)
        d = partner_potentials(w)[1].evaluate(x) - partner_potentials(w_dn)[0].evaluate(x)
        worst = max(worst, float(np.max(np.abs(d - d[0]))))

    ok = worst <= 1e-12
    announce(capsys, 6, "partner equals shifted well plus a constant", ok,
             f"worst pointwise spread {worst:.2e} on 2001-point grids")
    assert worst <= 1e-12


def test_criterion_7_discretization_order(capsys):
    v = pcs_partner_coefficients(SusyParams(1, 0, 0, 1), PLUS)
    errs = {}
    for n in (2000, 4000):
        e = eigen_near(discretize(v, Grid(L=12.0, N=n)), -1.05).energy
        errs[n] = abs(e.real + 1.0)
    ratio = errs[2000] / errs[4000]

    ok = 3.5 <= ratio <= 4.5
    announce(capsys, 7, "eigenvalue error shrinks at second order", ok,
             f"error ratio {ratio:.3f} for N 2000 -> 4000")
    assert 3.5 <= ratio <= 4.5


def test_criterion_8_degenerate_fixed_point(capsys):
    p = SusyParams(2, 2.5, 0, 1)
    s1, s2 = two_series_spectrum(p)
    same_sets = len(s1.energies) == len(s2.energies) and all(
        abs(a - b) <= 1e-12 for a, b in zip(sorted(s1.energies, key=lambda e: e.real),
                                            sorted(s2.energies, key=lambda e: e.real))
    )
    rep = verify_spectrum(p)
    once_each = (
        len(rep.matches) == 2
        and [m.analytic.multiplicity for m in rep.matches] == [2, 2]
        and not rep.unmatched_analytic
        and not rep.unmatched_numeric
    )

    ok = same_sets and once_each and rep.passed and rep.max_abs_err <= 1e-6
    announce(capsys, 8, "coincident towers found once each at the fixed point", ok,
             f"levels {sorted(e.real for e in s1.energies)}, max |dE| = {rep.max_abs_err:.2e}")
    assert same_sets
    assert once_each
    assert rep.passed
    assert rep.max_abs_err <= 1e-6
