"""Algebraic (m, b) labels versus the factorization coefficients."""

import numpy as np
import pytest

from pcs_spectra import (
    BranchSign,
    DegenerateB,
    Sl2Params,
    SusyParams,
    build_sl2_potential,
    correspondence_residuals,
    m_square_identities,
    pcs_partner_coefficients,
    solve_correspondence,
    solve_m_given_b,
)

PLUS, MINUS = BranchSign.PLUS, BranchSign.MINUS


def random_params(rng):
    A, B = rng.uniform(0.5, 3.5, 2)
    C = rng.uniform(-1.5, 1.5)
    alpha = rng.uniform(0.5, 2.0)
    return SusyParams(A=A, B=B, C=C, alpha=alpha)


def test_build_sl2_potential_worked_values():
    v = build_sl2_potential(Sl2Params(m=-2.5, b=3j, alpha=1.0))
    assert v.t2 == pytest.approx(-15.0)
    assert v.st == pytest.approx(15j)
    assert v.e0 == 0


def test_worked_pair_recovered():
    # ordered by b^2: the b = 3i orbit sits below the b = 2.5i one
    sols = solve_correspondence(SusyParams(2, 3, 0, 1))
    assert len(sols) == 2
    (m1, b1), (m2, b2) = sols
    assert m1 == pytest.approx(-2.5, abs=1e-10) and b1 == pytest.approx(3j, abs=1e-10)
    assert m2 == pytest.approx(-3.0, abs=1e-10) and b2 == pytest.approx(2.5j, abs=1e-10)


def test_residuals_vanish_on_solutions():
    rng = np.random.default_rng(31)
    worst = 0.0
    for _ in range(300):
        p = random_params(rng)
        br = PLUS if rng.random() < 0.5 else MINUS
        for m, b in solve_correspondence(p, br):
            res = correspondence_residuals(Sl2Params(m=m, b=b, alpha=p.alpha), p, br)
            assert res.shape == (4,)
            worst = max(worst, float(np.abs(res).max()))
    assert worst <= 1e-10


def test_solve_m_given_b_matches_strength_condition():
    rng = np.random.default_rng(32)
    for _ in range(200):
        p = random_params(rng)
        br = PLUS if rng.random() < 0.5 else MINUS
        b = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if abs(b) < 0.1:
            continue
        m = solve_m_given_b(b, p, br)
        v = pcs_partner_coefficients(p, br)
        assert -2 * p.alpha * m * b == pytest.approx(v.st, abs=1e-11)


def test_m_square_identities_agree_with_solved_m():
    rng = np.random.default_rng(33)
    for _ in range(300):
        p = random_params(rng)
        br = PLUS if rng.random() < 0.5 else MINUS
        for m, b in solve_correspondence(p, br):
            re_m2, half_im_m2 = m_square_identities(b, p, br)
            m2 = m * m
            assert abs(m2.real - re_m2) <= 1e-10
            assert abs(0.5 * m2.imag - half_im_m2) <= 1e-10


def test_plus_minus_orbit_collapsed():
    # (m, b) and (-m, -b) realize the same well; only one is reported
    sols = solve_correspondence(SusyParams(2, 3, 0, 1))
    for m, b in sols:
        assert not any(
            abs(m + m2) < 1e-9 and abs(b + b2) < 1e-9 for m2, b2 in sols
        )


def test_cross_check_optional():
    p = SusyParams(1.3, 2.1, 0.4, 0.8)
    fast = solve_correspondence(p, PLUS, cross_check=False)
    slow = solve_correspondence(p, PLUS, cross_check=True)
    assert fast == slow


def test_solve_m_rejects_b_zero():
    with pytest.raises(DegenerateB):
        solve_m_given_b(0j, SusyParams(2, 3, 0, 1), PLUS)


def test_degenerate_well_has_no_labels():
    # t2 = alpha^2/4 and st = 0 push every root to b = 0
    with pytest.raises(DegenerateB):
        solve_correspondence(SusyParams(-0.5, 0.0, 0.0, 1.0))


def test_alignment_with_tower_parameters_at_unit_range():
    # at alpha = 1 the |m| values line up with the ladder heads
    # A + 1/2 and B; away from alpha = 1 they do not
    p = SusyParams(2, 3, 0, 1)
    got = sorted(abs(m) for m, _ in solve_correspondence(p))
    assert got[0] == pytest.approx(2.5, abs=1e-10)
    assert got[1] == pytest.approx(3.0, abs=1e-10)
