"""Potential-algebra view of the same wells.

A one-parameter family of operators built from sl(2) generators
J_z = -i d/dphi and J_+/- = e^{+/-i phi} (...) produces, on each fixed
J_z eigenspace <m>, a Schrodinger operator whose potential has exactly
the sech^2 / sech tanh profile produced by the supersymmetric
construction. Matching the two coefficient pairs links the algebraic
labels (m, b) to the superpotential data and turns the discrete
spectrum into a statement about unitary representations.

The matching conditions are polynomial, so besides the closed-form
root extraction there is an independent Newton route used to
cross-check it; disagreement is logged loudly rather than papered
over.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np

from .core import BranchSign, PotentialCoefficients, SusyParams, pcs_partner_coefficients
from .errors import DegenerateB, NewtonDivergence

__all__ = [
    "Sl2Params",
    "build_sl2_potential",
    "correspondence_residuals",
    "solve_m_given_b",
    "m_square_identities",
    "solve_correspondence",
]

log = logging.getLogger(__name__)


def _finite_complex(name: str, z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z!r}")
    return z


@dataclass(frozen=True)
class Sl2Params:
    """Algebraic labels (m, b): J_z eigenvalue and realization constant."""

    m: complex
    b: complex
    alpha: float = 1.0

    def __post_init__(self):
        _finite_complex("m", self.m)
        _finite_complex("b", self.b)
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be positive and finite, got {self.alpha!r}")


def build_sl2_potential(s: Sl2Params) -> PotentialCoefficients:
    """Potential carried by the m-eigenspace of the algebraic family.

    t2 = b^2 + alpha^2 (1/4 - m^2), st = -2 alpha m b, with no constant
    offset: the algebraic route fixes energies relative to zero.
    """
    a = s.alpha
    t2 = s.b * s.b + a * a * (0.25 - s.m * s.m)
    st = -2.0 * a * s.m * s.b
    return PotentialCoefficients(t2=t2, st=st, e0=0j, alpha=a)


def correspondence_residuals(
    s: Sl2Params, p: SusyParams, branch: BranchSign = BranchSign.PLUS
) -> np.ndarray:
    """[Re dt2, Im dt2, Re dst, Im dst] between the two constructions.

    The supersymmetric side contributes only its x-dependent profile;
    its constant offset e0 is the factorization energy, which the
    algebraic side does not carry.
    """
    alg = build_sl2_potential(s)
    sus = pcs_partner_coefficients(p, branch)
    dt2 = alg.t2 - sus.t2
    dst = alg.st - sus.st
    return np.array([dt2.real, dt2.imag, dst.real, dst.imag])


def _profile_targets(p: SusyParams, branch: BranchSign) -> tuple[complex, complex]:
    v = pcs_partner_coefficients(p, branch)
    return v.t2, v.st


def solve_m_given_b(
    b: complex, p: SusyParams, branch: BranchSign = BranchSign.PLUS
) -> complex:
    """The unique m matching the sech tanh strength for a given b.

    Writing P = (A - B + alpha/2) C and Q = AB + C^2 + (alpha/2) B, the
    strength condition -2 alpha m b = st splits into real equations
    linear in (Re m, Im m) with determinant alpha^2 |b|^2, so the
    solution is closed-form:

        Re m = (-s b_R P - b_I Q) / (alpha |b|^2)
        Im m = ( s b_I P - b_R Q) / (alpha |b|^2)

    with s the branch sign. Raises DegenerateB at b = 0, where the
    strength condition degenerates and m drops out entirely.
    """
    b = _finite_complex("b", b)
    if b == 0:
        raise DegenerateB("m is undetermined at b = 0: the sech tanh term vanishes")
    sgn = float(branch.sign)
    a = p.alpha
    P = (p.A - p.B + 0.5 * a) * p.C
    Q = p.A * p.B + p.C * p.C + 0.5 * a * p.B
    bb = b.real * b.real + b.imag * b.imag
    re_m = (-sgn * b.real * P - b.imag * Q) / (a * bb)
    im_m = (sgn * b.imag * P - b.real * Q) / (a * bb)
    return complex(re_m, im_m)


def m_square_identities(
    b: complex, p: SusyParams, branch: BranchSign = BranchSign.PLUS
) -> tuple[float, float]:
    """Closed forms for Re(m^2) and (1/2) Im(m^2) of the matched m.

    Eliminating m between the two matching conditions leaves b-dependent
    expressions built only from the well parameters:

        Re m^2 = 1/4 + (b_R^2 - b_I^2 - Re t2) / alpha^2
        (1/2) Im m^2 = (b_R b_I - (1/2) Im t2) / alpha^2

    Useful as an independent check on any (m, b) candidate: both must
    agree with m from solve_m_given_b squared.
    """
    b = _finite_complex("b", b)
    t2, _ = _profile_targets(p, branch)
    a2 = p.alpha * p.alpha
    re_m2 = 0.25 + (b.real * b.real - b.imag * b.imag - t2.real) / a2
    half_im_m2 = (b.real * b.imag - 0.5 * t2.imag) / a2
    return re_m2, half_im_m2


def _pair_residual(m: complex, b: complex, t2: complex, st: complex, alpha: float) -> float:
    r1 = b * b + alpha * alpha * (0.25 - m * m) - t2
    r2 = -2.0 * alpha * m * b - st
    return max(abs(r1), abs(r2))


def _quartic_roots_y(t2: complex, st: complex, alpha: float) -> list[complex]:
    # y = b^2 satisfies y^2 - (t2 - alpha^2/4) y - st^2 / 4 = 0 after m
    # is eliminated. Solve with the product trick so the small root is
    # not lost to cancellation.
    p1 = t2 - 0.25 * alpha * alpha
    q = -st * st / 4.0
    disc = cmath.sqrt(p1 * p1 - 4.0 * q)
    # pick the sign that adds rather than cancels
    if (p1.conjugate() * disc).real >= 0.0:
        y1 = 0.5 * (p1 + disc)
    else:
        y1 = 0.5 * (p1 - disc)
    roots = []
    if y1 != 0:
        roots.append(y1)
        y2 = q / y1
        if y2 != 0 and abs(y2 - y1) > 1e-14 * max(1.0, abs(y1)):
            roots.append(y2)
    return roots


def _closed_form_pairs(p: SusyParams, branch: BranchSign) -> list[tuple[complex, complex]]:
    t2, st = _profile_targets(p, branch)
    a = p.alpha
    pairs: list[tuple[complex, complex]] = []
    for y in _quartic_roots_y(t2, st, a):
        b = cmath.sqrt(y)
        if b == 0:
            continue
        m = -st / (2.0 * a * b)
        for mm, bb in ((m, b), (-m, -b)):
            res = _pair_residual(mm, bb, t2, st, a)
            if res > 1e-12:
                mm, bb, res = _polish(mm, bb, t2, st, a)
            pairs.append((mm, bb))
    if not pairs:
        raise DegenerateB(
            "every matching root has b = 0; the correspondence degenerates here"
        )
    return pairs


def _polish(m, b, t2, st, alpha, steps: int = 2):
    # one or two Newton steps on the 2x2 complex system; cheap insurance
    # against the square root losing half the digits near double roots
    for _ in range(steps):
        f1 = b * b + alpha * alpha * (0.25 - m * m) - t2
        f2 = -2.0 * alpha * m * b - st
        # jacobian [[-2 a^2 m, 2 b], [-2 a b, -2 a m]]
        j11 = -2.0 * alpha * alpha * m
        j12 = 2.0 * b
        j21 = -2.0 * alpha * b
        j22 = -2.0 * alpha * m
        det = j11 * j22 - j12 * j21
        if det == 0:
            break
        dm = (f1 * j22 - f2 * j12) / det
        db = (f2 * j11 - f1 * j21) / det
        m, b = m - dm, b - db
    return m, b, _pair_residual(m, b, t2, st, alpha)


def _newton_pairs(p: SusyParams, branch: BranchSign) -> list[tuple[complex, complex]]:
    t2, st = _profile_targets(p, branch)
    a = p.alpha
    scale = max(1.0, abs(t2), abs(st), a)
    found: list[tuple[complex, complex]] = []
    diverged = 0
    for br in (1.0, 3.0):
        for bi in (1.0, -1.0, 3.0, -3.0):
            b = complex(br, bi)
            ok = False
            for _ in range(100):
                # scalar Newton on g(b) = b^2 + a^2/4 - st^2/(4 b^2) - t2,
                # the m-eliminated matching condition
                g = b * b + 0.25 * a * a - st * st / (4.0 * b * b) - t2
                if abs(g) <= 1e-12 * scale:
                    ok = True
                    break
                dg = 2.0 * b + st * st / (2.0 * b * b * b)
                if dg == 0:
                    break
                step = g / dg
                # damped update: halve until |g| does not grow
                lam = 1.0
                for _ in range(8):
                    trial = b - lam * step
                    if trial != 0:
                        gt = (
                            trial * trial
                            + 0.25 * a * a
                            - st * st / (4.0 * trial * trial)
                            - t2
                        )
                        if abs(gt) < abs(g):
                            break
                    lam *= 0.5
                b = b - lam * step
                if b == 0:
                    break
            if not ok:
                diverged += 1
                log.debug("newton start %s did not converge for %s", complex(br, bi), p)
                continue
            try:
                m = solve_m_given_b(b, p, branch)
            except DegenerateB:
                continue
            found.append((m, b))
    if not found:
        raise NewtonDivergence(
            f"all {diverged} starting points diverged while cross-checking {p}"
        )
    return found


def _canonical(pairs):
    # one representative per +/- orbit: principal-branch b first; clamp
    # rounding dust before picking the sign so all but the true sign of
    # b decides, not a 1e-17 real part on a purely imaginary root
    seen: list[tuple[complex, complex]] = []
    for m, b in pairs:
        scale = abs(b)
        br = 0.0 if abs(b.real) <= 1e-12 * scale else b.real
        bi = 0.0 if abs(b.imag) <= 1e-12 * scale else b.imag
        rep = (m, b)
        if (br, bi) < (0.0, 0.0):
            rep = (-m, -b)
        for sm, sb in seen:
            if abs(sm - rep[0]) < 1e-8 and abs(sb - rep[1]) < 1e-8:
                break
        else:
            seen.append(rep)
    seen.sort(key=lambda pr: (
        (pr[1] * pr[1]).real,
        (pr[1] * pr[1]).imag,
        pr[1].real,
        pr[1].imag,
    ))
    return seen


def solve_correspondence(
    p: SusyParams,
    branch: BranchSign = BranchSign.PLUS,
    cross_check: bool = True,
) -> list[tuple[complex, complex]]:
    """All algebraic labels (m, b) realizing the given well.

    Eliminating m reduces the matching to a quadratic in b^2, giving up
    to two +/- orbits of solutions; each is returned once, with b on
    the side of the principal square root, ordered by b^2. With
    cross_check (default), an independent damped-Newton search from
    eight starting points must land on the same orbits; a mismatch is
    logged as an error but the closed-form answer is still returned.

    Raises:
        DegenerateB: the only matching roots have b = 0 (then m is
            undetermined and no labeling exists).
    """
    closed = _canonical(_closed_form_pairs(p, branch))
    if cross_check:
        try:
            newton = _canonical(_newton_pairs(p, branch))
        except NewtonDivergence as exc:
            log.error("newton cross-check failed: %s", exc)
        else:
            for m, b in newton:
                hit = any(
                    abs(m - cm) < 1e-6 and abs(b - cb) < 1e-6 for cm, cb in closed
                )
                if not hit:
                    log.error(
                        "newton found (m=%s, b=%s) missing from closed-form set %s",
                        m,
                        b,
                        closed,
                    )
    return closed
