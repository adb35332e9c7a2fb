"""Analytic level towers and the PT-breaking bifurcation.

The shape-invariance of the hyperbolic well turns the partner
construction into a ladder: V_plus of one superpotential equals V_minus
of the same superpotential with lam lowered by alpha, up to a constant.
Iterating gives a tower of energies -lam_n^2 with lam_n = lam - n alpha,
one tower per factorization, hence two towers for this well.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .core import (
    BranchSign,
    ComplexSusyParams,
    SusyParams,
    Superpotential,
    complexify,
    dual_superpotentials,
)
from .errors import LadderExhausted

__all__ = [
    "SpectrumSeries",
    "BifurcationPoint",
    "BrokenSpectrum",
    "shape_invariance_step",
    "two_series_spectrum",
    "broken_spectrum",
    "bifurcation_scan",
    "energy_sort_key",
]


def energy_sort_key(e: complex):
    """Deterministic ordering of complex energies: real part, then imaginary."""
    return (e.real, e.imag)


@dataclass(frozen=True)
class SpectrumSeries:
    """One tower of levels generated by a single superpotential.

    ladder_params holds the (lam_n, mu_n) walked by the ladder, one pair
    per emitted level; energies[n] = -lam_n^2. factorization_energy is
    -lam_0^2 whether or not the tower is empty.
    """

    label: str
    branch: BranchSign
    ladder_params: tuple[tuple[complex, complex], ...]
    energies: tuple[complex, ...]
    factorization_energy: complex

    @property
    def is_empty(self) -> bool:
        return not self.energies


@dataclass(frozen=True)
class BifurcationPoint:
    """Both-branch level sets at one value of the PT-breaking coupling."""

    C: float
    energies_plus: tuple[complex, ...]
    energies_minus: tuple[complex, ...]


@dataclass(frozen=True)
class BrokenSpectrum:
    """Tower pairs for both branches at C != 0."""

    plus: tuple[SpectrumSeries, SpectrumSeries]
    minus: tuple[SpectrumSeries, SpectrumSeries]


def shape_invariance_step(w: Superpotential):
    """Step the ladder down one rung.

    Returns (w_next, energy_shift) with lam -> lam - alpha, mu fixed,
    and energy_shift = lam^2 - (lam - alpha)^2. V_plus of w and V_minus
    of w_next are the same function up to this constant, which is what
    makes the tower solvable level by level.

    Raises:
        LadderExhausted: when Re(lam) < alpha, i.e. the rung below has
            no normalizable zero mode and the tower ends here.
    """
    if w.lam.real < w.alpha:
        raise LadderExhausted(
            f"Re(lam) = {w.lam.real} < alpha = {w.alpha}: no bound state below this rung"
        )
    lam_next = w.lam - w.alpha
    shift = w.lam * w.lam - lam_next * lam_next
    w_next = Superpotential(
        lam=lam_next,
        mu=w.mu,
        alpha=w.alpha,
        factorization_energy=-(lam_next * lam_next),
    )
    return w_next, shift


def _walk_ladder(w: Superpotential, label: str, branch: BranchSign) -> SpectrumSeries:
    # Emit -lam_n^2 while Re(lam_n) > 0; the strict inequality is the
    # normalizability condition for the rung's zero mode, validated
    # against the numerical solver rather than postulated.
    ladder: list[tuple[complex, complex]] = []
    energies: list[complex] = []
    current = w
    while current.lam.real > 0.0:
        ladder.append((current.lam, current.mu))
        energies.append(-(current.lam * current.lam))
        if current.lam.real < current.alpha:
            break
        current, _ = shape_invariance_step(current)
    return SpectrumSeries(
        label=label,
        branch=branch,
        ladder_params=tuple(ladder),
        energies=tuple(energies),
        factorization_energy=w.factorization_energy,
    )


def two_series_spectrum(p, branch: BranchSign = BranchSign.PLUS):
    """The two level towers of V_minus.

    For real parameters with C = 0 the towers are

        series1: -(A - n alpha)^2          for 0 <= n < A / alpha
        series2: -(B - alpha/2 - n alpha)^2 for 0 <= n < (B - alpha/2) / alpha

    and both are real by construction. A complexified pair follows the
    same formulas with (calA, calB); a tower is empty when its starting
    Re(lam) is not positive. Energies are relative to the constant tail
    of the potential, so genuinely bound levels have negative real part
    in the unbroken phase.
    """
    w, w_exchanged = dual_superpotentials(p, branch)
    s1 = _walk_ladder(w, "series1", branch)
    s2 = _walk_ladder(w_exchanged, "series2", branch)
    return s1, s2


def broken_spectrum(p: SusyParams) -> BrokenSpectrum:
    """Both-branch towers for C != 0.

    The two branches are PT images of each other, so the minus-branch
    energies are the complex conjugates of the plus-branch energies
    level by level; with the arithmetic used here the pairing is exact
    to the bit.
    """
    if p.C == 0.0:
        raise ValueError("broken_spectrum requires C != 0; use two_series_spectrum")
    plus = two_series_spectrum(complexify(p, BranchSign.PLUS), BranchSign.PLUS)
    minus = two_series_spectrum(complexify(p, BranchSign.MINUS), BranchSign.MINUS)
    return BrokenSpectrum(plus=plus, minus=minus)


def _branch_energies(towers) -> tuple[complex, ...]:
    merged = list(towers[0].energies) + list(towers[1].energies)
    merged.sort(key=energy_sort_key)
    return tuple(merged)


def bifurcation_scan(p0: SusyParams, c_grid) -> list[BifurcationPoint]:
    """Level sets along a sweep of the PT-breaking coupling.

    Each grid value C replaces p0.C with everything else fixed. At
    C = 0 the two branches coincide and all energies are real; away
    from zero they split into conjugate pairs. Output order equals
    input order.
    """
    points: list[BifurcationPoint] = []
    for c in c_grid:
        q = replace(p0, C=float(c))
        if q.C == 0.0:
            towers = two_series_spectrum(q, BranchSign.PLUS)
            merged = _branch_energies(towers)
            points.append(BifurcationPoint(C=q.C, energies_plus=merged, energies_minus=merged))
        else:
            bs = broken_spectrum(q)
            points.append(
                BifurcationPoint(
                    C=q.C,
                    energies_plus=_branch_energies(bs.plus),
                    energies_minus=_branch_energies(bs.minus),
                )
            )
    return points
