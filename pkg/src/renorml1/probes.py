"""Finite probes of rotundity and diameter behaviour.

These are assertable, desk-scale stand-ins for statements whose full forms
quantify over sequences or the weak topology: midpoint convexity defects,
failure of strongly extreme points, one quantitative equi-integrability
inequality, weak-smallness at a chosen test depth, and slice-diameter lower
bounds driven by the witness machinery.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .dyadic import (
    DyadicIndex,
    DyadicStep,
    as_index,
    frac_str,
    integral_over,
    norms,
    sqrt_floor_decimal,
)
from .renorm import tnorm_sq
from .witness import GapConditionError, WeakNbhd, WitnessReport, d2p_witness


def midpoint_defect(f: DyadicStep, g: DyadicStep) -> Fraction:
    """(T(f)**2 + T(g)**2)/2 - T((f+g)/2)**2, exact; >= 0, and 0 iff f = g."""
    mid = Fraction(1, 2) * (f + g)
    return (tnorm_sq(f) + tnorm_sq(g)) / 2 - tnorm_sq(mid)


@dataclass(frozen=True)
class ExtremeFailureWitness:
    """A unit-ball center with a fat two-sided perturbation.

    T(center +- u)**2 < 1 while l1(u) stays >= (1 - gamma) * l1(f) for the
    generating center f: the center cannot be a strongly extreme point.
    """

    center: DyadicStep
    u: DyadicStep
    ball_check_sq: tuple[Fraction, Fraction]
    l1_of_u: Fraction
    l1_floor: Fraction  # (1 - gamma) * l1(f) of the generating run
    report: WitnessReport

    def to_json(self) -> dict:
        from .dyadic import step_to_json

        return {
            "center": step_to_json(self.center),
            "u": step_to_json(self.u),
            "ball_check_sq": [frac_str(x) for x in self.ball_check_sq],
            "l1_of_u": frac_str(self.l1_of_u),
            "l1_floor": frac_str(self.l1_floor),
        }


def strong_extreme_failure(nbhd: WeakNbhd, eps) -> ExtremeFailureWitness:
    """Build (center, u) = ((g1+g2)/2, (g1-g2)/2) from a witness run."""
    rep = d2p_witness(nbhd, eps)
    half = Fraction(1, 2)
    center = half * (rep.g1 + rep.g2)
    u = half * (rep.g1 - rep.g2)
    plus = tnorm_sq(center + u)
    minus = tnorm_sq(center - u)
    if not (plus < 1 and minus < 1):
        raise RuntimeError("internal: ball checks failed on witness output")
    l1_u = norms(u).l1
    floor = (1 - rep.gamma) * norms(nbhd.center).l1
    if l1_u < floor:
        raise RuntimeError("internal: l1(u) fell below (1-gamma)*l1(f)")
    return ExtremeFailureWitness(center, u, (plus, minus), l1_u, floor, rep)


@dataclass(frozen=True)
class ChainReport:
    """Both sides of the perturbation inequality, with its ingredients."""

    lhs: Fraction  # (l1(f+g) + l1(f-g)) / 2
    rhs: Fraction  # l1(f) + int_A |g| - 2 int_A |f|
    l1_sum: Fraction
    l1_diff: Fraction
    int_a_abs_g: Fraction
    int_a_abs_f: Fraction
    l1_f: Fraction
    ok: bool

    def to_json(self) -> dict:
        return {
            "lhs": frac_str(self.lhs),
            "rhs": frac_str(self.rhs),
            "l1_sum": frac_str(self.l1_sum),
            "l1_diff": frac_str(self.l1_diff),
            "int_A_abs_g": frac_str(self.int_a_abs_g),
            "int_A_abs_f": frac_str(self.int_a_abs_f),
            "l1_f": frac_str(self.l1_f),
            "ok": self.ok,
        }


def perturbation_l1_chain(
    f: DyadicStep, g: DyadicStep, A: Sequence
) -> ChainReport:
    """Evaluate (l1(f+g) + l1(f-g))/2 >= l1(f) + int_A |g| - 2 int_A |f|.

    A is a disjoint list of dyadic indices. The inequality holds for every
    valid input (pointwise max(|f|,|g|) = (|f+g|+|f-g|)/2); a violation is a
    library bug.
    """
    cells = [as_index(idx) for idx in A]
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            if cells[i].overlaps(cells[j]):
                raise ValueError(f"indices {tuple(cells[i])} and {tuple(cells[j])} overlap")
    af, ag = abs(f), abs(g)
    int_a_f = sum((integral_over(af, idx) for idx in cells), Fraction(0))
    int_a_g = sum((integral_over(ag, idx) for idx in cells), Fraction(0))
    l1_sum = norms(f + g).l1
    l1_diff = norms(f - g).l1
    l1_f = norms(f).l1
    lhs = (l1_sum + l1_diff) / 2
    rhs = l1_f + int_a_g - 2 * int_a_f
    ok = lhs >= rhs
    if not ok:
        raise RuntimeError("internal: perturbation chain inequality violated")
    return ChainReport(lhs, rhs, l1_sum, l1_diff, int_a_g, int_a_f, l1_f, ok)


def weak_smallness(u: DyadicStep, depth: int) -> Fraction:
    """max over k <= depth, j <= 2**k of |int_{I(k,j)} u|, exact.

    A finite proxy for weak smallness tested against the dyadic family:
    mean-zero oscillation below the test depth scores 0 while l1 stays big.
    """
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    worst = Fraction(0)
    for k in range(depth + 1):
        for j in range(1, (1 << k) + 1):
            worst = max(worst, abs(integral_over(u, DyadicIndex(k, j))))
    return worst


@dataclass(frozen=True)
class SliceEntry:
    eps: Fraction
    gap_sq: Optional[Fraction]
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def slice_diameter_lb(
    center: DyadicStep,
    functionals: Sequence[DyadicStep],
    delta,
    eps_schedule: Sequence,
) -> list[SliceEntry]:
    """Run the witness once per eps in the schedule; report T(g1-g2)**2.

    Entries fail individually (gap condition) without aborting the schedule.
    """
    nbhd = WeakNbhd(center, tuple(functionals), delta)
    out: list[SliceEntry] = []
    for eps in eps_schedule:
        eps = Fraction(eps)
        try:
            rep = d2p_witness(nbhd, eps)
        except GapConditionError as exc:
            out.append(SliceEntry(eps, None, str(exc)))
            continue
        gap = rep.gap_sq
        if gap > 4:
            raise RuntimeError("internal: squared slice gap exceeded 4")
        out.append(SliceEntry(eps, gap))
    return out


def slice_csv(entries: Sequence[SliceEntry], float_digits: int = 12) -> str:
    """CSV rows (eps, gap_sq, gap_float); failed entries leave gaps empty."""
    buf = io.StringIO()
    buf.write("eps,gap_sq,gap_float\n")
    for e in entries:
        if e.ok:
            buf.write(
                f"{frac_str(e.eps)},{frac_str(e.gap_sq)},"
                f"{sqrt_floor_decimal(e.gap_sq, float_digits)}\n"
            )
        else:
            buf.write(f"{frac_str(e.eps)},,\n")
    return buf.getvalue()
