"""The l2-of-seminorms norm on step functions, with exact squared values.

The norm is

    T(f)**2 = sum_{k>=0} 4**-k * sum_{j=1..2**k} s(f, k, j)**2,

where s(f, k, j) is the integral of |f| over the level-k cell j. For a step
function of level K every term with k >= K collapses to a geometric series,
so T(f)**2 is an exact rational: the partial sum below level K plus the
closed tail (8/7) * 4**(-2K) * sum_i values[i]**2.

All comparisons are made on squares; square roots appear only in decimal
renderings. T(f) itself is generically irrational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dyadic import (
    DyadicStep,
    as_index,
    cell_masses,
    dyadic_project,
    fold_masses,
    frac_str,
    integral_over,
    norms,
    pairing,
    refine,
    sqrt_floor_decimal,
    to_frac,
)

#: sum over k >= 0 of 8**-k
GEOM_8 = Fraction(8, 7)


def seminorm(f: DyadicStep, idx) -> Fraction:
    """s(f, k, j) = integral of |f| over I(k, j), exactly."""
    return integral_over(abs(f), as_index(idx))


def _sumsq(xs) -> Fraction:
    return sum((x * x for x in xs), Fraction(0))


def tnorm_sq(f: DyadicStep) -> Fraction:
    """Exact squared norm T(f)**2 (closed tail from f's own level up)."""
    K = f.level
    total = GEOM_8 * _sumsq(f.values) / 4 ** (2 * K)
    cur = cell_masses(f, absolute=True)
    for k in range(K - 1, -1, -1):
        cur = fold_masses(cur)
        total += _sumsq(cur) / 4**k
    return total


def partial_below(f: DyadicStep, T: int) -> Fraction:
    """Truncated series: sum_{k < T} 4**-k * sum_j s(f, k, j)**2."""
    if T < 0:
        raise ValueError(f"truncation level must be >= 0, got {T}")
    K = f.level
    total = Fraction(0)
    # levels at and above f's own grid: each cell contributes |v| * 2**-k
    S = _sumsq(f.values)
    for k in range(K, T):
        total += S / (2**K * 8**k)
    # levels strictly below f's grid: fold absolute cell masses upward
    cur = cell_masses(f, absolute=True)
    for k in range(K - 1, -1, -1):
        cur = fold_masses(cur)
        if k < T:
            total += _sumsq(cur) / 4**k
    return total


def tail_formula(f: DyadicStep, T: int) -> Fraction:
    """Closed form of sum_{k >= T} 4**-k * sum_j s(f, k, j)**2 for T >= level(f)."""
    if T < f.level:
        raise ValueError(f"tail start {T} is below the function level {f.level}")
    return GEOM_8 * _sumsq(f.values) / (2**f.level * 8**T)


@dataclass(frozen=True)
class NormSqReport:
    tnorm_sq: Fraction
    l1: Fraction
    linf: Fraction
    tnorm_float: str
    equiv_ok: bool

    def to_json(self) -> dict:
        return {
            "tnorm_sq": frac_str(self.tnorm_sq),
            "l1": frac_str(self.l1),
            "linf": frac_str(self.linf),
            "tnorm_float": self.tnorm_float,
            "equiv_ok": self.equiv_ok,
        }


def norm_report(f: DyadicStep, float_digits: int = 12) -> NormSqReport:
    t = tnorm_sq(f)
    l1, linf = norms(f)
    eq = check_equivalence(f)
    return NormSqReport(t, l1, linf, sqrt_floor_decimal(t, float_digits), eq.ok)


@dataclass(frozen=True)
class EquivalenceReport:
    """l1**2 <= T**2 <= 2*l1**2, plus the sharper computable 4/3 bound."""

    l1_sq: Fraction
    tnorm_sq: Fraction
    lower_ok: bool
    upper_ok: bool
    sharp_ok: bool  # tnorm_sq <= (4/3) l1_sq

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok and self.sharp_ok


def check_equivalence(f: DyadicStep) -> EquivalenceReport:
    t = tnorm_sq(f)
    l1 = norms(f).l1
    lsq = l1 * l1
    return EquivalenceReport(
        l1_sq=lsq,
        tnorm_sq=t,
        lower_ok=lsq <= t,
        upper_ok=t <= 2 * lsq,
        sharp_ok=t <= Fraction(4, 3) * lsq,
    )


# -- strict convexity: triangle equality classifier ---------------------------


@dataclass(frozen=True)
class EqualityCase:
    """Outcome of the triangle-equality test T(f+g) = T(f) + T(g).

    Degenerate(ratio=t) certifies f = t*g with t >= 0. When g = 0 the ratio
    is undefined; by convention the pair (0, 0) is Degenerate with ratio 0,
    while (f != 0, g = 0) is Strict with `zero_operand` set, since rotundity
    statements quantify over nonzero vectors.
    """

    tag: str  # "Strict" | "Degenerate"
    ratio: Optional[Fraction] = None
    zero_operand: bool = False

    @property
    def is_degenerate(self) -> bool:
        return self.tag == "Degenerate"

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "ratio": None if self.ratio is None else frac_str(self.ratio),
            "zero_operand": self.zero_operand,
        }


def triangle_equality_case(f: DyadicStep, g: DyadicStep) -> EqualityCase:
    """Decide exactly whether T(f+g) = T(f) + T(g).

    Because the norm is an l2 aggregate of the seminorms, equality forces
    per-cell additivity of |f+g| (cellwise sign agreement) together with
    proportional seminorm vectors; on step functions this reduces to the
    finite criterion f = t*g cellwise for some t >= 0.
    """
    L = max(f.level, g.level)
    vf = refine(f, L).values
    vg = refine(g, L).values
    if all(y == 0 for y in vg):
        if all(x == 0 for x in vf):
            return EqualityCase("Degenerate", Fraction(0), zero_operand=True)
        return EqualityCase("Strict", None, zero_operand=True)
    i0 = next(i for i, y in enumerate(vg) if y != 0)
    t = vf[i0] / vg[i0]
    if t < 0:
        return EqualityCase("Strict")
    if all(x == t * y for x, y in zip(vf, vg)):
        return EqualityCase("Degenerate", t)
    return EqualityCase("Strict")


# -- dual-norm lower bounds ----------------------------------------------------


@dataclass(frozen=True)
class DualNormEstimate:
    """Certified lower bound on sup{<f, h> : T(f) <= 1, level(f) <= L}.

    The certificate is the exact pair (pairing_sq, tnorm_sq) of the best
    *unnormalized* maximizer found; lower_sq = pairing_sq / tnorm_sq is the
    exact squared value of the normalized candidate, hence a true lower
    bound regardless of how far the ascent got.
    """

    lower_sq: Fraction
    maximizer: DyadicStep
    pairing_sq: Fraction
    tnorm_sq: Fraction
    iterations: int
    converged: bool


def _tnorm_grad(u: list[Fraction], L: int) -> list[Fraction]:
    """Gradient of u -> tnorm_sq(step(L; u)) for componentwise-nonnegative u."""
    grad = [GEOM_8 * 2 * ui / 4 ** (2 * L) for ui in u]
    masses = [ui / (1 << L) for ui in u]
    cur = masses
    span = 1
    for k in range(L - 1, -1, -1):
        cur = fold_masses(cur)
        span *= 2
        coef = Fraction(2, 4**k * (1 << L))
        for j, block in enumerate(cur):
            for i in range(j * span, (j + 1) * span):
                grad[i] += coef * block
    return grad


def dual_norm_estimate(
    h: DyadicStep,
    L: int,
    tol=Fraction(1, 10**9),
    max_iter: int = 400,
) -> DualNormEstimate:
    """Projected ascent for the support function of the norm ball at level L.

    The search aligns signs with h cellwise and maximizes the exact ratio
    (c . u)**2 / tnorm_sq(u) over the nonnegative orthant, where c holds the
    per-cell integrals of |h|. Every accepted iterate strictly improves the
    exact ratio; iteration stops once the relative improvement drops below
    `tol` or `max_iter` is hit (flagged through `converged`).
    """
    tol = to_frac(tol)
    hL = dyadic_project(h, L)
    c = [abs(v) / (1 << L) for v in hL.values]  # |<e_i, h>| for unit cell values
    sigma = [1 if v > 0 else (-1 if v < 0 else 0) for v in hL.values]

    def build(u: list[Fraction]) -> DyadicStep:
        return DyadicStep(L, tuple(s * x for s, x in zip(sigma, u)))

    if all(x == 0 for x in c):
        zero = DyadicStep.zero(L)
        return DualNormEstimate(Fraction(0), zero, Fraction(0), Fraction(0), 0, True)

    def ratio(u: list[Fraction]) -> Fraction:
        p = sum((ci * ui for ci, ui in zip(c, u)), Fraction(0))
        q = tnorm_sq(DyadicStep(L, tuple(u)))
        return p * p / q

    u = [ci for ci in c]  # sign-aligned start: masses proportional to |h|
    r = ratio(u)
    step = Fraction(1)
    iters = 0
    converged = False
    for iters in range(1, max_iter + 1):
        q = tnorm_sq(DyadicStep(L, tuple(u)))
        p = sum((ci * ui for ci, ui in zip(c, u)), Fraction(0))
        gq = _tnorm_grad(u, L)
        d = [2 * ci * q - p * gi for ci, gi in zip(c, gq)]
        d = [di if (ui > 0 or di > 0) else Fraction(0) for ui, di in zip(u, d)]
        if all(di == 0 for di in d):
            converged = True
            break
        scale = max(abs(di) for di in d)
        d = [di / scale for di in d]
        improved = False
        t = step
        for _ in range(40):
            cand = [max(Fraction(0), ui + t * di) for ui, di in zip(u, d)]
            cand = [x.limit_denominator(1 << 48) for x in cand]
            if any(x > 0 for x in cand):
                rc = ratio(cand)
                if rc > r:
                    rel = (rc - r) / r if r > 0 else Fraction(1)
                    u, r = cand, rc
                    step = t * 2
                    improved = True
                    if rel < tol:
                        converged = True
                    break
            t /= 2
        if not improved:
            converged = True
            break
        if converged:
            break

    f_star = build(u)
    p = pairing(f_star, h)
    q = tnorm_sq(f_star)
    return DualNormEstimate(p * p / q, f_star, p * p, q, iters, converged)
