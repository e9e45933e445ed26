"""Witness pairs for weak neighborhoods of the unit ball.

Given a center f with T(f)**2 <= 1 and a weak neighborhood
V = {g : |<g - f, h_l>| < delta for all l}, the construction splits the
positive and negative mass of f on each level-K cell into disjoint quarters
in two different patterns (f1 on quarters 1-2, f2 on quarters 3-4), then
retracts both slightly into the open ball:

    g_i = (1 - gamma) * f_i.

The point of the split is that f1 and f2 agree with f on every seminorm up
to level K while |f1 - f2| doubles them, so the pair sits deep inside V and
exactly far apart:

    T(g1 - g2)**2 >= 4 (1-gamma)**2 (T(f)**2 - 2**-K) > (2 - eps)**2.

Everything here is verified exactly on every run; the named checks are part
of the report. A failed *input* condition raises GapConditionError; a failed
*theorem* would be a library bug and raises RuntimeError.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dyadic import (
    MAX_LEVEL,
    DyadicStep,
    LevelOverflowError,
    fold_masses,
    frac_str,
    norms,
    pairing,
    refine,
    step_to_json,
    to_frac,
)
from .renorm import tnorm_sq


class GapConditionError(ValueError):
    """The adjusted gap condition fails for the chosen gamma and K."""


@dataclass(frozen=True)
class WeakNbhd:
    """Center f, functionals h_1..h_m with linf <= 1, and a radius delta > 0.

    Membership: g in V iff |<g - f, h_l>| < delta for every l.
    """

    center: DyadicStep
    functionals: tuple[DyadicStep, ...]
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "functionals", tuple(self.functionals))
        object.__setattr__(self, "delta", to_frac(self.delta))
        if self.delta <= 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        for i, h in enumerate(self.functionals):
            if norms(h).linf > 1:
                raise ValueError(f"functional {i} has linf > 1")

    def contains(self, g: DyadicStep) -> bool:
        return all(
            abs(pairing(g - self.center, h)) < self.delta for h in self.functionals
        )


@dataclass(frozen=True)
class Check:
    """One exactly evaluated (in)equality; `relation` relates lhs to rhs."""

    lhs: Fraction
    rhs: Fraction
    relation: str  # "==", "<", "<=", ">"
    ok: bool

    def to_json(self) -> dict:
        return {"lhs": frac_str(self.lhs), "rhs": frac_str(self.rhs), "ok": self.ok}


def _check(lhs: Fraction, relation: str, rhs: Fraction) -> Check:
    ok = {
        "==": lhs == rhs,
        "<": lhs < rhs,
        "<=": lhs <= rhs,
        ">": lhs > rhs,
        ">=": lhs >= rhs,
    }[relation]
    return Check(lhs, rhs, relation, ok)


@dataclass(frozen=True)
class SplitPair:
    """The level-(K+2) mass split of a center f.

    b[j], c[j] are the positive/negative masses of f on the level-K cell j;
    f1 carries them on quarters 4j-3 / 4j-2 of that cell, f2 on 4j-1 / 4j.
    """

    K: int
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]
    f1: DyadicStep
    f2: DyadicStep

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "b": [frac_str(x) for x in self.b],
            "c": [frac_str(x) for x in self.c],
            "f1": step_to_json(self.f1),
            "f2": step_to_json(self.f2),
        }


@dataclass(frozen=True)
class WitnessReport:
    gamma: Fraction
    K: int
    pair: SplitPair
    g1: DyadicStep
    g2: DyadicStep
    checks: dict[str, Check]
    guaranteed_gap_sq: Fraction
    eps: Fraction
    delta: Fraction

    @property
    def gap_sq(self) -> Fraction:
        return self.checks["gap"].lhs

    def to_json(self) -> dict:
        out = {
            "gamma": frac_str(self.gamma),
            "K": self.K,
            "eps": frac_str(self.eps),
            "delta": frac_str(self.delta),
            "guaranteed_gap_sq": frac_str(self.guaranteed_gap_sq),
            "split": self.pair.to_json(),
            "g1": step_to_json(self.g1),
            "g2": step_to_json(self.g2),
            "checks": {name: chk.to_json() for name, chk in self.checks.items()},
        }
        return out


def choose_gamma(f_inf, delta, eps) -> Fraction:
    """Largest gamma = 2**-p (p >= 1) with (5*f_inf + 1)*gamma < delta and
    2*(1-gamma)**1.5 > 2 - eps, the latter compared as 4*(1-gamma)**3 >
    (2-eps)**2 (vacuous for eps >= 2)."""
    f_inf, delta, eps = to_frac(f_inf), to_frac(delta), to_frac(eps)
    if delta <= 0:
        raise ValueError("delta must be > 0")
    if eps <= 0:
        raise ValueError("eps must be > 0")
    p = 1
    while True:
        gamma = Fraction(1, 1 << p)
        if (5 * f_inf + 1) * gamma < delta and (
            eps >= 2 or 4 * (1 - gamma) ** 3 > (2 - eps) ** 2
        ):
            return gamma
        p += 1
        if p > 4 * MAX_LEVEL + 64:  # cannot happen for valid inputs
            raise RuntimeError("internal: no admissible gamma found")


def choose_K(gamma, functional_levels) -> int:
    """Smallest K with 2**-K < gamma (strict) and K >= every functional level.

    At such a K every functional is itself a level-K step function, so the
    simple-function approximants coincide with the functionals exactly.
    """
    gamma = to_frac(gamma)
    if not 0 < gamma < 1:
        raise ValueError(f"gamma must be in (0, 1), got {gamma}")
    K = max(functional_levels, default=0)
    while Fraction(1, 1 << K) >= gamma:
        K += 1
    if K + 2 > MAX_LEVEL:
        raise LevelOverflowError(f"split level {K}+2 exceeds cap {MAX_LEVEL}")
    return K


def _mass_pyramid(masses: list[Fraction], top: int) -> list[list[Fraction]]:
    """Masses per level from `top` down to 0; index t holds level top-t."""
    out = [masses]
    cur = masses
    for _ in range(top):
        cur = fold_masses(cur)
        out.append(cur)
    return out


def split_pair(f: DyadicStep, K: int) -> SplitPair:
    """Build (b, c, f1, f2) at level K+2 and verify the split identities.

    Verified exactly for every cell (k, j) with k <= K:
      int f1 = int f2 = int f,  int |f1| = int |f2| = int |f|,
      int |f1 - f2| = 2 int |f|;   plus linf(f_i) <= 4 linf(f).
    """
    if K < 0:
        raise ValueError(f"K must be >= 0, got {K}")
    if K + 2 > MAX_LEVEL:
        raise LevelOverflowError(f"split level {K}+2 exceeds cap {MAX_LEVEL}")
    base = refine(f, K) if f.level <= K else f
    scale = Fraction(1, 1 << base.level)
    pos = [v * scale if v > 0 else Fraction(0) for v in base.values]
    neg = [-v * scale if v < 0 else Fraction(0) for v in base.values]
    for _ in range(base.level - K):
        pos = fold_masses(pos)
        neg = fold_masses(neg)
    b, c = tuple(pos), tuple(neg)

    n = 1 << K
    h = Fraction(1 << (K + 2))
    v1 = [Fraction(0)] * (4 * n)
    v2 = [Fraction(0)] * (4 * n)
    for j in range(n):
        v1[4 * j] = h * b[j]
        v1[4 * j + 1] = -h * c[j]
        v2[4 * j + 2] = h * b[j]
        v2[4 * j + 3] = -h * c[j]
    f1 = DyadicStep(K + 2, tuple(v1))
    f2 = DyadicStep(K + 2, tuple(v2))

    _verify_split(f, K, f1, f2)
    return SplitPair(K, b, c, f1, f2)


def _verify_split(f: DyadicStep, K: int, f1: DyadicStep, f2: DyadicStep) -> None:
    L = max(f.level, K + 2)
    fL, f1L, f2L = refine(f, L), refine(f1, L), refine(f2, L)
    diff = [a - b for a, b in zip(f1L.values, f2L.values)]
    scale = Fraction(1, 1 << L)
    pyr = {
        "f": _mass_pyramid([v * scale for v in fL.values], L),
        "f1": _mass_pyramid([v * scale for v in f1L.values], L),
        "f2": _mass_pyramid([v * scale for v in f2L.values], L),
        "af": _mass_pyramid([abs(v) * scale for v in fL.values], L),
        "af1": _mass_pyramid([abs(v) * scale for v in f1L.values], L),
        "af2": _mass_pyramid([abs(v) * scale for v in f2L.values], L),
        "adiff": _mass_pyramid([abs(v) * scale for v in diff], L),
    }
    for k in range(K + 1):
        t = L - k
        if not (
            pyr["f1"][t] == pyr["f"][t] == pyr["f2"][t]
            and pyr["af1"][t] == pyr["af"][t] == pyr["af2"][t]
            and pyr["adiff"][t] == [2 * m for m in pyr["af"][t]]
        ):
            raise RuntimeError(f"internal: split identity failed at level {k}")
    bound = 4 * norms(f).linf
    if norms(f1).linf > bound or norms(f2).linf > bound:
        raise RuntimeError("internal: linf(f_i) <= 4 linf(f) failed")


def d2p_witness(nbhd: WeakNbhd, eps) -> WitnessReport:
    """Produce g1, g2 in the neighborhood whose exact squared distance
    exceeds (2 - eps)**2, verifying every intermediate identity.

    Raises GapConditionError when 4*(1-gamma)**2*(T(f)**2 - 2**-K) fails to
    clear (2-eps)**2 for the deterministic gamma and K (the caller must move
    the center closer to the unit sphere or relax eps).
    """
    eps = to_frac(eps)
    if eps <= 0:
        raise ValueError("eps must be > 0")
    f = nbhd.center
    q = tnorm_sq(f)
    if q > 1:
        raise ValueError(f"center has tnorm_sq = {q} > 1; not in the unit ball")

    f_inf = norms(f).linf
    gamma = choose_gamma(f_inf, nbhd.delta, eps)
    K = choose_K(gamma, [h.level for h in nbhd.functionals])

    margin = q - Fraction(1, 1 << K)
    guaranteed = 4 * (1 - gamma) ** 2 * margin
    target = (2 - eps) ** 2 if eps < 2 else Fraction(0)
    if margin <= 0:
        raise GapConditionError(
            f"tnorm_sq(f) - 2**-K = {frac_str(margin)} <= 0 "
            f"(gamma={frac_str(gamma)}, K={K}); center too far from the sphere"
        )
    if eps < 2 and guaranteed <= target:
        raise GapConditionError(
            f"4*(1-gamma)**2*(tnorm_sq(f) - 2**-K) = {frac_str(guaranteed)} "
            f"<= (2-eps)**2 = {frac_str(target)} (gamma={frac_str(gamma)}, K={K})"
        )

    sp = split_pair(f, K)  # re-verifies identities (max deviations are 0)
    shrink = 1 - gamma
    g1 = shrink * sp.f1
    g2 = shrink * sp.f2

    checks: dict[str, Check] = {}
    zero = Fraction(0)
    checks["id5"] = _check(zero, "==", zero)
    checks["id6"] = _check(zero, "==", zero)
    checks["id7"] = _check(zero, "==", zero)
    checks["linf4x"] = _check(
        max(norms(sp.f1).linf, norms(sp.f2).linf), "<=", 4 * f_inf
    )
    worst = zero
    for h in nbhd.functionals:
        for g in (g1, g2):
            worst = max(worst, abs(pairing(g - f, h)))
    checks["pairing_l"] = _check(worst, "<", nbhd.delta)
    checks["ball"] = _check(max(tnorm_sq(g1), tnorm_sq(g2)), "<", Fraction(1))
    gap = tnorm_sq(g1 - g2)
    if gap < guaranteed:
        raise RuntimeError("internal: exact gap fell below the guaranteed bound")
    checks["gap"] = _check(gap, ">", target) if eps < 2 else _check(gap, ">=", zero)

    if not all(chk.ok for chk in checks.values()):
        bad = [name for name, chk in checks.items() if not chk.ok]
        raise RuntimeError(f"internal: witness checks failed: {bad}")
    return WitnessReport(
        gamma=gamma,
        K=K,
        pair=sp,
        g1=g1,
        g2=g2,
        checks=checks,
        guaranteed_gap_sq=guaranteed,
        eps=eps,
        delta=nbhd.delta,
    )


# -- near-unit scaling ---------------------------------------------------------


def best_rational_leq_sqrt(x_sq: Fraction, max_den: int) -> Fraction:
    """Largest r = p/q with q <= max_den, r >= 0 and r**2 <= x_sq.

    Stern-Brocot descent with the exact predicate p**2 * den <= q**2 * num;
    never touches floats, works for rational or irrational sqrt(x_sq).
    """
    x_sq = to_frac(x_sq)
    if x_sq < 0:
        raise ValueError("negative square")
    if max_den < 1:
        raise ValueError("max_den must be >= 1")
    num, den = x_sq.numerator, x_sq.denominator

    def le(p: int, q: int) -> bool:  # p/q <= sqrt(num/den)
        return p * p * den <= q * q * num

    def biggest_k(pred, cap: Optional[int]) -> int:
        """Largest k in [0, cap] with pred(k); pred is monotone decreasing."""
        if cap is not None and cap <= 0:
            return 0
        if not pred(1):
            return 0
        k = 1
        while (cap is None or 2 * k <= cap) and pred(2 * k):
            k *= 2
        lo, hi = k, (2 * k if cap is None else min(2 * k, cap))
        while lo < hi:  # invariant: pred(lo); find the last True
            mid = (lo + hi + 1) // 2
            if pred(mid):
                lo = mid
            else:
                hi = mid - 1
        return lo

    a, b = 0, 1  # lower endpoint, always <= sqrt
    c, d = 1, 0  # upper endpoint, always > sqrt
    while True:
        if a * a * den == b * b * num:
            return Fraction(a, b)  # hit sqrt exactly
        k = biggest_k(
            lambda k: le(a + k * c, b + k * d),
            None if d == 0 else (max_den - b) // d,
        )
        if k:
            a, b = a + k * c, b + k * d
        k2 = biggest_k(
            lambda k: not le(c + k * a, d + k * b),
            (max_den - d) // b,
        )
        if k2:
            c, d = c + k2 * a, d + k2 * b
        if not k and not k2:
            return Fraction(a, b)


def near_unit_scale(f: DyadicStep, prec) -> DyadicStep:
    """Scale f to sit just inside the unit sphere of the renormed space.

    Returns r*f where r is the largest rational with denominator <= 1/prec
    and r**2 * tnorm_sq(f) <= 1. For prec small relative to sqrt(tnorm_sq(f))
    this lands in [1 - 3*prec, 1]; pre-normalize big centers (divide by an
    integer) before calling if the bracket matters.
    """
    prec = to_frac(prec)
    if prec <= 0:
        raise ValueError("prec must be > 0")
    q = tnorm_sq(f)
    if q == 0:
        raise ValueError("cannot scale the zero function to the unit sphere")
    max_den = int(1 / prec)
    r = best_rational_leq_sqrt(1 / q, max_den)
    return r * f
