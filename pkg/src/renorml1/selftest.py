"""Seeded invariant batteries behind the `selftest` CLI command.

Each battery draws its own deterministic RNG stream from the master seed,
re-verifies a family of exact invariants, and reports one line. Everything
is an equality or inequality of rationals; there are no tolerances.
"""

from __future__ import annotations

import zlib
from fractions import Fraction

from . import gen
from .dyadic import (
    DyadicIndex,
    DyadicStep,
    decompose,
    dyadic_project,
    integral_over,
    norms,
    pairing,
    refine,
    reflect,
)
from .ell1 import (
    disjoint_spike_family,
    dual_segment,
    ell1_bounds,
    greedy_asymptotic_ell1,
    nonsmooth_pairings,
    octahedral_direction,
)
from .probes import midpoint_defect, perturbation_l1_chain, weak_smallness
from .renorm import (
    check_equivalence,
    partial_below,
    tail_formula,
    tnorm_sq,
    triangle_equality_case,
)
from .witness import d2p_witness, split_pair
from .ured import segment_check, ured_recursion, verify_claim


def _sub_rng(seed: int, tag: str):
    # str hashing is salted per process; crc32 keeps streams reproducible
    return gen.rng_from_seed((seed ^ zlib.crc32(tag.encode())) & 0xFFFFFFFFFFFF)


def _dyadic_core(seed: int, trials: int) -> bool:
    rng = _sub_rng(seed, "dyadic")
    for _ in range(trials):
        f = gen.random_step(rng, max_level=4, max_num=16, max_den=16)
        K2 = min(f.level + rng.randint(0, 2), 6)
        g = refine(f, max(K2, f.level))
        k = rng.randint(0, 5)
        j = rng.randint(1, 1 << k)
        if integral_over(g, (k, j)) != integral_over(f, (k, j)):
            return False
        m = k + rng.randint(1, 2)
        span = 1 << (m - k)
        total = sum(
            (integral_over(f, (m, i)) for i in range((j - 1) * span + 1, j * span + 1)),
            Fraction(0),
        )
        if total != integral_over(f, (k, j)):
            return False
        h = gen.random_step(rng, max_level=3, max_num=8, max_den=8)
        if abs(pairing(f, h)) > norms(f).l1 * norms(h).linf:
            return False
        K = rng.randint(0, 4)
        p = dyadic_project(f, K)
        if dyadic_project(p, K) != p or norms(p).l1 > norms(f).l1:
            return False
        av, pos, neg = decompose(f)
        if pos - neg != f or pos + neg != av:
            return False
        if reflect(reflect(f)) != f:
            return False
    return True


def _renorm_invariants(seed: int, trials: int) -> bool:
    rng = _sub_rng(seed, "renorm")
    for _ in range(trials):
        f = gen.random_step(rng, max_level=4, max_num=16, max_den=16)
        t = tnorm_sq(f)
        for T in (f.level, f.level + 1, f.level + 4):
            if partial_below(f, T) + tail_formula(f, T) != t:
                return False
        if not check_equivalence(f).ok:
            return False
        if tnorm_sq(abs(f)) != t or tnorm_sq(reflect(f)) != t:
            return False
        c = gen.random_fraction(rng, 8, 8)
        if tnorm_sq(c * f) != c * c * t:
            return False
        if tnorm_sq(refine(f, min(f.level + 2, 6))) != t:
            return False
    return True


def _strict_convexity(seed: int, trials: int) -> bool:
    rng = _sub_rng(seed, "strict")
    for _ in range(trials):
        f = gen.random_step(rng, max_level=3, max_num=8, max_den=8)
        g = gen.random_step(rng, max_level=3, max_num=8, max_den=8)
        case = triangle_equality_case(f, g)
        # independent oracle: T(f+g) = T(f)+T(g)  <=>  D >= 0 and D^2 = 4 T(f)T(g)
        D = tnorm_sq(f + g) - tnorm_sq(f) - tnorm_sq(g)
        equality = D >= 0 and D * D == 4 * tnorm_sq(f) * tnorm_sq(g)
        expected = equality and not (g.is_zero() and not f.is_zero())
        if case.is_degenerate != expected:
            return False
        if midpoint_defect(f, g) < 0 or midpoint_defect(f, f) != 0:
            return False
        t = abs(gen.random_fraction(rng, 8, 8))
        if not triangle_equality_case(t * g, g).is_degenerate and not g.is_zero():
            return False
    return True


def _split_identities(seed: int, trials: int) -> bool:
    import math

    rng = _sub_rng(seed, "split")
    for _ in range(trials):
        f = gen.random_step(rng, max_level=3, max_num=8, max_den=8)
        K = rng.randint(0, 4)
        sp = split_pair(f, K)  # raises on any identity failure
        if norms(sp.f1).l1 != norms(f).l1:
            return False
        for j in range(1, (1 << K) + 1):
            cell = DyadicIndex(K, j)
            if integral_over(sp.f1 - f, cell) != 0 or integral_over(sp.f2 - f, cell) != 0:
                return False
        # the tail bounds assume l1(f) <= 1: rescale into the ball first
        l1 = norms(f).l1
        fb = f * Fraction(1, math.ceil(l1)) if l1 > 1 else f
        spb = split_pair(fb, K)
        if tnorm_sq(spb.f1) > tnorm_sq(fb) + Fraction(1, 1 << K):
            return False
        if tnorm_sq(spb.f1 - spb.f2) < 4 * (tnorm_sq(fb) - Fraction(1, 1 << K)):
            return False
    return True


def _witness_runs(seed: int, trials: int) -> bool:
    rng = _sub_rng(seed, "witness")
    for _ in range(max(2, trials // 5)):
        nbhd = gen.random_weak_nbhd(rng)
        eps = Fraction(1, 10)
        rep = d2p_witness(nbhd, eps)
        if not all(ch.ok for ch in rep.checks.values()):
            return False
        if tnorm_sq(rep.g1) >= 1 or tnorm_sq(rep.g2) >= 1:
            return False
        if tnorm_sq(rep.g1 - rep.g2) <= (2 - eps) ** 2:
            return False
        if not (nbhd.contains(rep.g1) and nbhd.contains(rep.g2)):
            return False
    return True


def _chain_and_smallness(seed: int, trials: int) -> bool:
    rng = _sub_rng(seed, "chain")
    for _ in range(trials):
        f = gen.random_step(rng, max_level=4, max_num=8, max_den=8)
        g = gen.random_step(rng, max_level=4, max_num=8, max_den=8)
        A = gen.random_disjoint_indices(rng, rng.randint(0, 4))
        rep = perturbation_l1_chain(f, g, A)
        if not rep.ok:
            return False
        D = rng.randint(0, 4)
        if weak_smallness(f, D) > norms(f).l1:
            return False
    rad = gen.rademacher(5)
    return weak_smallness(rad, 4) == 0 and norms(rad).l1 == 1


def _octahedral(seed: int, trials: int) -> bool:
    rng = _sub_rng(seed, "oct")
    for _ in range(max(3, trials // 3)):
        E = [
            gen.random_step(rng, max_level=3, max_num=8, max_den=8)
            for _ in range(rng.randint(1, 3))
        ]
        eps = Fraction(1, 2 ** rng.randint(1, 3))
        y = octahedral_direction(E, eps)
        K = y.level
        for _ in range(10):
            coeffs = [gen.random_fraction(rng, 4, 4) for _ in E]
            x = DyadicStep.zero()
            for cf, e in zip(coeffs, E):
                x = x + cf * e
            l1x = norms(x).l1
            v1 = refine(x, K).values[0]
            for alpha in (Fraction(0), -v1 / (1 << K)):
                lhs = norms(x + alpha * y).l1
                if lhs < (1 - eps) * (l1x + abs(alpha)):
                    return False
    return True


def _ell1_families(seed: int, trials: int) -> bool:
    rng = _sub_rng(seed, "ell1")
    fam = greedy_asymptotic_ell1([Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)], 3)
    for _ in range(trials):
        alphas = [gen.random_fraction(rng, 8, 8) for _ in range(3)]
        if not ell1_bounds(fam, alphas).ok:
            return False
    deltas = sorted(
        (Fraction(rng.randint(1, 9), 10) for _ in range(4)), reverse=True
    )
    disj = disjoint_spike_family(deltas, 4, 3)
    for _ in range(trials):
        alphas = [gen.random_fraction(rng, 8, 8) for _ in range(4)]
        b = ell1_bounds(disj, alphas)
        if b.value != b.lower:
            return False
    pair = dual_segment(disj)
    nonsmooth_pairings(disj, pair)  # raises on pattern mismatch
    return True


def _ured(seed: int, trials: int) -> bool:
    eps = [Fraction(1, 2**n) for n in range(1, 7)]
    run = ured_recursion(Fraction(1, 2), eps, 6)
    verify_claim(run)
    segment_check(run, [Fraction(0), Fraction(1, 2), Fraction(1)], 6)
    return True


BATTERIES = [
    ("dyadic-core", _dyadic_core),
    ("renorm-invariants", _renorm_invariants),
    ("strict-convexity", _strict_convexity),
    ("split-identities", _split_identities),
    ("witness-runs", _witness_runs),
    ("chain-and-smallness", _chain_and_smallness),
    ("octahedral-oracle", _octahedral),
    ("ell1-families", _ell1_families),
    ("ured-recursion", _ured),
]


def run_selftest(seed: int, trials: int = 25) -> tuple[bool, list[str]]:
    lines = []
    all_ok = True
    for name, battery in BATTERIES:
        ok = battery(seed, trials)
        all_ok = all_ok and ok
        lines.append(f"{name}: {'pass' if ok else 'FAIL'}")
    lines.append(f"selftest: {'pass' if all_ok else 'FAIL'} (seed={seed}, trials={trials})")
    return all_ok, lines
