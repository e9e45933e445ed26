import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renorml1 import (
    DyadicStep,
    GapConditionError,
    WeakNbhd,
    best_rational_leq_sqrt,
    choose_K,
    choose_gamma,
    d2p_witness,
    near_unit_scale,
    norms,
    pairing,
    split_pair,
    tnorm_sq,
)
from renorml1.dyadic import DyadicIndex, indicator, integral_over
from conftest import mk, steps


class TestChooseGamma:
    def test_examples(self):
        assert choose_gamma(1, Fraction(1, 10), Fraction(1, 5)) == Fraction(1, 64)
        assert choose_gamma(1, 2, 2) == Fraction(1, 4)
        assert choose_gamma(0, 1, 2) == Fraction(1, 2)

    def test_both_conditions_hold_and_gamma_is_maximal(self):
        f_inf, delta, eps = Fraction(3, 2), Fraction(1, 7), Fraction(1, 3)
        g = choose_gamma(f_inf, delta, eps)
        assert (5 * f_inf + 1) * g < delta and 4 * (1 - g) ** 3 > (2 - eps) ** 2
        bigger = 2 * g
        assert (5 * f_inf + 1) * bigger >= delta or 4 * (1 - bigger) ** 3 <= (
            2 - eps
        ) ** 2

    def test_validation(self):
        with pytest.raises(ValueError):
            choose_gamma(1, 0, 1)
        with pytest.raises(ValueError):
            choose_gamma(1, 1, 0)


class TestChooseK:
    def test_examples(self):
        assert choose_K(Fraction(1, 64), [3, 1]) == 7
        assert choose_K(Fraction(1, 2), [0]) == 2
        assert choose_K(Fraction(1, 4), [5]) == 5

    def test_strictness(self):
        K = choose_K(Fraction(1, 64), [])
        assert Fraction(1, 1 << K) < Fraction(1, 64) <= Fraction(1, 1 << (K - 1))


class TestSplitPair:
    def test_constant(self):
        sp = split_pair(mk(0, 1), 0)
        assert sp.f1 == mk(2, 4, 0, 0, 0)
        assert sp.f2 == mk(2, 0, 0, 4, 0)
        assert sp.b == (1,) and sp.c == (0,)

    def test_signed(self):
        sp = split_pair(mk(1, 1, -1), 1)
        assert sp.f1 == mk(3, 4, 0, 0, 0, 0, -4, 0, 0)
        assert sp.f2 == mk(3, 0, 0, 4, 0, 0, 0, 0, -4)
        assert sp.b == (Fraction(1, 2), 0)
        assert sp.c == (0, Fraction(1, 2))

    def test_zero(self):
        sp = split_pair(DyadicStep.zero(1), 2)
        assert sp.f1.is_zero() and sp.f2.is_zero()

    @given(steps(max_level=3), st.integers(min_value=0, max_value=4))
    @settings(max_examples=50)
    def test_identities_every_cell(self, f, K):
        sp = split_pair(f, K)  # internal verification re-runs (5)-(7)
        af = abs(f)
        for k in range(K + 1):
            for j in range(1, (1 << k) + 1):
                cell = (k, j)
                assert integral_over(sp.f1, cell) == integral_over(f, cell)
                assert integral_over(sp.f2, cell) == integral_over(f, cell)
                assert integral_over(abs(sp.f1), cell) == integral_over(af, cell)
                assert integral_over(abs(sp.f2), cell) == integral_over(af, cell)
                assert integral_over(abs(sp.f1 - sp.f2), cell) == 2 * integral_over(af, cell)
        assert norms(sp.f1).linf <= 4 * norms(f).linf
        assert norms(sp.f2).linf <= 4 * norms(f).linf
        assert norms(sp.f1).l1 == norms(f).l1 == norms(sp.f2).l1

    @given(steps(max_level=2), st.integers(min_value=0, max_value=3))
    @settings(max_examples=40)
    def test_pairing_with_level_K_indicators_vanishes(self, f, K):
        sp = split_pair(f, K)
        for j in range(1, (1 << K) + 1):
            ind = indicator(DyadicIndex(K, j))
            assert pairing(sp.f1 - f, ind) == 0
            assert pairing(sp.f2 - f, ind) == 0

    @given(steps(max_level=2), st.integers(min_value=0, max_value=3))
    @settings(max_examples=40)
    def test_tail_bounds_inside_ball(self, f, K):
        l1 = norms(f).l1
        if l1 > 1:
            f = f * Fraction(1, math.ceil(l1))
        sp = split_pair(f, K)
        two_K = Fraction(1, 1 << K)
        assert tnorm_sq(sp.f1) <= tnorm_sq(f) + two_K
        assert tnorm_sq(sp.f2) <= tnorm_sq(f) + two_K
        assert tnorm_sq(sp.f1 - sp.f2) >= 4 * (tnorm_sq(f) - two_K)


class TestNearUnitScale:
    def test_perfect_square_hits_exactly(self):
        # tnorm_sq of this vector is (49/32)^2; scaled by 16/49 it is exactly 1/4
        f = Fraction(16, 49) * mk(3, 0, 0, 0, 1, 1, 4, 1, 4)
        assert tnorm_sq(f) == Fraction(1, 4)
        scaled = near_unit_scale(f, Fraction(1, 100))
        assert scaled == 2 * f
        assert tnorm_sq(scaled) == 1

    def test_bracket(self):
        prec = Fraction(1, 10**4)
        for f in [mk(0, 1), mk(1, Fraction(1, 3), Fraction(-2, 5)), mk(2, 1, 0, 0, 1)]:
            g = near_unit_scale(f, prec)
            q = tnorm_sq(g)
            assert 1 - 3 * prec <= q <= 1

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            near_unit_scale(DyadicStep.zero(0), Fraction(1, 100))


class TestBestRationalLeqSqrt:
    @given(
        st.fractions(min_value=0, max_value=9, max_denominator=50),
        st.integers(min_value=1, max_value=40),
    )
    @settings(max_examples=80)
    def test_matches_brute_force(self, x_sq, N):
        got = best_rational_leq_sqrt(x_sq, N)
        assert got.denominator <= N and got * got <= x_sq
        best = Fraction(0)
        for q in range(1, N + 1):
            # largest p with (p/q)^2 <= x_sq
            p = math.isqrt(x_sq.numerator * q * q // x_sq.denominator)
            while Fraction(p + 1, q) ** 2 <= x_sq:
                p += 1
            best = max(best, Fraction(p, q))
        assert got == best

    def test_exact_square(self):
        assert best_rational_leq_sqrt(Fraction(4), 10) == 2
        assert best_rational_leq_sqrt(Fraction(9, 4), 10) == Fraction(3, 2)


class TestWeakNbhd:
    def test_functional_bound_enforced(self):
        with pytest.raises(ValueError):
            WeakNbhd(mk(0, 0), (mk(0, 2),), Fraction(1, 2))
        with pytest.raises(ValueError):
            WeakNbhd(mk(0, 0), (), Fraction(0))

    def test_membership(self):
        nb = WeakNbhd(mk(0, 0), (mk(0, 1),), Fraction(1, 2))
        assert nb.contains(mk(0, Fraction(1, 4)))
        assert not nb.contains(mk(0, 1))


class TestWitness:
    def canonical_nbhd(self, delta=Fraction(1, 10)):
        center = near_unit_scale(mk(0, 1), Fraction(1, 10**4))
        return WeakNbhd(center, (mk(0, 1),), delta), center

    def test_reference_run(self):
        nbhd, center = self.canonical_nbhd()
        rep = d2p_witness(nbhd, Fraction(1, 5))
        assert rep.gamma == Fraction(1, 64)
        assert rep.K == 7
        r = center.values[0]
        assert rep.checks["pairing_l"].lhs == rep.gamma * r
        assert rep.checks["pairing_l"].lhs < Fraction(1, 10)
        assert rep.gap_sq > Fraction(81, 25)
        assert rep.gap_sq >= rep.guaranteed_gap_sq
        assert all(ch.ok for ch in rep.checks.values())
        assert tnorm_sq(rep.g1) < 1 and tnorm_sq(rep.g2) < 1
        assert nbhd.contains(rep.g1) and nbhd.contains(rep.g2)
        assert rep.guaranteed_gap_sq == 4 * (1 - rep.gamma) ** 2 * (
            tnorm_sq(center) - Fraction(1, 1 << rep.K)
        )

    def test_no_functionals(self):
        center = near_unit_scale(mk(0, 1), Fraction(1, 10**4))
        rep = d2p_witness(WeakNbhd(center, (), Fraction(1, 10)), Fraction(1, 5))
        assert rep.gap_sq > Fraction(81, 25)

    def test_zero_center_fails_gap_condition(self):
        with pytest.raises(GapConditionError):
            d2p_witness(WeakNbhd(DyadicStep.zero(0), (), 1), Fraction(1, 5))

    def test_center_outside_ball_rejected(self):
        with pytest.raises(ValueError, match="unit ball"):
            d2p_witness(WeakNbhd(mk(0, 1), (), 1), Fraction(1, 5))

    def test_eps_at_least_two_needs_no_gap(self):
        center = Fraction(1, 2) * near_unit_scale(mk(0, 1), Fraction(1, 100))
        rep = d2p_witness(WeakNbhd(center, (), 1), Fraction(2))
        assert rep.checks["gap"].ok

    def test_report_json_shape(self):
        nbhd, _ = self.canonical_nbhd()
        obj = d2p_witness(nbhd, Fraction(1, 5)).to_json()
        assert set(obj["checks"]) == {
            "id5", "id6", "id7", "linf4x", "pairing_l", "ball", "gap",
        }
        for chk in obj["checks"].values():
            assert set(chk) == {"lhs", "rhs", "ok"}
            assert chk["ok"] is True
