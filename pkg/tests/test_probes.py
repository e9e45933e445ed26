from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renorml1 import (
    DyadicStep,
    WeakNbhd,
    midpoint_defect,
    near_unit_scale,
    norms,
    perturbation_l1_chain,
    reflect,
    slice_diameter_lb,
    strong_extreme_failure,
    tnorm_sq,
    weak_smallness,
)
from renorml1.gen import rademacher
from renorml1.probes import slice_csv
from conftest import mk, steps


class TestMidpointDefect:
    def test_examples(self):
        f = mk(2, 1, Fraction(1, 2), -3, 0)
        assert midpoint_defect(f, f) == 0
        assert midpoint_defect(mk(1, 1, 0), mk(1, 0, 1)) == Fraction(1, 28)
        assert midpoint_defect(f, 3 * f) == tnorm_sq(f)

    @given(steps(max_level=2), steps(max_level=2))
    @settings(max_examples=60)
    def test_nonnegative_zero_iff_equal(self, f, g):
        d = midpoint_defect(f, g)
        assert d >= 0
        assert (d == 0) == (f == g)

    @given(steps(max_level=3))
    @settings(max_examples=40)
    def test_reflection_pairs(self, f):
        d = midpoint_defect(f, reflect(f))
        if f == reflect(f):
            assert d == 0
        else:
            assert d > 0


class TestStrongExtremeFailure:
    def test_reference_run(self):
        center = near_unit_scale(mk(0, 1), Fraction(1, 10**4))
        nbhd = WeakNbhd(center, (mk(0, 1),), Fraction(1, 10))
        wit = strong_extreme_failure(nbhd, Fraction(1, 5))
        assert wit.ball_check_sq[0] < 1 and wit.ball_check_sq[1] < 1
        assert tnorm_sq(wit.center + wit.u) == wit.ball_check_sq[0]
        assert tnorm_sq(wit.center - wit.u) == wit.ball_check_sq[1]
        # l1(u) = (1 - gamma) l1(f): the perturbation is not small
        assert wit.l1_of_u == wit.l1_floor
        assert wit.l1_of_u == Fraction(63, 64) * norms(center).l1
        assert wit.l1_of_u > Fraction(9, 10)

    def test_zero_center_propagates(self):
        from renorml1 import GapConditionError

        with pytest.raises(GapConditionError):
            strong_extreme_failure(
                WeakNbhd(DyadicStep.zero(0), (), 1), Fraction(1, 5)
            )

    def test_no_functionals(self):
        center = near_unit_scale(mk(0, 1), Fraction(1, 10**4))
        wit = strong_extreme_failure(WeakNbhd(center, (), 1), Fraction(1, 5))
        assert wit.l1_of_u == (1 - wit.report.gamma) * norms(center).l1
        assert wit.l1_of_u > Fraction(8, 10)


class TestPerturbationChain:
    def test_example(self):
        rep = perturbation_l1_chain(mk(0, 1), mk(2, 4, 0, 0, 0), [(2, 1)])
        assert rep.lhs == Fraction(7, 4)
        assert rep.rhs == Fraction(3, 2)
        assert rep.int_a_abs_g == 1 and rep.int_a_abs_f == Fraction(1, 4)

    def test_zero_g(self):
        f = mk(1, 2, -1)
        rep = perturbation_l1_chain(f, DyadicStep.zero(0), [(1, 2)])
        assert rep.lhs == norms(f).l1
        assert rep.rhs == norms(f).l1 - 2 * rep.int_a_abs_f

    def test_empty_A(self):
        f, g = mk(1, 1, -2), mk(1, 3, 1)
        rep = perturbation_l1_chain(f, g, [])
        assert rep.rhs == norms(f).l1
        assert rep.lhs >= rep.rhs

    def test_overlap_rejected(self):
        with pytest.raises(ValueError, match="overlap"):
            perturbation_l1_chain(mk(0, 1), mk(0, 1), [(1, 1), (2, 2)])

    @given(steps(max_level=3), steps(max_level=3), st.data())
    @settings(max_examples=60)
    def test_random(self, f, g, data):
        k = data.draw(st.integers(min_value=0, max_value=3))
        count = data.draw(st.integers(min_value=0, max_value=1 << k))
        cells = [(k, j) for j in range(1, count + 1)]
        rep = perturbation_l1_chain(f, g, cells)
        assert rep.ok and rep.lhs >= rep.rhs


class TestWeakSmallness:
    def test_examples(self):
        u = mk(1, 1, -1)
        assert weak_smallness(u, 0) == 0
        assert weak_smallness(u, 1) == Fraction(1, 2)

    def test_rademacher(self):
        for n in (3, 5):
            u = rademacher(n)
            assert weak_smallness(u, n - 1) == 0
            assert norms(u).l1 == 1
            assert weak_smallness(u, n) == Fraction(1, 1 << n)

    @given(steps(max_level=3), st.integers(min_value=0, max_value=4))
    @settings(max_examples=40)
    def test_bounded_by_l1(self, u, D):
        assert weak_smallness(u, D) <= norms(u).l1


class TestSliceDiameter:
    def test_schedule(self):
        center = near_unit_scale(mk(0, 1), Fraction(1, 10**4))
        entries = slice_diameter_lb(
            center,
            [mk(0, 1)],
            Fraction(1),
            [Fraction(1, 5), Fraction(1, 10), Fraction(1, 100)],
        )
        gaps = [e.gap_sq for e in entries]
        assert all(e.ok for e in entries)
        assert gaps[0] < gaps[1] < gaps[2] <= 4
        for e in entries:
            assert e.gap_sq > (2 - e.eps) ** 2

    def test_eps_two_trivial(self):
        center = Fraction(1, 2) * near_unit_scale(mk(0, 1), Fraction(1, 100))
        entries = slice_diameter_lb(center, [], Fraction(1), [Fraction(2)])
        assert entries[0].ok and entries[0].gap_sq >= 0

    def test_failed_entry_reported_not_raised(self):
        entries = slice_diameter_lb(
            DyadicStep.zero(0), [], Fraction(1), [Fraction(1, 5)]
        )
        assert not entries[0].ok and entries[0].gap_sq is None
        assert "2**-K" in entries[0].error

    def test_csv_shape(self):
        center = near_unit_scale(mk(0, 1), Fraction(1, 10**4))
        entries = slice_diameter_lb(center, [], Fraction(1), [Fraction(1, 5)])
        text = slice_csv(entries, 6)
        lines = text.strip().split("\n")
        assert lines[0] == "eps,gap_sq,gap_float"
        eps, gap_sq, gap_float = lines[1].split(",")
        assert eps == "1/5"
        assert "/" in gap_sq
        assert Fraction(gap_sq) > Fraction(9, 5) ** 2
        assert gap_float.startswith("1.8")
