from fractions import Fraction

import pytest
from hypothesis import strategies as st

from renorml1 import DyadicStep


def mk(level, *vals) -> DyadicStep:
    return DyadicStep(level, tuple(Fraction(v) for v in vals))


small_fractions = st.fractions(
    min_value=Fraction(-8), max_value=Fraction(8), max_denominator=16
)


@st.composite
def steps(draw, max_level=3, fractions=small_fractions):
    level = draw(st.integers(min_value=0, max_value=max_level))
    vals = draw(
        st.lists(fractions, min_size=1 << level, max_size=1 << level)
    )
    return DyadicStep(level, tuple(vals))


@pytest.fixture
def const_one():
    return DyadicStep.constant(1)
