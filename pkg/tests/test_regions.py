import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubeengine.regions import CubeParams, Region, boundary_description, classify, trivial_action


@pytest.mark.parametrize(
    "x, y, region",
    [
        (1, 2, Region.RAISE_PLUS),
        (2, F(3, 2), Region.DOUBLE_AT_ONE),
        (-2, 3, Region.NEVER_DOUBLE),
        (F(-1, 2), F(3, 4), Region.REDUCE_MINUS),
        (F(-1, 2), F(3, 10), Region.DOUBLE_AT_ZERO_FOLD),
        (F(1, 2), F(1, 2), Region.DOUBLE_AT_ZERO_ACCEPT),
    ],
)
def test_examples(x, y, region):
    assert classify(CubeParams(x, y)) is region


def test_standard_cube_is_raising():
    assert classify(CubeParams(1, 2)) is Region.RAISE_PLUS
    assert classify(CubeParams(1.0, 2.0)) is Region.RAISE_PLUS


@pytest.mark.parametrize("y", [0, -1, F(-1, 3)])
def test_rejects_nonpositive_y(y):
    with pytest.raises(ValueError):
        CubeParams(1, y)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        CubeParams(bad, 2)
    with pytest.raises(ValueError):
        CubeParams(1, bad)


def test_string_inputs_are_exact():
    p = CubeParams("-1/2", "0.75")
    assert p.x == F(-1, 2) and p.y == F(3, 4)
    assert p.is_exact


@pytest.mark.parametrize(
    "x, y",
    [(0, 2), (0, 10), (F(-1, 2), 1), (F(-1, 10), 1)],
)
def test_unclaimed_lines_are_boundary(x, y):
    p = CubeParams(x, y)
    assert classify(p) is Region.BOUNDARY
    assert boundary_description(p)
    assert trivial_action(Region.BOUNDARY) is None


@pytest.mark.parametrize(
    "x, y, region",
    [
        # dividing lines claimed by the non-strict trivial cases, in case order
        (2, 2, Region.DOUBLE_AT_ONE),
        (1, 1, Region.DOUBLE_AT_ZERO_ACCEPT),
        (0, F(1, 2), Region.DOUBLE_AT_ZERO_ACCEPT),
        (F(-1, 2), F(1, 2), Region.DOUBLE_AT_ZERO_FOLD),
        (-1, 1, Region.DOUBLE_AT_ZERO_FOLD),
        (-2, 2, Region.NEVER_DOUBLE),
    ],
)
def test_lines_claimed_by_trivial_cases(x, y, region):
    assert classify(CubeParams(x, y)) is region


def test_trivial_actions():
    assert trivial_action(Region.DOUBLE_AT_ONE) == "at_one"
    assert trivial_action(Region.DOUBLE_AT_ZERO_ACCEPT) == "at_zero"
    assert trivial_action(Region.DOUBLE_AT_ZERO_FOLD) == "at_zero"
    assert trivial_action(Region.NEVER_DOUBLE) == "never"
    assert trivial_action(Region.RAISE_PLUS) is None


def literal_label(x, y):
    """Independent restatement of the region inequalities."""
    if x >= y and y >= 0 and y > 1:
        return Region.DOUBLE_AT_ONE
    if x >= 0 and y <= 1:
        return Region.DOUBLE_AT_ZERO_ACCEPT
    if x < 0 and (-x > 1 or y > 1):
        return Region.NEVER_DOUBLE
    if -1 <= x and x <= 0 and y <= -x:
        return Region.DOUBLE_AT_ZERO_FOLD
    if 0 < x and x < y and y > 1:
        return Region.RAISE_PLUS
    if 0 < -x and -x < y and 0 < y and y < 1:
        return Region.REDUCE_MINUS
    return Region.BOUNDARY


coords = st.fractions(min_value=-5, max_value=5, max_denominator=12)
positive = st.fractions(min_value=F(1, 12), max_value=5, max_denominator=12)


@given(coords, positive)
def test_membership_matches_inequalities(x, y):
    assert classify(CubeParams(x, y)) is literal_label(x, y)


@given(coords, positive)
def test_exactly_one_label(x, y):
    label = classify(CubeParams(x, y))
    raise_plus = 0 < x < y and y > 1
    reduce_minus = 0 < -x < y < 1
    assert (label is Region.RAISE_PLUS) == raise_plus
    assert (label is Region.REDUCE_MINUS) == reduce_minus
    if label is Region.BOUNDARY:
        assert x == 0 or y == 1
