"""Cube parameters and the (x, y) strategy-region classifier.

An (x, y)-cube multiplies the stake by ``y`` when a double is accepted and
makes the folding player forfeit ``x`` times the current stake.  The standard
doubling cube is (1, 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational

__all__ = [
    "CubeParams",
    "Region",
    "STANDARD",
    "classify",
    "boundary_description",
    "trivial_action",
    "as_number",
]


def as_number(value):
    """Normalize a user-supplied multiplier.

    Integers, Fractions and numeric strings ("3/4", "0.5") become exact
    Fractions; floats stay floats.  Non-finite values are rejected.
    """
    if isinstance(value, bool):
        raise TypeError("multiplier cannot be a bool")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a finite number: {value!r}") from exc
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"multiplier must be finite, got {value}")
    return value


@dataclass(frozen=True)
class CubeParams:
    """Fold multiplier ``x`` (may be negative) and accept multiplier ``y > 0``."""

    x: Fraction | float
    y: Fraction | float

    def __post_init__(self):
        object.__setattr__(self, "x", as_number(self.x))
        object.__setattr__(self, "y", as_number(self.y))
        if not self.y > 0:
            raise ValueError(f"accept multiplier y must be positive, got {self.y}")

    @property
    def is_exact(self) -> bool:
        return isinstance(self.x, Fraction) and isinstance(self.y, Fraction)


STANDARD = CubeParams(1, 2)


class Region(Enum):
    RAISE_PLUS = "R+"
    REDUCE_MINUS = "R-"
    DOUBLE_AT_ONE = "trivial_double_at_one"
    DOUBLE_AT_ZERO_ACCEPT = "trivial_double_at_zero_accept"
    NEVER_DOUBLE = "trivial_never_double"
    DOUBLE_AT_ZERO_FOLD = "trivial_double_at_zero_fold"
    BOUNDARY = "boundary"

    @property
    def nontrivial(self) -> bool:
        return self in (Region.RAISE_PLUS, Region.REDUCE_MINUS)


_TRIVIAL_ACTIONS = {
    Region.DOUBLE_AT_ONE: "at_one",
    Region.DOUBLE_AT_ZERO_ACCEPT: "at_zero",
    Region.DOUBLE_AT_ZERO_FOLD: "at_zero",
    Region.NEVER_DOUBLE: "never",
}


def trivial_action(region: Region) -> str | None:
    return _TRIVIAL_ACTIONS.get(region)


def classify(params: CubeParams) -> Region:
    """Return the strategy region of ``params``.

    The four trivial cases are tested first, in order, using their
    non-strict inequalities; then the two open nontrivial regions.  Whatever
    remains lies on a dividing line that no case claims and is labelled
    ``BOUNDARY``.  Comparisons are exact on the given values.
    """
    x, y = params.x, params.y
    if x >= y >= 0 and y > 1:
        return Region.DOUBLE_AT_ONE
    if x >= 0 and y <= 1:
        return Region.DOUBLE_AT_ZERO_ACCEPT
    if x < 0 and (-x > 1 or y > 1):
        return Region.NEVER_DOUBLE
    if -1 <= x <= 0 and y <= -x:
        return Region.DOUBLE_AT_ZERO_FOLD
    if 0 < x < y and y > 1:
        return Region.RAISE_PLUS
    if 0 < -x < y < 1:
        return Region.REDUCE_MINUS
    return Region.BOUNDARY


def boundary_description(params: CubeParams) -> str | None:
    if classify(params) is not Region.BOUNDARY:
        return None
    if params.x == 0:
        return "on x = 0 with y > 1, between R+ and the never-double region"
    return "on y = 1 with -1 < x < 0, between R- and the never-double region"
