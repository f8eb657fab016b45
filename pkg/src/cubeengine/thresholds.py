"""Optimal doubling states ``d_k`` and acceptance thresholds ``a_k = 1 - d_k``.

``k`` counts the doubles still available, so ``d_k`` is the state at which
to propose the k-th-to-last double.  Closed forms and recurrences share no
code: the recurrences iterate the indifference equations directly, and the
tests compare the two routes.

Arithmetic follows the inputs: exact ``Fraction`` parameters give exact
results, float parameters give floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .regions import STANDARD, CubeParams, Region, classify

__all__ = [
    "INF",
    "DomainError",
    "ThresholdSchedule",
    "Grid",
    "standard_dk",
    "general_dk",
    "recurrence_schedule",
    "limit_threshold",
    "single_double_point",
    "never_double_margin",
    "margin_identity_rhs",
    "error_ratio",
    "figure_series",
]

INF = math.inf
_STANDARD_LIMIT = Fraction(4, 5)


class DomainError(ValueError):
    """Raised when thresholds are requested outside the nontrivial regions."""


def _check_k(k) -> int:
    if isinstance(k, bool) or not isinstance(k, int):
        raise TypeError(f"k must be an integer, got {k!r}")
    if k < 1:
        raise ValueError(f"k must be >= 1 (d_0 = 1 is only a recurrence seed), got {k}")
    return k


def _nontrivial(params: CubeParams) -> Region:
    region = classify(params)
    if not region.nontrivial:
        raise DomainError(
            f"no threshold schedule for (x={params.x}, y={params.y}): region {region.value}"
        )
    return region


def standard_dk(k: int) -> Fraction:
    """``4/5 + (1/5)(-1/4)^k`` for the standard cube."""
    _check_k(k)
    return _STANDARD_LIMIT + Fraction(1, 5) * Fraction(-1, 4) ** k


def _closed_form_terms(params: CubeParams, region: Region):
    """(limit, coefficient, base) with ``d_k = limit + coefficient * base**k``."""
    x, y = params.x, params.y
    if region is Region.RAISE_PLUS:
        den = 2 * y + x * y - x
        return (
            y * (x + 1) / den,
            x * (x + 1) * (y - 1) / (2 * den),
            -(y - x) / (y * (x + 1)),
        )
    den = 2 * y - x * y + x
    return (
        (y + x) / den,
        (-x) * (1 - x) * (1 - y) / (2 * den),
        -(y + x) / (y * (1 - x)),
    )


def general_dk(params: CubeParams, k: int):
    """Closed-form doubling state for a raising (R+) or reducing (R-) cube."""
    _check_k(k)
    region = _nontrivial(params)
    limit, coef, base = _closed_form_terms(params, region)
    return limit + coef * base**k


def single_double_point(params: CubeParams):
    """State at which the opponent is indifferent when a single double remains."""
    _nontrivial(params)
    half = Fraction(1, 2) if params.is_exact else 0.5
    return half + params.x / (2 * params.y)


def limit_threshold(params: CubeParams | None = None):
    """Fixed point of the recurrence, i.e. the threshold with unlimited doubles.

    ``None`` means the standard cube.
    """
    if params is None:
        return _STANDARD_LIMIT
    region = _nontrivial(params)
    x, y = params.x, params.y
    if region is Region.RAISE_PLUS:
        return y * (1 + x) / (2 * y + y * x - x)
    return (y + x) / (2 * y - y * x + x)


def error_ratio(params: CubeParams):
    """Signed factor relating successive distances ``d_k - limit``."""
    region = _nontrivial(params)
    return _closed_form_terms(params, region)[2]


@dataclass(frozen=True)
class ThresholdSchedule:
    params: CubeParams
    k_max: int
    d: tuple
    a: tuple
    limit: object
    region: Region

    def rows(self):
        return [(k, self.d[k - 1], self.a[k - 1]) for k in range(1, self.k_max + 1)]


def recurrence_schedule(params: CubeParams | None, k_max: int) -> ThresholdSchedule:
    """Fill ``d_1..d_kmax`` by iterating the indifference recurrence.

    ``params=None`` is the standard cube, iterated as ``d_k = 1 - d_{k-1}/4``
    from the seed ``d_0 = 1``.  Raising and reducing cubes start from the
    single-double point and iterate their own recurrences.
    """
    _check_k(k_max)
    if params is None:
        d, prev = [], Fraction(1)
        for _ in range(k_max):
            prev = 1 - prev / 4
            d.append(prev)
        params, region, limit = STANDARD, Region.RAISE_PLUS, _STANDARD_LIMIT
    else:
        region = _nontrivial(params)
        x, y = params.x, params.y
        exact = params.is_exact
        prev = (Fraction(1, 2) if exact else 0.5) + x / (2 * y)
        d = [prev]
        for _ in range(k_max - 1):
            if region is Region.RAISE_PLUS:
                prev = 1 - prev * (y - x) / (y * (x + 1))
            else:
                prev = (1 - prev) * (y + x) / (y * (1 - x))
            d.append(prev)
        limit = limit_threshold(params)
    return ThresholdSchedule(
        params=params,
        k_max=k_max,
        d=tuple(d),
        a=tuple(1 - v for v in d),
        limit=limit,
        region=region,
    )


def never_double_margin(params: CubeParams, k: int):
    """``(1 + x)/2 - d_k``: positive when doubling at ``d_k`` beats never doubling."""
    half = Fraction(1, 2) if params.is_exact else 0.5
    return (1 + params.x) * half - general_dk(params, k)


def margin_identity_rhs(params: CubeParams):
    """Factored form of the k = 2 margin, evaluated without any ``d_k``."""
    region = _nontrivial(params)
    x, y = params.x, params.y
    if region is Region.RAISE_PLUS:
        return x**2 * (y**2 - 1) / (2 * y**2 * (x + 1))
    return x**2 * (1 - y**2) / (2 * y**2 * (1 - x))


# --- figure data -----------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    x_min: Fraction
    x_max: Fraction
    y_min: Fraction
    y_max: Fraction
    step: Fraction

    def __post_init__(self):
        for name in ("x_min", "x_max", "y_min", "y_max", "step"):
            value = getattr(self, name)
            if isinstance(value, str):
                value = value.strip()
            object.__setattr__(self, name, Fraction(value))
        if self.step <= 0:
            raise ValueError(f"grid step must be positive, got {self.step}")
        if self.x_max < self.x_min or self.y_max < self.y_min:
            raise ValueError("empty grid: max below min")

    @classmethod
    def parse(cls, text: str) -> Grid:
        parts = text.split(":")
        if len(parts) != 5:
            raise ValueError(f"grid must be xmin:xmax:ymin:ymax:step, got {text!r}")
        return cls(*parts)

    @staticmethod
    def _axis(lo, hi, step):
        count = int((hi - lo) // step) + 1
        return [lo + i * step for i in range(count)]

    def xs(self):
        return self._axis(self.x_min, self.x_max, self.step)

    def ys(self):
        return self._axis(self.y_min, self.y_max, self.step)


FIG1_HEADER = ("k", "d", "log_err")
CONTOUR_HEADER = ("x", "y", "d")


def _log_abs_fraction(q: Fraction) -> float:
    q = abs(q)
    return math.log(q.numerator) - math.log(q.denominator)


def figure_series(series: str, k, grid: Grid | None = None):
    """Rows for the threshold plots.

    ``fig1``: ``(k, d_k, log|d_k - 4/5|)`` for ``k = 1..k``.
    ``contour_plus`` / ``contour_minus``: ``(x, y, d_k)`` over the grid,
    x-major then y ascending, keeping only points of R+ / R- respectively.
    ``k = INF`` selects the limiting threshold.
    """
    if series == "fig1":
        if k == INF:
            raise ValueError("fig1 needs a finite k")
        _check_k(k)
        rows = []
        for j in range(1, k + 1):
            d = standard_dk(j)
            rows.append((j, float(d), _log_abs_fraction(d - _STANDARD_LIMIT)))
        return rows
    if series not in ("contour_plus", "contour_minus"):
        raise ValueError(f"unknown series {series!r}")
    if grid is None:
        raise ValueError(f"{series} needs a grid")
    if k != INF:
        _check_k(k)
    wanted = Region.RAISE_PLUS if series == "contour_plus" else Region.REDUCE_MINUS
    rows = []
    for x in grid.xs():
        for y in grid.ys():
            if y <= 0:
                continue
            params = CubeParams(x, y)
            if classify(params) is not wanted:
                continue
            value = limit_threshold(params) if k == INF else general_dk(params, k)
            rows.append((float(x), float(y), float(value)))
    return rows
