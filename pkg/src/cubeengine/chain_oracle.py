"""Brute-force check of the two-player thresholds on a discrete game grid.

The game state is an integer ``i`` in ``0..n`` (evaluation ``i/n``) driven by
a symmetric +-1 walk absorbed at 0 (loss) and ``n`` (win).  Threshold
policies are evaluated by solving the walk's harmonic equations directly, so
nothing here relies on the closed forms it is used to check.

Value conventions, all per unit of current stake:

* ``level_values[0]``: no doubles left, ``v(i) = 2 i/n - 1``.
* ``level_values[j]`` for ``j >= 1``: value to the player holding the
  exclusive right to the j-th-to-last double (the opponent just doubled).
* ``values``: the top level ``k``, where either player may propose first,
  seen from the reference player.

A raising cube doubles once the doubler's state climbs to the trigger; a
reducing cube reduces once it falls to the trigger.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .regions import STANDARD, CubeParams, Region, classify
from .thresholds import DomainError, general_dk, standard_dk

__all__ = [
    "ChainSpec",
    "PolicyValue",
    "OracleReport",
    "hitting_probs",
    "hitting_prob",
    "policy_value",
    "optimal_thresholds",
    "oracle_report",
]

# Accept/fold and optimizer ties are decided up to this slack.  Solve error is
# ~4e-13 at n = 2000 while neighbouring values differ by >= ~1e-4 for n <= 1e4.
TIE_TOL = 1e-9


def _solve_chain(fixed: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Harmonic extension: ``v_i = (v_{i-1} + v_{i+1})/2`` off the fixed states.

    ``fixed`` marks states whose value is prescribed by ``values``; both end
    states must be fixed.  One banded direct solve over the whole chain.
    """
    size = fixed.size
    if not (fixed[0] and fixed[-1]):
        raise ValueError("both end states of the chain must be fixed")
    ab = np.zeros((3, size))
    ab[1, :] = 1.0
    free = ~fixed
    # row i couples to i-1 (stored in ab[2, i-1]) and i+1 (stored in ab[0, i+1])
    ab[2, :-1] = np.where(free[1:], -0.5, 0.0)
    ab[0, 1:] = np.where(free[:-1], -0.5, 0.0)
    rhs = np.where(fixed, values, 0.0)
    out = solve_banded((1, 1), ab, rhs)
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("non-finite value in chain solve")
    return out


def hitting_probs(n: int) -> np.ndarray:
    """Probability of reaching ``n`` before 0 from every state, by linear solve."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    fixed = np.zeros(n + 1, dtype=bool)
    fixed[[0, n]] = True
    values = np.zeros(n + 1)
    values[n] = 1.0
    return _solve_chain(fixed, values)


def hitting_prob(n: int, i: int) -> float:
    if not 0 <= i <= n:
        raise ValueError(f"state {i} outside 0..{n}")
    return float(hitting_probs(n)[i])


def _direction(params: CubeParams) -> Region:
    region = classify(params)
    if not region.nontrivial:
        raise DomainError(f"no doubling threshold for (x={params.x}, y={params.y}): region {region.value}")
    return region


@dataclass(frozen=True)
class ChainSpec:
    """Grid size, cube and one trigger index per level (level 1 first).

    Level ``j``'s doubler acts at its own state ``triggers[j-1]``; the mirrored
    opponent acts at ``n - triggers[j-1]`` in reference coordinates.
    """

    n: int
    params: CubeParams = STANDARD
    triggers: tuple[int, ...] = ()
    stake: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        object.__setattr__(self, "triggers", tuple(int(t) for t in self.triggers))
        for t in self.triggers:
            if not 0 <= t <= self.n:
                raise ValueError(f"trigger {t} outside 0..{self.n}")
        if self.triggers:
            _direction(self.params)

    @property
    def k(self) -> int:
        return len(self.triggers)


@dataclass(frozen=True)
class PolicyValue:
    values: np.ndarray
    level_values: tuple[np.ndarray, ...]
    start: int
    # top-level trigger sets overlap (both players would act at some state)
    overlap: bool = False

    @property
    def value(self) -> float:
        return float(self.values[self.start])


def _stop_mask(n: int, t: int, raising: bool) -> np.ndarray:
    idx = np.arange(n + 1)
    return idx >= t if raising else idx <= t


def _doubling_payoff(params: CubeParams, lower: np.ndarray):
    """Doubler's payoff for doubling at each of its states, and the acceptor's two options.

    After acceptance the acceptor holds the next right, so its continuation
    is ``y * lower[n - i]``.  Ties between accepting and folding accept.
    """
    x, y = float(params.x), float(params.y)
    accept_value = y * lower[::-1]
    fold_value = -x
    accepts = accept_value >= fold_value - TIE_TOL
    payoff = np.where(accepts, -accept_value, x)
    return payoff, accept_value, accepts


def _owner_values(n: int, params: CubeParams, t: int, lower: np.ndarray, raising: bool) -> np.ndarray:
    payoff, _, _ = _doubling_payoff(params, lower)
    fixed = _stop_mask(n, t, raising)
    values = np.where(fixed, payoff, 0.0)
    if not fixed[0]:
        fixed[0], values[0] = True, -1.0
    if not fixed[n]:
        fixed[n], values[n] = True, 1.0
    return _solve_chain(fixed, values)


def _centered_values(n: int, params: CubeParams, t: int, lower: np.ndarray, raising: bool):
    payoff, _, _ = _doubling_payoff(params, lower)
    mine = _stop_mask(n, t, raising)
    theirs = mine[::-1].copy()
    overlap = bool(np.any(mine & theirs))
    # on overlapping states the reference player acts first
    values = np.where(mine, payoff, np.where(theirs, -payoff[::-1], 0.0))
    fixed = mine | theirs
    if not fixed[0]:
        fixed[0], values[0] = True, -1.0
    if not fixed[n]:
        fixed[n], values[n] = True, 1.0
    return _solve_chain(fixed, values), overlap


def _level_zero(n: int) -> np.ndarray:
    return 2.0 * hitting_probs(n) - 1.0


def policy_value(spec: ChainSpec, start: int) -> PolicyValue:
    """Expected payoff under the mirrored threshold policy in ``spec``.

    Levels are solved bottom-up: level 0 first, then each level's doubling
    payoffs are read off the level below it.
    """
    n = spec.n
    if not 0 <= start <= n:
        raise ValueError(f"start {start} outside 0..{n}")
    levels = [_level_zero(n)]
    overlap = False
    if spec.k == 0:
        top = levels[0]
    else:
        raising = _direction(spec.params) is Region.RAISE_PLUS
        for t in spec.triggers[:-1]:
            levels.append(_owner_values(n, spec.params, t, levels[-1], raising))
        levels.append(_owner_values(n, spec.params, spec.triggers[-1], levels[-1], raising))
        top, overlap = _centered_values(n, spec.params, spec.triggers[-1], levels[-2], raising)
    scale = float(spec.stake)
    return PolicyValue(
        values=top * scale,
        level_values=tuple(v * scale for v in levels),
        start=start,
        overlap=overlap,
    )


@dataclass(frozen=True)
class LevelChoice:
    level: int
    trigger: int
    accept_value: float
    fold_value: float
    # largest change of the acceptor's continuation between neighbouring states
    step_gap: float
    overlap: bool


def _optimize(params: CubeParams, k: int, n: int) -> list[LevelChoice]:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    raising = _direction(params) is Region.RAISE_PLUS
    lower = _level_zero(n)
    choices = []
    for level in range(1, k + 1):
        payoff, accept_value, _ = _doubling_payoff(params, lower)
        best = payoff.max()
        t = int(np.flatnonzero(payoff >= best - TIE_TOL)[0])
        gap = float(np.max(np.abs(np.diff(accept_value))))
        overlap = (n - t >= t) if raising else (t >= n - t)
        choices.append(LevelChoice(level, t, float(accept_value[t]), -float(params.x), gap, overlap))
        lower = _owner_values(n, params, t, lower, raising)
    return choices


def optimal_thresholds(params: CubeParams | None, k: int, n: int) -> list[int]:
    """Trigger index for each level ``1..k``, chosen by scanning every state.

    At each level the doubler's payoff at the moment of doubling is computed
    for all candidate states from the already-optimized level below; the
    smallest index attaining the maximum is kept.  ``params=None`` is the
    standard cube.
    """
    return [c.trigger for c in _optimize(params or STANDARD, k, n)]


@dataclass(frozen=True)
class OracleReport:
    params: CubeParams
    k: int
    grid_n: int
    closed_form: list[float]
    oracle: list[float]
    triggers: list[int]
    max_abs_diff: float
    overlap_levels: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.max_abs_diff <= 1.0 / self.grid_n


def oracle_report(params: CubeParams | None, k: int, n: int) -> OracleReport:
    standard = params is None
    params = params or STANDARD
    choices = _optimize(params, k, n)
    closed = [float(standard_dk(j) if standard else general_dk(params, j)) for j in range(1, k + 1)]
    oracle = [c.trigger / n for c in choices]
    return OracleReport(
        params=params,
        k=k,
        grid_n=n,
        closed_form=closed,
        oracle=oracle,
        triggers=[c.trigger for c in choices],
        max_abs_diff=max(abs(a - b) for a, b in zip(closed, oracle)),
        overlap_levels=[c.level for c in choices if c.overlap],
    )
