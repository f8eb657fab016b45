"""Doubling rules for the three-player triangle game.

The stake is what each loser pays the winner, so a winner collects twice the
stake.  An accepted double doubles the stake for everyone; the player who
doubled may not double again until someone else has.

Offer predicates:

* one-double rule (``q_offer=None``): offer when both opponents' evaluations
  are at most ``q_fold`` (1/6 by default); opponents fold below ``q_fold``.
* threshold rule: offer when one's own evaluation exceeds ``q_offer``;
  opponents fold below ``q_fold``.

Offers are only made while the walk is strictly inside the triangle.  Once a
player has been knocked out to an edge the remaining two play the edge walk
out at the stake then in force.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial

import numpy as np

from .sim_core import RngStream, run_blocks
from .triangle_walk import (
    PLAYERS,
    DrawSource,
    TriEvaluation,
    TriLattice,
    TriPoint,
    exact_evaluation,
    step,
    win_counts,
)

__all__ = [
    "ONE_DOUBLE_FOLD",
    "OneDoubleThresholds",
    "TriDoublingConfig",
    "DoubleEvent",
    "TriGameResult",
    "one_double_thresholds",
    "accept_payoff",
    "should_double",
    "evaluation_table",
    "simulate_doubling_game",
    "run_games",
    "indifference_scan",
]

ONE_DOUBLE_FOLD = Fraction(1, 6)
STEP_CAP = 10**8
ACCEPT_RULES = ("all", "any")


@dataclass(frozen=True)
class OneDoubleThresholds:
    fold_below: Fraction
    offer_when_both_opponents_at_or_below: Fraction


def one_double_thresholds() -> OneDoubleThresholds:
    return OneDoubleThresholds(ONE_DOUBLE_FOLD, ONE_DOUBLE_FOLD)


def accept_payoff(y):
    """Expected payoff for accepting the only double at evaluation ``y``.

    The acceptor then wins twice the doubled stake (4) or pays it (-2).
    """
    return 4 * y - 2 * (1 - y)


@dataclass(frozen=True)
class TriDoublingConfig:
    lattice: TriLattice
    start: TriPoint
    q_offer: float | Fraction | None = None
    q_fold: float | Fraction = ONE_DOUBLE_FOLD
    accept_rule: str = "all"
    max_doubles: int | None = 1
    # 0 selects the exact evaluation table; otherwise nested Monte Carlo trials
    mc_trials: int = 0

    def __post_init__(self):
        object.__setattr__(self, "start", self.lattice.check(self.start))
        if self.accept_rule not in ACCEPT_RULES:
            raise ValueError(f"accept_rule must be one of {ACCEPT_RULES}, got {self.accept_rule!r}")
        if self.max_doubles is not None and self.max_doubles < 0:
            raise ValueError("max_doubles must be >= 0")
        if self.mc_trials < 0:
            raise ValueError("mc_trials must be >= 0")

    @property
    def warnings(self) -> list[str]:
        out = []
        if self.q_offer is not None and not 0 <= self.q_fold <= self.q_offer <= 1:
            out.append("expected 0 <= q_fold <= q_offer <= 1")
        return out


def should_double(evals: TriEvaluation, player: str, last_doubler: str | None, config: TriDoublingConfig | None = None) -> bool:
    if player == last_doubler:
        return False
    values = dict(zip(PLAYERS, evals.as_tuple()))
    own = values.pop(player)
    if config is None or config.q_offer is None:
        q_fold = ONE_DOUBLE_FOLD if config is None else config.q_fold
        return all(v <= q_fold for v in values.values())
    return own > config.q_offer


def evaluation_table(lattice: TriLattice) -> dict[TriPoint, TriEvaluation]:
    """Exact win probabilities as Fractions ``(a/n, b/n, c/n)``.

    The lattice solve is run first and must agree to 1e-9; the rational
    table is what the game compares against thresholds.
    """
    solved = exact_evaluation(lattice)
    n = lattice.n
    table = {}
    for p, ev in solved.items():
        exact = tuple(Fraction(v, n) for v in p)
        if max(abs(float(e) - s) for e, s in zip(exact, ev.as_tuple())) > 1e-9:
            raise ArithmeticError(f"lattice solve disagrees with coordinates at {p}")
        table[p] = TriEvaluation(*exact)
    return table


@dataclass(frozen=True)
class DoubleEvent:
    step: int
    doubler: str
    point: TriPoint
    accepted_by: tuple[str, ...]
    rejected_by: tuple[str, ...] = ()


@dataclass
class TriGameResult:
    winner: str
    stake: int
    payoffs: tuple[int, int, int]
    doubles: list[DoubleEvent] = field(default_factory=list)
    folded: bool = False
    steps: int = 0
    # players who paid out on rejecting under the any-accept rule
    ejected: tuple[str, ...] = ()

    @property
    def accepted_doubles(self) -> int:
        return self.stake.bit_length() - 1

    def summary(self) -> dict:
        return {
            "winner": self.winner,
            "stake": self.stake,
            "payoffs": list(self.payoffs),
            "folded": self.folded,
            "steps": self.steps,
            "ejected": list(self.ejected),
            "doubles": [
                {
                    "step": d.step,
                    "doubler": d.doubler,
                    "point": list(d.point),
                    "accepted_by": list(d.accepted_by),
                    "rejected_by": list(d.rejected_by),
                }
                for d in self.doubles
            ],
        }


def _project(n: int, p: TriPoint, dropped: int) -> TriPoint:
    """Move ``p`` onto the edge opposite ``dropped``, keeping the others' ratio."""
    i, j = [k for k in range(3) if k != dropped]
    total = p[i] + p[j]
    q = [0, 0, 0]
    q[i] = (2 * p[i] * n + total) // (2 * total)
    q[j] = n - q[i]
    return TriPoint(*q)


def simulate_doubling_game(config: TriDoublingConfig, seed: int, replication: int = 0, table=None) -> TriGameResult:
    """Play one game; the walk consumes the same draws as ``simulate_round``."""
    lattice, n = config.lattice, config.lattice.n
    stream = RngStream(seed, replication)
    draws = DrawSource(stream.generator())
    if config.mc_trials == 0 and table is None:
        table = evaluation_table(lattice)

    def evaluate(p, k):
        if config.mc_trials == 0:
            return table[p]
        key = (stream.stream_id, *stream.subkey, k)
        counts = win_counts(lattice, p, config.mc_trials, seed, key=key)
        return TriEvaluation(*(Fraction(c, config.mc_trials) for c in counts))

    pos = config.start
    stake = 1
    last = None
    accepted = 0
    payoffs = [0, 0, 0]
    doubles: list[DoubleEvent] = []
    ejected: list[str] = []
    k = 0
    while not lattice.is_vertex(pos):
        may_offer = config.max_doubles is None or accepted < config.max_doubles
        if may_offer and min(pos) > 0:
            evals = evaluate(pos, k)
            values = dict(zip(PLAYERS, evals.as_tuple()))
            for player in PLAYERS:
                if not should_double(evals, player, last, config):
                    continue
                others = [o for o in PLAYERS if o != player]
                rejecting = tuple(o for o in others if values[o] < config.q_fold)
                accepting = tuple(o for o in others if o not in rejecting)
                o_idx = PLAYERS.index(player)
                if rejecting and (config.accept_rule == "all" or not accepting):
                    doubles.append(DoubleEvent(k, player, pos, accepting, rejecting))
                    for o in others:
                        payoffs[PLAYERS.index(o)] -= stake
                    payoffs[o_idx] += 2 * stake
                    return TriGameResult(player, stake, tuple(payoffs), doubles, True, k, tuple(ejected))
                doubles.append(DoubleEvent(k, player, pos, accepting, rejecting))
                for r in rejecting:
                    payoffs[PLAYERS.index(r)] -= stake
                    payoffs[o_idx] += stake
                    ejected.append(r)
                    pos = _project(n, pos, PLAYERS.index(r))
                stake *= 2
                accepted += 1
                last = player
                break
            if lattice.is_vertex(pos):
                break
        pos = step(lattice, pos, draws.next())
        k += 1
        if k > STEP_CAP:
            raise RuntimeError(f"game exceeded {STEP_CAP} steps")
    winner = PLAYERS[int(np.argmax(pos))]
    w_idx = PLAYERS.index(winner)
    for idx, player in enumerate(PLAYERS):
        if idx != w_idx and player not in ejected:
            payoffs[idx] -= stake
            payoffs[w_idx] += stake
    return TriGameResult(winner, stake, tuple(payoffs), doubles, False, k, tuple(ejected))


def _game_block(config, seed, lo, hi):
    table = evaluation_table(config.lattice) if config.mc_trials == 0 else None
    return [simulate_doubling_game(config, seed, rep, table) for rep in range(lo, hi)]


def run_games(config: TriDoublingConfig, trials: int, seed: int, jobs: int = 1) -> list[TriGameResult]:
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    out = []
    for block in run_blocks(partial(_game_block, config, seed), trials, jobs, block=256):
        out.extend(block)
    return out


def _scan_points(n: int) -> list[TriPoint]:
    pts = []
    for b in range(n + 1):
        c = (n - b) // 2
        pts.append(TriPoint(n - b - c, b, c))
    return pts


def indifference_scan(lattice: TriLattice, trials: int, seed: int, exact: bool = False, jobs: int = 1, bs=None):
    """Accept payoff of player B along a line of rising B evaluation.

    Rows ``(y, payoff, stderr)`` with ``y = b/n``; payoff is +4 when B then
    wins and -2 otherwise, against the fold payoff of -1.  The second return
    value is the interpolated ``y`` where the payoff crosses -1.  ``bs``
    restricts the scan to those values of ``b``; each point's draws do not
    depend on which others are scanned.
    """
    n = lattice.n
    rows = []
    table = exact_evaluation(lattice) if exact else None
    points = _scan_points(n)
    if bs is not None:
        wanted = set(bs)
        if not wanted <= set(range(n + 1)):
            raise ValueError(f"b values must lie in 0..{n}")
        points = [p for p in points if p.b in wanted]
    for p in points:
        y = Fraction(p.b, n)
        if exact:
            pb = table[p].pB
            rows.append((float(y), accept_payoff(pb), 0.0))
            continue
        counts = win_counts(lattice, p, trials, seed, jobs, key=(p.b,))
        pb = counts[1] / trials
        rows.append((float(y), accept_payoff(pb), 6.0 * math.sqrt(pb * (1 - pb) / trials)))
    crossing = None
    for (y0, v0, _), (y1, v1, _) in zip(rows, rows[1:]):
        if v0 <= -1 <= v1 and v1 != v0:
            crossing = y0 + (y1 - y0) * (-1 - v0) / (v1 - v0)
            break
    return rows, crossing
