from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubeengine.sim_core import derive_stream
from cubeengine.tri_game import (
    ONE_DOUBLE_FOLD,
    TriDoublingConfig,
    _project,
    accept_payoff,
    evaluation_table,
    indifference_scan,
    one_double_thresholds,
    run_games,
    should_double,
    simulate_doubling_game,
)
from cubeengine.triangle_walk import TriEvaluation, TriLattice, TriPoint, simulate_round

LAT = TriLattice(12)


def test_one_double_threshold_is_a_sixth():
    th = one_double_thresholds()
    assert th.fold_below == F(1, 6) == ONE_DOUBLE_FOLD
    # accepting is worth 4y - 2(1 - y); folding costs 1
    assert accept_payoff(F(1, 6)) == -1
    assert accept_payoff(F(1, 5)) > -1 > accept_payoff(F(1, 7))


def test_should_double_one_double_rule():
    ev = TriEvaluation(F(2, 3), F(1, 6), F(1, 6))
    assert should_double(ev, "A", None)
    assert not should_double(ev, "B", None)
    assert not should_double(ev, "A", "A")
    assert not should_double(TriEvaluation(F(1, 2), F(1, 3), F(1, 6)), "A", None)


def test_should_double_threshold_rule():
    cfg = TriDoublingConfig(LAT, LAT.centroid(), q_offer=F(1, 2), max_doubles=None)
    assert should_double(TriEvaluation(F(7, 12), F(1, 4), F(1, 6)), "A", None, cfg)
    assert not should_double(TriEvaluation(F(1, 2), F(1, 4), F(1, 4)), "A", None, cfg)


def test_config_validation():
    with pytest.raises(ValueError):
        TriDoublingConfig(LAT, (1, 1, 1))
    with pytest.raises(ValueError):
        TriDoublingConfig(LAT, LAT.centroid(), accept_rule="most")
    with pytest.raises(ValueError):
        TriDoublingConfig(LAT, LAT.centroid(), max_doubles=-1)
    cfg = TriDoublingConfig(LAT, LAT.centroid(), q_offer=F(1, 10), q_fold=F(1, 5))
    assert cfg.warnings


def test_evaluation_table_exact():
    table = evaluation_table(TriLattice(6))
    assert table[TriPoint(3, 2, 1)].as_tuple() == (F(1, 2), F(1, 3), F(1, 6))


def test_project_keeps_ratio():
    assert _project(12, TriPoint(6, 3, 3), 2) == TriPoint(8, 4, 0)
    assert _project(12, TriPoint(1, 10, 1), 0) == TriPoint(0, 11, 1)
    assert _project(10, TriPoint(1, 1, 8), 2) == TriPoint(5, 5, 0)


def test_unreachable_offer_replays_plain_walk():
    cfg = TriDoublingConfig(LAT, LAT.centroid(), q_offer=F(101, 100), max_doubles=None)
    table = evaluation_table(LAT)
    for rep in range(100):
        g = simulate_doubling_game(cfg, 99, rep, table)
        assert g.winner == simulate_round(LAT, LAT.centroid(), derive_stream(99, rep))
        assert g.stake == 1 and not g.doubles


def test_fold_payoffs():
    # both opponents are at or below 1/6, so A offers; C is below 1/6 and folds,
    # which ends the game under the all-accept rule
    lat = TriLattice(12)
    cfg = TriDoublingConfig(lat, (9, 2, 1))
    g = simulate_doubling_game(cfg, 0)
    assert g.folded and g.winner == "A" and g.steps == 0
    assert g.payoffs == (2, -1, -1)
    assert g.doubles[0].rejected_by == ("C",)
    assert g.doubles[0].accepted_by == ("B",)


def test_accepted_double_doubles_stake():
    lat = TriLattice(12)
    cfg = TriDoublingConfig(lat, (8, 2, 2))
    g = simulate_doubling_game(cfg, 0)
    assert g.doubles[0].accepted_by == ("B", "C")
    assert g.stake == 2 and g.accepted_doubles == 1
    winner = "ABC".index(g.winner)
    assert g.payoffs[winner] == 4


def test_any_rule_ejects_rejector():
    lat = TriLattice(12)
    cfg = TriDoublingConfig(lat, (8, 3, 1), accept_rule="any", q_offer=F(1, 2), max_doubles=1)
    g = simulate_doubling_game(cfg, 0)
    assert g.ejected == ("C",)
    assert g.doubles[0].accepted_by == ("B",)
    assert g.stake == 2
    assert sum(g.payoffs) == 0


configs = st.sampled_from(
    [
        dict(),
        dict(q_offer=F(1, 2), max_doubles=None),
        dict(q_offer=F(2, 5), accept_rule="any", max_doubles=None),
        dict(q_offer=F(1, 2), q_fold=F(1, 4), max_doubles=3),
    ]
)


@settings(max_examples=40, deadline=None)
@given(configs, st.integers(0, 2**20), st.sampled_from([(4, 4, 4), (6, 3, 3), (2, 5, 5), (7, 4, 1)]))
def test_zero_sum_and_power_of_two_stakes(kw, seed, start):
    cfg = TriDoublingConfig(LAT, start, **kw)
    g = simulate_doubling_game(cfg, seed)
    assert sum(g.payoffs) == 0
    assert g.stake & (g.stake - 1) == 0
    if cfg.max_doubles is not None:
        assert g.accepted_doubles <= cfg.max_doubles
    for a, b in zip(g.doubles, g.doubles[1:]):
        assert a.doubler != b.doubler


def test_nested_mc_evaluation_runs():
    cfg = TriDoublingConfig(TriLattice(6), (2, 2, 2), q_offer=F(1, 2), max_doubles=None, mc_trials=20)
    a = simulate_doubling_game(cfg, 5, 1)
    b = simulate_doubling_game(cfg, 5, 1)
    assert a == b


def test_run_games_independent_of_jobs():
    cfg = TriDoublingConfig(LAT, LAT.centroid(), q_offer=F(1, 2), max_doubles=None)
    one = run_games(cfg, 300, seed=4, jobs=1)
    two = run_games(cfg, 300, seed=4, jobs=2)
    assert [g.summary() for g in one] == [g.summary() for g in two]


def test_exact_indifference_scan():
    rows, crossing = indifference_scan(LAT, trials=1, seed=0, exact=True)
    ys = [r[0] for r in rows]
    assert ys == [b / 12 for b in range(13)]
    at_sixth = rows[2]
    assert at_sixth[0] == pytest.approx(1 / 6)
    assert abs(at_sixth[1] + 1) <= 1e-9
    assert crossing == pytest.approx(1 / 6, abs=1e-9)


def test_mc_indifference_scan_small():
    rows, _ = indifference_scan(TriLattice(6), trials=400, seed=2)
    for y, payoff, se in rows:
        assert abs(payoff - accept_payoff(y)) <= 4 * se + 1e-12
