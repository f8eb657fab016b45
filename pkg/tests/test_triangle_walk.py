from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubeengine.sim_core import derive_stream
from cubeengine.triangle_walk import (
    DrawSource,
    TriLattice,
    TriPoint,
    estimate_evaluation,
    exact_evaluation,
    neighbors,
    prob_vs_area,
    simulate_round,
    step,
    trace_round,
    win_counts,
)


def test_lattice_points():
    lat = TriLattice(4)
    pts = lat.points()
    assert len(pts) == 15
    assert all(sum(p) == 4 and min(p) >= 0 for p in pts)
    assert lat.centroid() == TriPoint(2, 1, 1)
    assert TriLattice(12).centroid() == TriPoint(4, 4, 4)


@pytest.mark.parametrize("bad", [0, -3, 2.5, True])
def test_lattice_rejects_bad_n(bad):
    with pytest.raises(ValueError):
        TriLattice(bad)


def test_check_rejects_off_lattice():
    lat = TriLattice(5)
    with pytest.raises(ValueError):
        lat.check((1, 1, 1))
    with pytest.raises(ValueError):
        lat.check((6, -1, 0))


def test_parse():
    assert TriPoint.parse("4, 3,3") == TriPoint(4, 3, 3)
    with pytest.raises(ValueError):
        TriPoint.parse("1,2")


def test_neighbors():
    lat = TriLattice(6)
    assert len(neighbors(lat, (2, 2, 2))) == 6
    assert set(neighbors(lat, (3, 3, 0))) == {TriPoint(4, 2, 0), TriPoint(2, 4, 0)}
    assert neighbors(lat, (6, 0, 0)) == []


@pytest.mark.parametrize("n", [1, 2, 5, 12])
def test_exact_evaluation_is_barycentric(n):
    table = exact_evaluation(TriLattice(n))
    for p, ev in table.items():
        for v, c in zip(ev.as_tuple(), p):
            assert abs(v - c / n) <= 1e-9


def test_recorded_winner_sequence():
    lat = TriLattice(10)
    start = lat.centroid()
    assert start == TriPoint(4, 3, 3)
    winners = "".join(simulate_round(lat, start, derive_stream(12345, i)) for i in range(20))
    assert winners == "ABAAABBAAACBBCCAAAAC"


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 1000))
def test_vectorized_walk_matches_single_steps(seed, rep):
    lat = TriLattice(7)
    start = TriPoint(3, 2, 2)
    winner, path = trace_round(lat, start, derive_stream(seed, rep))
    draws = DrawSource(derive_stream(seed, rep).generator())
    p, manual = start, [start]
    while not lat.is_vertex(p):
        p = step(lat, p, draws.next())
        manual.append(p)
    assert path == manual
    assert winner == "ABC"[max(range(3), key=lambda i: p[i])]
    for a, b in zip(path, path[1:]):
        assert b in neighbors(lat, a)
    # once on an edge the walk stays there
    first_edge = next((i for i, q in enumerate(path) if min(q) == 0), None)
    if first_edge is not None:
        zero = path[first_edge].index(0)
        assert all(q[zero] == 0 for q in path[first_edge:])


def test_start_at_vertex_ends_immediately():
    lat = TriLattice(5)
    assert simulate_round(lat, (0, 5, 0), derive_stream(1, 1)) == "B"


def test_win_counts_add_up():
    counts = win_counts(TriLattice(6), (2, 2, 2), 300, seed=3)
    assert sum(counts) == 300
    with pytest.raises(ValueError):
        win_counts(TriLattice(6), (2, 2, 2), 0, seed=3)


def test_estimate_and_area():
    lat = TriLattice(6)
    est = estimate_evaluation(lat, (3, 2, 1), 2000, seed=11)
    assert sum(est.as_tuple()) == 1
    for p, exact, se in zip(est.as_tuple(), (F(1, 2), F(1, 3), F(1, 6)), est.stderr):
        assert abs(float(p - exact)) <= 4 * se
    diffs, same = prob_vs_area(lat, (3, 2, 1), 2000, seed=11)
    assert sum(diffs) == 0
    assert same.as_tuple() == est.as_tuple()
