from __future__ import annotations

import json
import math

import pytest

from burnlab.bounds import rows_for, upper_bound
from burnlab.grid import GridSpec, Vertex, ball
from burnlab.sim import first_strict_violation, simulate, validate_strategy_at_scale
from burnlab.solver import burning_number
from burnlab.strategies import (
    STRATEGIES,
    BranchInapplicableError,
    best_strategy,
    composed_small_c_strategy,
    min_tiling,
    multi_path_strategy,
    path_strategy,
    tile_pieces,
    top_bottom_rounds_formula,
    top_bottom_strategy,
)


def _burns_within_claim(s):
    trace = simulate(s.grid, s.schedule)
    assert trace.burned_by_round is not None and trace.burned_by_round <= s.claimed_rounds
    return trace


@pytest.mark.parametrize("n,k", [(1, 1), (16, 4), (17, 5), (2, 2), (100, 10), (101, 11)])
def test_path_strategy(n, k):
    s = path_strategy(n)
    assert len(s.schedule) == k and s.claimed_rounds == k
    assert _burns_within_claim(s).burned_by_round == k


def test_tile_pieces_covers_every_piece():
    pieces = [(1, 1, 7), (3, 2, 9), (5, 4, 4)]
    k, plan = min_tiling(pieces)
    g = GridSpec(5, 9)
    covered = set()
    for i, entry in enumerate(plan):
        if entry is not None:
            covered |= ball(g, entry[0], k - 1 - i)
    for row, lo, hi in pieces:
        assert {Vertex(row, c) for c in range(lo, hi + 1)} <= covered
    assert tile_pieces(pieces, k - 1) is None


def test_multi_path_examples():
    s = multi_path_strategy(2000, 10**6)
    assert s.paths == (1001,) and s.claimed_rounds <= 2000 + 2
    s = multi_path_strategy(16000, 10**6)
    assert len(s.paths) == 4 and s.claimed_rounds <= 2 * 2000 + 3 + 2
    for s in (multi_path_strategy(2000, 10**6), multi_path_strategy(16000, 10**6)):
        assert validate_strategy_at_scale(s.grid, s).ok


def test_multi_path_with_one_row_is_the_path():
    assert multi_path_strategy(1, 30).claimed_rounds == path_strategy(30).claimed_rounds


def test_top_bottom_formula_examples():
    assert top_bottom_rounds_formula(10, 10**4) == 106
    s = top_bottom_strategy(10, 10**4)
    assert s.path_rounds == 106 and validate_strategy_at_scale(s.grid, s).ok


def test_top_bottom_full_simulation_m14():
    s = top_bottom_strategy(14, 100)
    trace = _burns_within_claim(s)
    # the two designated rows are burned after the path phase
    burned = trace.burn_round
    assert (burned[[0, 13], :] <= s.path_rounds).all()


def test_top_bottom_degenerate_no_alternating_sources():
    s = top_bottom_strategy(4, 8)
    assert top_bottom_rounds_formula(4, 8) == 4
    _burns_within_claim(s)


def test_top_bottom_regime():
    with pytest.raises(BranchInapplicableError):
        top_bottom_strategy(15, 100)


def _alternating_phases(s):
    return [p for p in s.phases if p["phase"] == "alternating"]


@pytest.mark.parametrize("m,n", [(10, 10**4), (14, 100), (6, 40), (30, 1000), (3, 50)])
def test_alternating_phase_disjoint_and_full_yield(m, n):
    s = top_bottom_strategy(m, n)
    seen = {1: [], m: []}
    for p in _alternating_phases(s):
        assert "substituted" not in p
        total = sum(hi - lo + 1 for lo, hi in p["intervals"].values())
        assert total == 4 * (p["radius"] + 1) - 2 * m
        for row, (lo, hi) in p["intervals"].items():
            assert all(hi < a or lo > b for a, b in seen[int(row)])
            seen[int(row)].append((lo, hi))


def test_composed_examples():
    s = composed_small_c_strategy(100, 10**4)
    assert s.claimed_rounds / 100 <= 1.6
    assert validate_strategy_at_scale(s.grid, s).ok
    assert s.flood_radius <= math.ceil(100 / 4) + 1
    s = composed_small_c_strategy(4, 16)
    trace = _burns_within_claim(s)
    assert burning_number(GridSpec(4, 16)).value <= trace.burned_by_round
    one = composed_small_c_strategy(1, 20)
    assert one.claimed_rounds == 5
    with pytest.raises(BranchInapplicableError):
        composed_small_c_strategy(30, 100)


@pytest.mark.parametrize("c", [0.5, 1, 2])
def test_trend_along_powers_of_four(c):
    prev = math.inf
    for j in range(4, 14):
        n = 4**j
        s = composed_small_c_strategy(rows_for(c, n), n)
        ratio = s.claimed_rounds / math.sqrt(n)
        assert ratio <= prev
        prev = ratio
    assert prev == pytest.approx(upper_bound(c, n)[0] / math.sqrt(n), rel=0.05)


@pytest.mark.parametrize("m", range(1, 7))
def test_interval_checks_agree_with_simulation(m):
    for n in range(1, 65):
        for name, build in STRATEGIES.items():
            try:
                s = build(m, n)
            except BranchInapplicableError:
                continue
            rep = validate_strategy_at_scale(s.grid, s)
            trace = simulate(s.grid, s.schedule)
            sim_ok = trace.burned_by_round is not None and trace.burned_by_round <= s.claimed_rounds
            assert rep.ok == sim_ok, (name, m, n)
            assert rep.ok, (name, m, n, rep.violations)


def test_sequences_are_strict_at_scale():
    for c in (0.5, 1, 2):
        n = 10**6
        for build in (multi_path_strategy, composed_small_c_strategy):
            s = build(rows_for(c, n), n)
            assert first_strict_violation(s.schedule.sources) is None


def test_best_strategy_and_json():
    s = best_strategy(4, 16)
    data = json.loads(s.to_json())
    assert data["claimed_rounds"] == s.claimed_rounds and data["m"] == 4
    assert len(data["sources"]) == len(data["phases"])


@pytest.mark.parametrize("m", range(1, 12))
def test_alternating_yield_closed_form_matches_direct_sum(m):
    # radii m-1 .. b-1 each cover 4(t+1) - 2m columns over the two rows
    for b in range(m, m + 30):
        assert sum(4 * (t + 1) - 2 * m for t in range(m - 1, b)) == 2 * b * (b - m + 1)
