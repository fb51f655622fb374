from __future__ import annotations

import json
import math
import random

import networkx as nx
import pytest

from burnlab.grid import ExplicitGraph, GridSpec, ResourceLimitError, grid_radius, path_graph
from burnlab.sim import TargetSet, simulate
from burnlab.solver import (
    SolverConfig,
    brute_force_oracle,
    burning_number,
    oracle_burning_number,
    partial_burning_number,
)
from oracles import edges_nx, grid_nx, ilp_burning_number

# b(G_{4,16}) and b(G_{4,16}, rows {1,4}), fixed once by the MILP oracle in oracles.py
B_G_4_16 = 6
B_G_4_16_TOP_BOTTOM = 6


def _certified(host, res, target=None):
    assert res.solved and len(res.certificate) == res.value
    trace = simulate(host, res.certificate, target, mode="strict")
    assert trace.target_burned


@pytest.mark.parametrize("m,n,want", [(1, 16, 4), (1, 1, 1), (3, 3, 3), (2, 2, 2)])
def test_documented_values(m, n, want):
    g = GridSpec(m, n)
    res = burning_number(g)
    assert res.value == want
    _certified(g, res)


def test_g_4_16_pinned_value_agrees_with_milp():
    assert ilp_burning_number(grid_nx(4, 16), start=4) == B_G_4_16
    res = burning_number(GridSpec(4, 16))
    assert res.value == B_G_4_16
    _certified(GridSpec(4, 16), res)


def test_g_4_16_top_bottom_partial_value_agrees_with_milp():
    targets = [(r, c) for r in (1, 4) for c in range(1, 17)]
    assert ilp_burning_number(grid_nx(4, 16), targets, start=3) == B_G_4_16_TOP_BOTTOM
    res = partial_burning_number(GridSpec(4, 16), [1, 4])
    assert res.value == B_G_4_16_TOP_BOTTOM
    _certified(GridSpec(4, 16), res, TargetSet.rows(1, 4))


@pytest.mark.parametrize("m,n", [(m, n) for m in range(1, 4) for n in range(1, 7)])
def test_grids_agree_with_brute_force(m, n):
    g = GridSpec(m, n)
    assert burning_number(g).value == oracle_burning_number(g)


@pytest.mark.parametrize("m,n", [(3, 5), (4, 4), (2, 9), (3, 7), (4, 6)])
def test_grids_agree_with_milp(m, n):
    assert burning_number(GridSpec(m, n)).value == ilp_burning_number(grid_nx(m, n))


@pytest.mark.parametrize("seed", range(12))
def test_random_graphs_agree_with_brute_force_and_milp(seed):
    rng = random.Random(seed)
    count = rng.randint(2, 10)
    gx = nx.gnp_random_graph(count, rng.uniform(0.15, 0.5), seed=seed)
    g = ExplicitGraph.from_edges(count, gx.edges)
    target = TargetSet.of(sorted(rng.sample(range(count), rng.randint(1, count))))
    res = burning_number(g, target)
    assert res.value == oracle_burning_number(g, target)
    assert res.value == ilp_burning_number(edges_nx(count, g.edges), list(target.vertices))
    _certified(g, res, target)


@pytest.mark.parametrize("n", [1, 2, 5, 10, 17, 30, 50])
def test_paths_as_explicit_graphs(n):
    assert burning_number(path_graph(n)).value == math.isqrt(n - 1) + 1


def test_partial_targets():
    assert burning_number(GridSpec(4, 16), TargetSet.of([(2, 7)])).value == 1
    for m in (1, 2, 3, 5):
        assert partial_burning_number(GridSpec(m, 16), [1]).value == 4


def test_symmetry_reduction_does_not_change_values():
    for m, n in [(3, 3), (3, 6), (4, 5), (2, 8)]:
        on = burning_number(GridSpec(m, n), cfg=SolverConfig(symmetry_reduction=True)).value
        off = burning_number(GridSpec(m, n), cfg=SolverConfig(symmetry_reduction=False)).value
        assert on == off


def test_budget_exhaustion_is_inconclusive_with_bounds():
    res = burning_number(GridSpec(4, 16), cfg=SolverConfig(node_budget=20))
    assert not res.solved and res.value is None
    assert res.lower <= B_G_4_16 <= res.upper
    trace = simulate(GridSpec(4, 16), res.certificate)
    assert trace.target_burned and len(res.certificate) == res.upper
    assert res.to_dict()["status"] == "inconclusive"


def test_thread_hint_gives_identical_results():
    g = GridSpec(4, 9)
    base = burning_number(g, cfg=SolverConfig(thread_count_hint=1))
    for threads in (2, 4):
        res = burning_number(g, cfg=SolverConfig(thread_count_hint=threads))
        assert res.value == base.value
        assert res.certificate.sources == base.certificate.sources


def test_result_serializes_to_json():
    res = burning_number(GridSpec(2, 3))
    data = json.loads(json.dumps(res.to_dict()))
    assert data["status"] == "solved" and data["value"] == 3
    assert len(data["certificate"]) == 3 and data["stats"]["nodes"] >= 0


def test_vertex_cap():
    with pytest.raises(ResourceLimitError):
        burning_number(GridSpec(100, 100), cfg=SolverConfig(vertex_cap=100))


def test_brute_force_oracle_examples():
    assert brute_force_oracle(path_graph(4), None, 2)
    assert not brute_force_oracle(path_graph(5), None, 2)
    g = GridSpec(3, 5)
    # radius + 1 rounds always suffice from a central first source
    assert brute_force_oracle(g, None, grid_radius(g) + 1)
    with pytest.raises(ResourceLimitError):
        brute_force_oracle(GridSpec(10, 10), None, 5)


def test_disconnected_host():
    g = ExplicitGraph.from_edges(4, [(0, 1), (2, 3)])
    res = burning_number(g)
    assert res.value == oracle_burning_number(g) == 3
