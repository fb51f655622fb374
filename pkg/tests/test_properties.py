from __future__ import annotations

import networkx as nx
from hypothesis import given, settings
from hypothesis import strategies as st

from burnlab.bounds import finite_two_path_lower_bound, two_path_capacity
from burnlab.grid import ExplicitGraph, GridSpec, Vertex, ball
from burnlab.sim import CoverCertificate, repair_cover_to_schedule, simulate
from burnlab.solver import burning_number
from burnlab.strategies import min_tiling
from oracles import edges_nx, naive_burn


@st.composite
def grid_and_centers(draw, max_m=5, max_n=9, max_k=5):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    centers = draw(st.lists(st.tuples(st.integers(1, m), st.integers(1, n)), min_size=k, max_size=k))
    return GridSpec(m, n), centers


@st.composite
def connected_graph(draw, max_vertices=12):
    count = draw(st.integers(1, max_vertices))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, count)]
    extra = draw(st.lists(st.tuples(st.integers(0, count - 1), st.integers(0, count - 1)), max_size=count))
    edges = {(min(i, p), max(i, p)) for i, p in zip(range(1, count), parents)}
    edges |= {(min(a, b), max(a, b)) for a, b in extra if a != b}
    return ExplicitGraph.from_edges(count, edges)


@settings(max_examples=150, deadline=None)
@given(grid_and_centers())
def test_repair_preserves_length_validity_and_coverage(case):
    g, centers = case
    k = len(centers)
    cover = CoverCertificate(centers, k)
    sched = repair_cover_to_schedule(g, cover)
    trace = simulate(g, sched, mode="strict")
    covered = {v for i, c in enumerate(centers) for v in ball(g, c, k - 1 - i)}
    if len(sched) == k:
        burned_after_k = {Vertex(r + 1, c + 1) for r, c in zip(*(trace.burn_round <= k).nonzero()) if trace.burn_round[r, c] > 0}
        assert covered <= burned_after_k
    else:
        assert trace.rounds[len(sched) - 1] == g.num_vertices


@settings(max_examples=60, deadline=None)
@given(connected_graph(), st.data())
def test_solver_certificate_is_minimal_and_strict(graph, data):
    res = burning_number(graph)
    history, bad = naive_burn(edges_nx(graph.count, graph.edges), list(res.certificate.sources), rounds=res.value)
    assert bad is None and len(history[-1]) == graph.count
    # minimality: a random choice of centers for one round fewer never covers
    if res.value > 1:
        k = res.value - 1
        dist = dict(nx.all_pairs_shortest_path_length(edges_nx(graph.count, graph.edges)))
        centers = data.draw(st.lists(st.integers(0, graph.count - 1), min_size=k, max_size=k))
        covered = {w for i, c in enumerate(centers) for w, d in dist[c].items() if d <= k - 1 - i}
        assert len(covered) < graph.count


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 4), st.integers(1, 30), st.integers(0, 25)), min_size=1, max_size=4))
def test_tiling_covers_pieces(raw):
    pieces = [(row, lo, lo + length) for row, lo, length in raw]
    g = GridSpec(4, max(hi for _, _, hi in pieces))
    k, plan = min_tiling(pieces)
    for row, lo, hi in pieces:
        cols = {v.col for i, e in enumerate(plan) if e for v in ball(g, e[0], k - 1 - i) if v.row == row}
        assert set(range(lo, hi + 1)) <= cols


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 60), st.integers(1, 500))
def test_finite_lower_bound_is_minimal(m, n):
    b = finite_two_path_lower_bound(m, n)
    need = n if m == 1 else 2 * n
    assert two_path_capacity(m, b) >= need > (two_path_capacity(m, b - 1) if b > 1 else 0)
