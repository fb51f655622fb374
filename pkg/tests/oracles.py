"""Reference implementations used only by the tests.

Nothing here imports the package's search or simulation code, so agreement
with the package is evidence rather than tautology.
"""

from __future__ import annotations

import networkx as nx
import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp


def grid_nx(m: int, n: int) -> nx.Graph:
    """Grid with (row, col) labels, 1-based."""
    g = nx.grid_2d_graph(m, n)
    return nx.relabel_nodes(g, {(r, c): (r + 1, c + 1) for r, c in g.nodes})


def edges_nx(count: int, edges) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(count))
    g.add_edges_from(edges)
    return g


def naive_burn(graph: nx.Graph, sources, rounds: int | None = None):
    """Round-by-round burning with plain sets.

    Returns (burned sets after each round, index of the first source that was
    already burned when its round began, or None).
    """
    burned: set = set()
    history = []
    bad = None
    total = len(sources) if rounds is None else rounds
    t = 0
    while t < total or (rounds is None and len(burned) < graph.number_of_nodes() and _grows(graph, burned)):
        t += 1
        spread = set(burned)
        for v in burned:
            spread.update(graph.neighbors(v))
        if t <= len(sources):
            x = sources[t - 1]
            if x in burned and bad is None:
                bad = t
            spread.add(x)
        burned = spread
        history.append(frozenset(burned))
    return history, bad


def _grows(graph, burned) -> bool:
    return any(w not in burned for v in burned for w in graph.neighbors(v))


def cover_feasible(graph: nx.Graph, targets, k: int) -> bool:
    """0/1 program: pick one center per radius k-1..0 so every target is covered."""
    nodes = list(graph.nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    dist = dict(nx.all_pairs_shortest_path_length(graph))
    nv = len(nodes)
    nvar = nv * k  # x[v, i] -> center of the ball with radius k-1-i is v
    rows, lo = [], []
    for i in range(k):
        row = np.zeros(nvar)
        row[i * nv : (i + 1) * nv] = 1
        rows.append(row)
        lo.append(1)
    for w in targets:
        row = np.zeros(nvar)
        for v, d in dist[w].items():
            for i in range(k):
                if d <= k - 1 - i:
                    row[i * nv + idx[v]] = 1
        rows.append(row)
        lo.append(1)
    a = np.array(rows)
    hi = np.array([1] * k + [np.inf] * len(targets))
    res = milp(
        c=np.zeros(nvar),
        constraints=LinearConstraint(a, np.array(lo), hi),
        integrality=np.ones(nvar),
        bounds=Bounds(0, 1),
    )
    return res.status == 0


def ilp_burning_number(graph: nx.Graph, targets=None, start: int = 1) -> int:
    targets = list(graph.nodes) if targets is None else list(targets)
    k = start
    while not cover_feasible(graph, targets, k):
        k += 1
    return k
