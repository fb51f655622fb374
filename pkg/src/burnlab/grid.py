"""Grid geometry and small explicit graphs.

Grids are implicit: a vertex is a ``(row, col)`` pair with ``1 <= row <= m``
and ``1 <= col <= n`` and distances are Manhattan distances, so nothing is
allocated per vertex. ``ExplicitGraph`` is the adjacency-based fallback used
for subgraphs, path forests and the brute-force oracle.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

DEFAULT_VERTEX_CAP = 10_000


class GraphInputError(ValueError):
    """Invalid vertex, path or graph description."""


class ResourceLimitError(RuntimeError):
    """Refused to materialize or enumerate something above a configured cap."""


class DisconnectedGraphError(ValueError):
    """Raised when a quantity is infinite because the graph is disconnected."""


class Vertex(NamedTuple):
    row: int
    col: int


@dataclass(frozen=True)
class HorizontalPathSpec:
    height: int


@dataclass(frozen=True)
class GridSpec:
    m: int
    n: int

    def __post_init__(self) -> None:
        if int(self.m) != self.m or int(self.n) != self.n or self.m < 1 or self.n < 1:
            raise GraphInputError(f"grid dimensions must be positive integers, got {self.m}x{self.n}")

    @property
    def num_vertices(self) -> int:
        return self.m * self.n

    @property
    def c(self) -> float:
        """Fence parameter m / sqrt(n); derived, never an input."""
        return self.m / math.sqrt(self.n)

    def contains(self, v: Sequence[int]) -> bool:
        return 1 <= v[0] <= self.m and 1 <= v[1] <= self.n

    def check(self, v: Sequence[int]) -> Vertex:
        try:
            r, c = int(v[0]), int(v[1])
        except (TypeError, ValueError, IndexError):
            raise GraphInputError(f"not a grid vertex: {v!r}") from None
        if not self.contains((r, c)):
            raise GraphInputError(f"vertex {(r, c)} outside {self.m}x{self.n} grid")
        return Vertex(r, c)

    def check_path(self, p: HorizontalPathSpec | int) -> HorizontalPathSpec:
        h = p.height if isinstance(p, HorizontalPathSpec) else int(p)
        if not 1 <= h <= self.m:
            raise GraphInputError(f"path height {h} outside [1, {self.m}]")
        return HorizontalPathSpec(h)

    def vertices(self) -> Iterator[Vertex]:
        for r in range(1, self.m + 1):
            for c in range(1, self.n + 1):
                yield Vertex(r, c)

    def index(self, v: Sequence[int]) -> int:
        return (v[0] - 1) * self.n + (v[1] - 1)

    def vertex(self, i: int) -> Vertex:
        return Vertex(i // self.n + 1, i % self.n + 1)

    def neighbors(self, v: Sequence[int]) -> Iterator[Vertex]:
        r, c = v
        if r > 1:
            yield Vertex(r - 1, c)
        if r < self.m:
            yield Vertex(r + 1, c)
        if c > 1:
            yield Vertex(r, c - 1)
        if c < self.n:
            yield Vertex(r, c + 1)

    def distance(self, u: Sequence[int], v: Sequence[int]) -> int:
        return abs(u[0] - v[0]) + abs(u[1] - v[1])


def grid_distance(g: GridSpec, u: Sequence[int], v: Sequence[int]) -> int:
    u, v = g.check(u), g.check(v)
    return abs(u.row - v.row) + abs(u.col - v.col)


def ball(g: GridSpec, v: Sequence[int], r: int) -> set[Vertex]:
    """All grid vertices within distance ``r`` of ``v``."""
    v = g.check(v)
    if r < 0:
        return set()
    out = set()
    for row in range(max(1, v.row - r), min(g.m, v.row + r) + 1):
        w = r - abs(row - v.row)
        for col in range(max(1, v.col - w), min(g.n, v.col + w) + 1):
            out.add(Vertex(row, col))
    return out


def ball_size(g: GridSpec, v: Sequence[int], r: int) -> int:
    v = g.check(v)
    return sum(
        ball_path_intersection_size(g, v, r, HorizontalPathSpec(h))
        for h in range(max(1, v.row - r), min(g.m, v.row + r) + 1)
    )


def path_interval(g: GridSpec, v: Sequence[int], r: int, height: int) -> tuple[int, int] | None:
    """Column interval of ``B(v, r)`` on row ``height``, or None if empty."""
    w = r - abs(v[0] - height)
    if w < 0:
        return None
    lo, hi = max(1, v[1] - w), min(g.n, v[1] + w)
    if lo > hi:
        return None
    return lo, hi


def ball_path_intersection_size(g: GridSpec, v: Sequence[int], r: int, p: HorizontalPathSpec | int) -> int:
    p = g.check_path(p)
    iv = path_interval(g, v, r, p.height)
    return 0 if iv is None else iv[1] - iv[0] + 1


def grid_radius(g: GridSpec) -> int:
    # ceil((m-1)/2) + ceil((n-1)/2)
    return g.m // 2 + g.n // 2


def grid_center(g: GridSpec) -> Vertex:
    return Vertex((g.m + 1) // 2, (g.n + 1) // 2)


@dataclass(frozen=True)
class ExplicitGraph:
    """Simple undirected graph on vertex ids ``0..count-1``.

    ``labels`` optionally records, for each id, the label the vertex had in a
    parent graph (set by :meth:`remove_vertices`).
    """

    count: int
    edges: frozenset = field(default_factory=frozenset)
    labels: tuple | None = None

    def __post_init__(self) -> None:
        if self.count < 0:
            raise GraphInputError("vertex count must be nonnegative")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphInputError(f"self-loop at {u}")
            if not (0 <= u < self.count and 0 <= v < self.count):
                raise GraphInputError(f"edge {e} has an endpoint outside [0, {self.count})")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))
        if self.labels is not None and len(self.labels) != self.count:
            raise GraphInputError("labels must have one entry per vertex")
        adj: list[list[int]] = [[] for _ in range(self.count)]
        for u, v in sorted(norm):
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(a) for a in adj))
        object.__setattr__(self, "_rows", {})

    @classmethod
    def from_edges(cls, count: int, edges: Iterable[tuple[int, int]]) -> "ExplicitGraph":
        return cls(count, frozenset(tuple(e) for e in edges))

    @property
    def num_vertices(self) -> int:
        return self.count

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.count)

    def check(self, v: int) -> int:
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < self.count:
            raise GraphInputError(f"vertex {v!r} outside [0, {self.count})")
        return v

    def index(self, v: int) -> int:
        return v

    def vertex(self, i: int) -> int:
        return i

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def bfs(self, source: int) -> list[int]:
        """Distances from ``source``; -1 marks unreachable vertices."""
        dist = [-1] * self.count
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def distance(self, u: int, v: int) -> float:
        row = self._rows.get(u)
        if row is None:
            row = self._rows[u] = self.bfs(u)
        d = row[v]
        return math.inf if d < 0 else d

    def remove_edges(self, edges: Iterable[tuple[int, int]]) -> "ExplicitGraph":
        drop = {(min(u, v), max(u, v)) for u, v in edges}
        missing = drop - self.edges
        if missing:
            raise GraphInputError(f"edges not in graph: {sorted(missing)}")
        return ExplicitGraph(self.count, self.edges - drop, self.labels)

    def remove_vertices(self, vertices: Iterable[int]) -> "ExplicitGraph":
        """Induced subgraph on the remaining vertices, relabeled to ``0..k-1``."""
        drop = {self.check(v) for v in vertices}
        keep = [v for v in range(self.count) if v not in drop]
        new_id = {v: i for i, v in enumerate(keep)}
        old_labels = self.labels or tuple(range(self.count))
        edges = frozenset(
            (new_id[u], new_id[v]) for u, v in self.edges if u in new_id and v in new_id
        )
        return ExplicitGraph(len(keep), edges, tuple(old_labels[v] for v in keep))

    def to_text(self) -> str:
        lines = [f"p {self.count}"]
        lines.extend(f"e {u} {v}" for u, v in sorted(self.edges))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExplicitGraph":
        count = None
        edges = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if parts[0] == "p" and len(parts) == 2 and count is None:
                    count = int(parts[1])
                elif parts[0] == "e" and len(parts) == 3 and count is not None:
                    edges.append((int(parts[1]), int(parts[2])))
                else:
                    raise ValueError
            except ValueError:
                raise GraphInputError(f"line {lineno}: cannot parse {raw!r}") from None
        if count is None:
            raise GraphInputError("missing 'p <num_vertices>' header")
        if len(set((min(u, v), max(u, v)) for u, v in edges)) != len(edges):
            raise GraphInputError("duplicate edge in edge list")
        return cls.from_edges(count, edges)


def explicit_from_grid(g: GridSpec, cap: int = DEFAULT_VERTEX_CAP) -> ExplicitGraph:
    """Materialize ``g``; vertex ``(r, c)`` gets id ``(r-1)*n + (c-1)``."""
    if g.num_vertices > cap:
        raise ResourceLimitError(f"{g.m}x{g.n} grid has {g.num_vertices} vertices, cap is {cap}")
    edges = set()
    for v in g.vertices():
        i = g.index(v)
        if v.col < g.n:
            edges.add((i, i + 1))
        if v.row < g.m:
            edges.add((i, i + g.n))
    return ExplicitGraph(g.num_vertices, frozenset(edges))


def path_graph(n: int) -> ExplicitGraph:
    return ExplicitGraph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def path_forest(copies: int, n: int) -> ExplicitGraph:
    """``copies`` disjoint paths of order n, i.e. P_{copies*n} minus copies-1 edges."""
    long = path_graph(copies * n)
    return long.remove_edges((i * n - 1, i * n) for i in range(1, copies))


def radius(graph: ExplicitGraph) -> int:
    if graph.count == 0:
        raise GraphInputError("empty graph has no radius")
    best = None
    for v in graph.vertices():
        dist = graph.bfs(v)
        if min(dist) < 0:
            raise DisconnectedGraphError("graph is disconnected; radius is infinite")
        ecc = max(dist)
        best = ecc if best is None else min(best, ecc)
    return best


def as_explicit(host, cap: int = DEFAULT_VERTEX_CAP) -> ExplicitGraph:
    return explicit_from_grid(host, cap) if isinstance(host, GridSpec) else host


def distance_matrix(host, cap: int = DEFAULT_VERTEX_CAP):
    """All-pairs distances as a numpy array; unreachable pairs get a large sentinel."""
    import numpy as np

    if isinstance(host, GridSpec):
        if host.num_vertices > cap:
            raise ResourceLimitError(f"{host.m}x{host.n} grid exceeds cap {cap}")
        idx = np.arange(host.num_vertices)
        rows, cols = idx // host.n, idx % host.n
        return np.abs(rows[:, None] - rows[None, :]) + np.abs(cols[:, None] - cols[None, :])
    if host.count > cap:
        raise ResourceLimitError(f"graph has {host.count} vertices, cap is {cap}")
    big = host.count + 1
    out = np.full((host.count, host.count), big, dtype=np.int64)
    for v in host.vertices():
        d = np.array(host.bfs(v))
        out[v] = np.where(d < 0, big, d)
    return out
