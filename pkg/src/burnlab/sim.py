"""The burning process: simulation, cover checks and schedule repair.

Round semantics: in round ``t`` the fire spreads from every burned vertex to
its neighbors and source ``x_t`` ignites. A source is legal when it was still
unburned at the start of its round, so a vertex reached by the spread in the
same round may still be chosen (Figure-1 style schedules rely on this). A
source ignited in round ``i`` has burned exactly ``B(x_i, k - i)`` after round
``k``.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .grid import ExplicitGraph, GraphInputError, GridSpec, HorizontalPathSpec, ResourceLimitError, Vertex, distance_matrix


class InvalidScheduleError(ValueError):
    """A source was already burned before the round it was chosen (strict mode)."""

    def __init__(self, index: int, vertex: Any):
        super().__init__(f"source {index} at {vertex} was already burned before round {index}")
        self.index = index
        self.vertex = vertex


@dataclass(frozen=True)
class TargetSet:
    """Vertices that must burn: horizontal paths of a grid or an explicit vertex list.

    ``TargetSet()`` with neither field set means "every vertex".
    """

    paths: tuple[int, ...] | None = None
    vertices: tuple | None = None

    @classmethod
    def rows(cls, *heights: int) -> "TargetSet":
        return cls(paths=tuple(sorted(set(int(h) for h in heights))))

    @classmethod
    def of(cls, vertices) -> "TargetSet":
        return cls(vertices=tuple(tuple(v) if isinstance(v, (list, tuple)) else v for v in vertices))

    @property
    def is_everything(self) -> bool:
        return self.paths is None and self.vertices is None

    def resolve(self, host) -> list:
        """Concrete, validated, duplicate-free vertex list on ``host``."""
        if self.paths is not None:
            if not isinstance(host, GridSpec):
                raise GraphInputError("path targets need a grid host")
            if not self.paths:
                raise GraphInputError("target set is empty")
            heights = [host.check_path(h).height for h in self.paths]
            return [Vertex(h, c) for h in heights for c in range(1, host.n + 1)]
        if self.vertices is not None:
            if not self.vertices:
                raise GraphInputError("target set is empty")
            seen = dict.fromkeys(host.check(v) for v in self.vertices)
            return list(seen)
        return list(host.vertices())


def _target(target) -> TargetSet:
    if target is None:
        return TargetSet()
    if isinstance(target, TargetSet):
        return target
    if isinstance(target, HorizontalPathSpec):
        return TargetSet.rows(target.height)
    return TargetSet.of(target)


@dataclass
class BurningSchedule:
    sources: list
    host: GridSpec | ExplicitGraph | None = None

    def __post_init__(self) -> None:
        self.sources = [Vertex(*s) if isinstance(s, (list, tuple)) else s for s in self.sources]
        if self.host is not None:
            self.sources = [self.host.check(s) for s in self.sources]

    def __len__(self) -> int:
        return len(self.sources)

    def to_dict(self) -> dict:
        if isinstance(self.host, GridSpec):
            return {"m": self.host.m, "n": self.host.n, "sources": [list(s) for s in self.sources]}
        out: dict = {"sources": list(self.sources)}
        if self.host is not None:
            out["graph"] = self.host.to_text()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "BurningSchedule":
        try:
            if "m" in data:
                host = GridSpec(int(data["m"]), int(data["n"]))
                return cls([tuple(s) for s in data["sources"]], host)
            host = ExplicitGraph.from_text(data["graph"]) if "graph" in data else None
            return cls(list(data["sources"]), host)
        except (KeyError, TypeError) as exc:
            raise GraphInputError(f"malformed schedule: {exc}") from None


@dataclass
class CoverCertificate:
    """Centers whose balls have radii ``horizon-1, horizon-2, ..., 0`` in order."""

    centers: list
    horizon: int

    def __post_init__(self) -> None:
        if len(self.centers) != self.horizon:
            raise GraphInputError(f"{len(self.centers)} centers for horizon {self.horizon}")

    def radius(self, i: int) -> int:
        return self.horizon - 1 - i


@dataclass
class SimulationTrace:
    rounds: list[int]
    schedule_length: int
    target_size: int
    target_burned: bool
    burned_by_round: int | None
    skipped: list[int] = field(default_factory=list)
    frontiers: list | None = None
    burn_round: Any = None

    @property
    def final_round(self) -> int:
        return len(self.rounds)

    def to_dict(self) -> dict:
        out = {
            "schedule_length": self.schedule_length,
            "burned_counts": self.rounds,
            "final_round": self.final_round,
            "target_size": self.target_size,
            "target_burned": self.target_burned,
            "burned_by_round": self.burned_by_round,
            "skipped": self.skipped,
        }
        if self.frontiers is not None:
            out["frontiers"] = [[list(v) if isinstance(v, tuple) else v for v in f] for f in self.frontiers]
        return out


def simulate(
    host,
    schedule: BurningSchedule | Sequence,
    target=None,
    mode: str = "strict",
    max_rounds: int | None = None,
    record_frontier: bool = False,
) -> SimulationTrace:
    """Run the burning process for ``schedule`` on ``host``.

    Rounds continue past the end of the schedule until the target is burned
    or the fire stops growing. ``target_burned`` reports whether the target is
    burned after round ``len(schedule)``; ``burned_by_round`` is the first
    round by which it is (or None).
    """
    if mode not in ("strict", "lenient"):
        raise ValueError(f"unknown mode {mode!r}")
    sources = schedule.sources if isinstance(schedule, BurningSchedule) else list(schedule)
    sources = [host.check(s) for s in sources]
    target = _target(target)
    if isinstance(host, GridSpec):
        return _simulate_grid(host, sources, target, mode, max_rounds, record_frontier)
    return _simulate_explicit(host, sources, target, mode, max_rounds, record_frontier)


def _simulate_grid(g, sources, target, mode, max_rounds, record_frontier):
    burned = np.zeros((g.m, g.n), dtype=bool)
    burn_round = np.zeros((g.m, g.n), dtype=np.int32)
    if target.is_everything:
        want = None
        target_size = g.num_vertices
    else:
        want = np.zeros((g.m, g.n), dtype=bool)
        for v in target.resolve(g):
            want[v[0] - 1, v[1] - 1] = True
        target_size = int(want.sum())
    k = len(sources)
    limit = max_rounds if max_rounds is not None else k + g.m + g.n
    counts, skipped, frontiers = [], [], [] if record_frontier else None
    done_at = None
    t = 0
    while t < limit:
        t += 1
        grown = burned.copy()
        grown[1:, :] |= burned[:-1, :]
        grown[:-1, :] |= burned[1:, :]
        grown[:, 1:] |= burned[:, :-1]
        grown[:, :-1] |= burned[:, 1:]
        if t <= k:
            r, c = sources[t - 1]
            if burned[r - 1, c - 1]:
                if mode == "strict":
                    raise InvalidScheduleError(t, sources[t - 1])
                skipped.append(t)
            else:
                grown[r - 1, c - 1] = True
        new = grown & ~burned
        burn_round[new] = t
        if record_frontier:
            frontiers.append([Vertex(int(a) + 1, int(b) + 1) for a, b in zip(*np.nonzero(new))])
        burned = grown
        counts.append(int(burned.sum()))
        complete = bool(burned.all()) if want is None else bool(burned[want].all())
        if complete and done_at is None:
            done_at = t
        if t >= k and (complete or not new.any()):
            break
    complete_at_k = done_at is not None and done_at <= k
    return SimulationTrace(counts, k, target_size, complete_at_k, done_at, skipped, frontiers, burn_round)


def _simulate_explicit(graph, sources, target, mode, max_rounds, record_frontier):
    want = set(target.resolve(graph))
    burn_round = [0] * graph.count
    frontier: list[int] = []
    total = 0
    missing = len(want)
    k = len(sources)
    limit = max_rounds if max_rounds is not None else k + graph.count
    counts, skipped, frontiers = [], [], [] if record_frontier else None
    done_at = None
    t = 0
    while t < limit:
        t += 1
        new = []
        for u in frontier:
            for w in graph.neighbors(u):
                if not burn_round[w]:
                    burn_round[w] = t
                    new.append(w)
        if t <= k:
            x = sources[t - 1]
            if burn_round[x] and burn_round[x] < t:
                if mode == "strict":
                    raise InvalidScheduleError(t, x)
                skipped.append(t)
            elif not burn_round[x]:
                burn_round[x] = t
                new.append(x)
        total += len(new)
        missing -= sum(1 for w in new if w in want)
        counts.append(total)
        if record_frontier:
            frontiers.append(sorted(new))
        frontier = new
        if missing == 0 and done_at is None:
            done_at = t
        if t >= k and (missing == 0 or not new):
            break
    complete_at_k = done_at is not None and done_at <= k
    return SimulationTrace(counts, k, len(want), complete_at_k, done_at, skipped, frontiers, burn_round)


def validate_cover(host, cover: CoverCertificate, target=None) -> bool:
    """True iff every target vertex lies in ``B(centers[i], horizon-1-i)`` for some i."""
    target = _target(target)
    centers = [host.check(c) for c in cover.centers]
    if isinstance(host, GridSpec) and target.paths is not None:
        radii = [cover.radius(i) for i in range(cover.horizon)]
        return all(
            first_gap(host, centers, radii, host.check_path(h).height) is None for h in target.paths
        )
    for v in target.resolve(host):
        if not any(host.distance(c, v) <= cover.radius(i) for i, c in enumerate(centers)):
            return False
    return True


def first_gap(g: GridSpec, centers, radii, height: int) -> int | None:
    """First column of row ``height`` not covered by the balls, or None.

    Interval arithmetic only: O(k log k), independent of ``g.n``.
    """
    if not len(centers):
        return 1
    pts = np.asarray(centers, dtype=np.int64).reshape(-1, 2)
    rad = np.asarray(radii, dtype=np.int64)
    w = rad - np.abs(pts[:, 0] - height)
    keep = w >= 0
    lo = np.maximum(1, pts[keep, 1] - w[keep])
    hi = np.minimum(g.n, pts[keep, 1] + w[keep])
    if lo.size == 0:
        return 1
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    reach = np.maximum.accumulate(hi)
    prev = np.concatenate(([0], reach[:-1]))
    gaps = np.nonzero(lo > prev + 1)[0]
    if gaps.size:
        return int(prev[gaps[0]] + 1)
    if reach[-1] < g.n:
        return int(reach[-1] + 1)
    return None


def first_strict_violation(sources) -> int | None:
    """1-based index of the first grid source already burned when chosen, or None.

    Source ``i`` is burned before round ``i`` iff some earlier source ``j``
    has ``j + d(x_j, x_i) < i``; only pairs with ``|col_i - col_j| < k`` can
    qualify, so candidate pairs come from a sorted column window.
    """
    k = len(sources)
    if k < 2:
        return None
    pts = np.asarray(sources, dtype=np.int64).reshape(-1, 2)
    rows, cols = pts[:, 0], pts[:, 1]
    order = np.argsort(cols, kind="stable")
    sorted_cols = cols[order]
    lo = np.searchsorted(sorted_cols, cols - (k - 1), side="left")
    hi = np.searchsorted(sorted_cols, cols + (k - 1), side="right")
    counts = hi - lo
    worst = None
    chunk = 4_000_000
    start = 0
    # process query sources in slabs so the pair arrays stay bounded
    while start < k:
        stop = start
        acc = 0
        while stop < k and (acc + counts[stop] <= chunk or stop == start):
            acc += counts[stop]
            stop += 1
        c = counts[start:stop]
        i_idx = np.repeat(np.arange(start, stop), c)
        offs = np.arange(int(c.sum())) - np.repeat(np.cumsum(c) - c, c)
        j_idx = order[np.repeat(lo[start:stop], c) + offs]
        d = np.abs(rows[i_idx] - rows[j_idx]) + np.abs(cols[i_idx] - cols[j_idx])
        bad = (j_idx < i_idx) & (j_idx + d < i_idx)
        if bad.any():
            cand = int(i_idx[bad].min()) + 1
            worst = cand if worst is None else min(worst, cand)
            break
        start = stop
    return worst


def _burned_before(host, ignited, v, t) -> bool:
    return any(j + host.distance(x, v) < t for j, x in ignited)


def repair_cover_to_schedule(host, cover: CoverCertificate, target=None) -> BurningSchedule:
    """Turn a cover into a strictly valid burning sequence of the same horizon.

    Balls not needed to cover ``target`` (default: all vertices) are marked
    redundant, largest radius first. A center that is redundant or already
    burned before its round is swapped for the unburned vertex the fire
    reaches soonest (ties: nearest to the center, then vertex order).
    Usually that vertex catches fire in the same round anyway, so the swap
    adds nothing to the fire and leaves as many vertices as possible unburned
    for later rounds. Coverage is preserved: if ``x_i`` was burned by source
    ``j`` before round ``i``, then ``B(x_i, k-i)`` lies inside
    ``B(x_j, k-j)``. If nothing is unburned the ignition is dropped, which
    can only happen once the fire has already reached every vertex.

    When that happens a bounded search that may also move centers
    (:func:`_strict_search`) gets a chance to find a full-length sequence;
    if it gives up, the shorter sequence is returned.
    """
    centers = [host.check(c) for c in cover.centers]
    spare = _redundant_balls(host, centers, cover.horizon, _target(target))
    greedy = _substitute(host, centers, spare)
    if len(greedy) < cover.horizon:
        found = _strict_search(host, centers, cover.horizon, _target(target))
        if found is not None:
            return BurningSchedule(found, host)
    return greedy


def _substitute(host, centers, spare) -> BurningSchedule:
    ignited: list[tuple[int, Any]] = []
    for i, center in enumerate(centers, start=1):
        burned = _burned_before(host, ignited, center, i)
        if not burned and not (spare[i - 1] and ignited):
            ignited.append((i, center))
            continue
        sub = _earliest_unburned(host, ignited, center, i)
        if sub is None:
            break
        ignited.append((i, sub))
    return BurningSchedule([x for _, x in ignited], host)


def _strict_search(host, centers, k: int, target: TargetSet, budget: int = 4000, width: int = 6):
    """Depth-first search for ``k`` strictly valid sources covering ``target`` by round ``k``.

    Round ``i`` may use any vertex the fire has not reached yet. Candidates
    are tried in order of new targets covered, then distance to the cover's
    own center. A branch is cut when no vertex could still be unburned at
    round ``k`` or when the remaining balls are too small for the uncovered
    targets. Returns ``None`` when ``budget`` nodes are spent without success.
    """
    try:
        dist = distance_matrix(host)
    except ResourceLimitError:
        return None
    verts = list(host.vertices())
    index = {v: i for i, v in enumerate(verts)}
    reach = dist[:, [index[w] for w in target.resolve(host)]]
    home = [index[c] for c in centers]
    # largest number of targets any single ball of radius s can hold
    cap = [int((reach <= s).sum(axis=1).max()) for s in range(k)]
    room = np.cumsum(cap)  # room[r] = capacity of radii 0..r together
    never = 2 * k + int(dist.max()) + 1
    chosen: list[int] = []
    nodes = 0

    def dfs(i: int, arrival, uncovered) -> bool:
        nonlocal nodes
        if i > k:
            return not uncovered.any()
        nodes += 1
        if nodes > budget:
            return False
        r = k - i
        legal = np.flatnonzero(arrival >= i)
        gain = (reach[np.ix_(legal, np.flatnonzero(uncovered))] <= r).sum(axis=1)
        order = sorted(range(len(legal)), key=lambda a: (legal[a] != home[i - 1], -gain[a], dist[home[i - 1], legal[a]]))
        for a in order[:width]:
            v = int(legal[a])
            left = uncovered & (reach[v] > r)
            if left.any() and (r == 0 or room[r - 1] < left.sum()):
                continue
            after = np.minimum(arrival, i + dist[v])
            if i < k and not (after >= k).any():
                continue
            chosen.append(v)
            if dfs(i + 1, after, left):
                return True
            chosen.pop()
            if nodes > budget:
                return False
        return False

    start = np.full(len(verts), never, dtype=np.int64)
    if dfs(1, start, np.ones(reach.shape[1], dtype=bool)):
        return [verts[v] for v in chosen]
    return None


def _redundant_balls(host, centers, k: int, target: TargetSet) -> list[bool]:
    want = target.resolve(host)
    hits = [[j for j, w in enumerate(want) if host.distance(c, w) <= k - 1 - i] for i, c in enumerate(centers)]
    count = [0] * len(want)
    for h in hits:
        for j in h:
            count[j] += 1
    spare = [False] * k
    for i, h in enumerate(hits):
        if all(count[j] >= 2 for j in h):
            spare[i] = True
            for j in h:
                count[j] -= 1
    return spare


def _arrival_times(host, ignited) -> dict:
    """Round in which the fire from ``ignited`` first reaches each vertex."""
    by_round: dict[int, list] = {}
    for j, x in ignited:
        by_round.setdefault(j, []).append(x)
    arrival: dict = {}
    layer: list = []
    t = min(by_round)
    while layer or any(r >= t for r in by_round):
        nxt = [w for v in layer for w in host.neighbors(v) if w not in arrival]
        nxt += [x for x in by_round.get(t, ()) if x not in arrival]
        fresh = []
        for v in nxt:
            if v not in arrival:
                arrival[v] = t
                fresh.append(v)
        layer = fresh
        t += 1
    return arrival


def _earliest_unburned(host, ignited, center, t):
    arrival = _arrival_times(host, ignited)
    never = float("inf")
    best, best_key = None, None
    for v in host.vertices():
        when = arrival.get(v, never)
        if when < t:
            continue
        key = (when, host.distance(center, v), v)
        if best_key is None or key < best_key:
            best, best_key = v, key
    return best


@dataclass
class ScaleReport:
    ok: bool
    rounds: int
    claimed_rounds: int
    path_rounds: int
    flood_radius: int
    violations: list[dict]
    elapsed: float

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "rounds": self.rounds,
            "claimed_rounds": self.claimed_rounds,
            "path_rounds": self.path_rounds,
            "flood_radius": self.flood_radius,
            "violations": self.violations,
            "elapsed_s": round(self.elapsed, 6),
        }


def max_row_distance(m: int, heights) -> tuple[int, int]:
    """Largest distance from a row of an m-row grid to the nearest of ``heights``, and a row attaining it."""
    hs = sorted(set(heights))
    best, row = hs[0] - 1, 1
    if m - hs[-1] > best:
        best, row = m - hs[-1], m
    for a, b in zip(hs, hs[1:]):
        if (b - a) // 2 > best:
            best, row = (b - a) // 2, a + (b - a) // 2
    return best, row


def validate_strategy_at_scale(g: GridSpec, strategy, claimed_rounds: int | None = None) -> ScaleReport:
    """Check a strategy schedule on an implicit grid without per-vertex state.

    Checks: every source unburned when chosen ("strict"), the balls after the
    path phase cover each designated row ("a"), every row lies within the
    declared flood radius of a designated row ("b"), and path rounds plus the
    real flood distance fit in ``claimed_rounds`` ("c").
    """
    t0 = time.perf_counter()
    claimed = strategy.claimed_rounds if claimed_rounds is None else claimed_rounds
    sources = list(strategy.schedule.sources)
    K = strategy.path_rounds
    violations = []
    for s in sources:
        if not g.contains(s):
            violations.append({"check": "input", "message": f"source {tuple(s)} outside grid", "witness": list(s)})
    if violations:
        return ScaleReport(False, -1, claimed, K, strategy.flood_radius, violations, time.perf_counter() - t0)
    if len(sources) > K:
        violations.append({"check": "c", "message": f"{len(sources)} sources but {K} path rounds", "witness": K})
    bad = first_strict_violation(sources)
    if bad is not None:
        violations.append(
            {"check": "strict", "message": f"source {bad} already burned when chosen", "witness": list(sources[bad - 1])}
        )
    radii = [K - i for i in range(1, len(sources) + 1)]
    for h in strategy.paths:
        gap = first_gap(g, sources, radii, h)
        if gap is not None:
            violations.append(
                {"check": "a", "message": f"row {h} column {gap} unburned after round {K}", "witness": [h, gap]}
            )
    flood, row = max_row_distance(g.m, strategy.paths)
    if flood > strategy.flood_radius:
        violations.append(
            {"check": "b", "message": f"row {row} is {flood} > {strategy.flood_radius} from every path", "witness": row}
        )
    rounds = K + flood
    if rounds > claimed:
        violations.append(
            {"check": "c", "message": f"needs {rounds} rounds, claimed {claimed}", "witness": rounds}
        )
    return ScaleReport(not violations, rounds, claimed, K, strategy.flood_radius, violations, time.perf_counter() - t0)


def _fire_intervals(g: GridSpec, sources, radii, row: int):
    pts = np.asarray(sources, dtype=np.int64).reshape(-1, 2)
    w = np.asarray(radii, dtype=np.int64) - np.abs(pts[:, 0] - row)
    keep = w >= 0
    lo = np.maximum(1, pts[keep, 1] - w[keep])
    hi = np.minimum(g.n, pts[keep, 1] + w[keep])
    order = np.argsort(lo, kind="stable")
    return lo[order], hi[order]


def _nearest_free_column(g: GridSpec, lo, hi, col: int) -> int | None:
    """Column of the row closest to ``col`` outside every interval, or None."""
    if lo.size == 0:
        return col
    reach = np.maximum.accumulate(hi)
    # free stretches: before the first interval, between merged runs, after the last
    starts = np.concatenate(([1], reach + 1))
    ends = np.concatenate((lo - 1, [g.n]))
    ok = starts <= ends
    starts, ends = starts[ok], ends[ok]
    if starts.size == 0:
        return None
    clipped = np.clip(col, starts, ends)
    best = int(np.argmin(np.abs(clipped - col) * 2 + (clipped > col)))
    return int(clipped[best])


def _grid_free_vertex(g: GridSpec, earlier, t: int, near) -> Vertex | None:
    """Grid vertex near ``near`` that is unburned at the start of round ``t``.

    ``earlier`` holds the sources of rounds 1..t-1. Rows are scanned outward
    from ``near``'s row; vertices still unburned after round t are preferred.
    """
    if not earlier:
        return Vertex(*near)
    for after in (t, t - 1):
        radii = [after - j for j in range(1, len(earlier) + 1)]
        for dr in range(g.m):
            for row in dict.fromkeys((near[0] - dr, near[0] + dr)):
                if not 1 <= row <= g.m:
                    continue
                lo, hi = _fire_intervals(g, earlier, radii, row)
                col = _nearest_free_column(g, lo, hi, near[1])
                if col is not None:
                    return Vertex(row, col)
    return None


def repair_grid_sources(g: GridSpec, centers) -> list[Vertex]:
    """Grid-only, implicit version of :func:`repair_cover_to_schedule`.

    Finds violations with :func:`first_strict_violation` and swaps each bad
    center for a free vertex on the nearest row that has one, so it runs
    without per-vertex state on huge grids.
    """
    sources = [Vertex(*c) for c in centers]
    while True:
        bad = first_strict_violation(sources)
        if bad is None:
            return sources
        sub = _grid_free_vertex(g, sources[: bad - 1], bad, sources[bad - 1])
        if sub is None:
            return sources[: bad - 1]
        sources[bad - 1] = sub
