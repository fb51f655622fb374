"""Exact burning numbers by iterative-deepening covering search.

``b(G, S)`` is the least ``k`` such that balls of radii ``k-1, ..., 0``
(centers anywhere in G, repeats allowed) cover ``S``. For each ``k`` the search
fixes the largest ball first, then repeatedly takes the uncovered target
vertex farthest from the chosen centers and branches on which remaining
radius, and which center, covers it.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .grid import GridSpec, HorizontalPathSpec, ResourceLimitError, distance_matrix
from .sim import BurningSchedule, CoverCertificate, TargetSet, _target, repair_cover_to_schedule, simulate


@dataclass
class SolverConfig:
    max_horizon: int = 64
    node_budget: int = 2_000_000
    symmetry_reduction: bool = True
    thread_count_hint: int = 1
    vertex_cap: int = 2_000
    memo_limit: int = 1_000_000

    def __post_init__(self) -> None:
        for name in ("max_horizon", "node_budget", "thread_count_hint", "vertex_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


@dataclass
class SolveResult:
    value: int | None
    certificate: BurningSchedule | None
    lower: int
    upper: int | None
    nodes: int
    elapsed: float
    per_horizon: dict = field(default_factory=dict)

    @property
    def solved(self) -> bool:
        return self.value is not None

    def to_dict(self) -> dict:
        cert = None
        if self.certificate is not None:
            cert = [list(s) if isinstance(s, tuple) else s for s in self.certificate.sources]
        return {
            "status": "solved" if self.solved else "inconclusive",
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "certificate": cert,
            "stats": {
                "nodes": self.nodes,
                "elapsed_s": round(self.elapsed, 6),
                "nodes_per_horizon": {str(k): v for k, v in sorted(self.per_horizon.items())},
            },
        }


class _Budget(Exception):
    pass


def _pack(bools: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bools.astype(bool), bitorder="little").tobytes(), "little")


class _Problem:
    """Precomputed distances and ball bitmasks over the target vertices."""

    def __init__(self, host, target: TargetSet, cap: int):
        self.host = host
        self.target = target
        self.verts = list(host.vertices())
        if len(self.verts) > cap:
            raise ResourceLimitError(f"host has {len(self.verts)} vertices, solver cap is {cap}")
        index = {v: i for i, v in enumerate(self.verts)}
        self.targets = [index[v] for v in target.resolve(host)]
        self.dist = distance_matrix(host, cap)
        self.tdist = self.dist[:, self.targets]
        self.full = (1 << len(self.targets)) - 1
        self._masks: dict[int, list[int]] = {}
        self._maxcov: dict[int, int] = {}

    def masks(self, r: int) -> list[int]:
        got = self._masks.get(r)
        if got is None:
            within = self.tdist <= r
            got = self._masks[r] = [_pack(row) for row in within]
            self._maxcov[r] = max(m.bit_count() for m in got)
        return got

    def maxcov(self, r: int) -> int:
        self.masks(r)
        return self._maxcov[r]

    def symmetries(self) -> list[np.ndarray]:
        """Vertex permutations of the rectangle's dihedral group that fix the target set."""
        g = self.host
        if not isinstance(g, GridSpec):
            return []
        idx = np.arange(g.num_vertices)
        r, c = idx // g.n, idx % g.n
        maps = [
            (g.m - 1 - r) * g.n + c,
            r * g.n + (g.n - 1 - c),
            (g.m - 1 - r) * g.n + (g.n - 1 - c),
        ]
        if g.m == g.n:
            maps += [
                c * g.n + r,
                (g.n - 1 - c) * g.n + (g.m - 1 - r),
                c * g.n + (g.m - 1 - r),
                (g.n - 1 - c) * g.n + r,
            ]
        tset = set(self.targets)
        return [p for p in maps if {int(p[t]) for t in self.targets} == tset]


def _undominated(cands: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Drop centers whose (masked) coverage is a subset of another's.

    ``cands`` holds ``(vertex, mask)``; among equal masks the first is kept.
    Result is ordered by coverage size, largest first, then vertex order.
    """
    cands = sorted(cands, key=lambda vm: (-vm[1].bit_count(), vm[0]))
    kept: list[tuple[int, int]] = []
    for v, m in cands:
        if m == 0:
            continue
        if any(m | km == km for _, km in kept):
            continue
        kept.append((v, m))
    return kept


class _Search:
    def __init__(self, prob: _Problem, budget: int, memo_limit: int):
        self.prob = prob
        self.budget = budget
        self.nodes = 0
        self.memo: set = set()
        self.memo_limit = memo_limit

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _Budget

    def run(self, uncovered: int, radii: tuple[int, ...], chosen: list, mind: np.ndarray):
        """Return a list of ``(radius, vertex)`` covering ``uncovered`` or None."""
        if uncovered == 0:
            return []
        if not radii:
            return None
        self.tick()
        key = (uncovered, radii)
        if key in self.memo:
            return None
        prob = self.prob
        need = uncovered.bit_count()
        if sum(prob.maxcov(r) for r in radii) < need:
            return None
        if len(radii) > 1:
            cap = 0
            for r in radii:
                cap += max((m & uncovered).bit_count() for m in prob.masks(r))
            if cap < need:
                self._remember(key)
                return None
        # farthest uncovered target from the chosen centers, lowest index on ties
        bits = _bits(uncovered)
        u = bits[int(np.argmax(mind[bits]))] if chosen else bits[0]
        col = prob.tdist[:, u]
        for r in radii:
            masks = prob.masks(r)
            cands = [(int(v), masks[v] & uncovered) for v in np.nonzero(col <= r)[0]]
            rest = tuple(x for x in radii if x != r)
            for v, m in _undominated(cands):
                sub = self.run(uncovered & ~m, rest, chosen + [(r, v)], np.minimum(mind, prob.tdist[v]))
                if sub is not None:
                    return [(r, v)] + sub
        self._remember(key)
        return None

    def _remember(self, key) -> None:
        if len(self.memo) < self.memo_limit:
            self.memo.add(key)


def _bits(x: int) -> list[int]:
    out = []
    i = 0
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return out


def _first_centers(prob: _Problem, k: int, symmetry: bool) -> list[tuple[int, int]]:
    masks = prob.masks(k - 1)
    verts = range(len(prob.verts))
    if symmetry:
        # keep one vertex per orbit (its smallest index), then prune dominated
        perms = prob.symmetries()
        verts = [v for v in verts if all(int(p[v]) >= v for p in perms)]
    return _undominated([(v, masks[v] & prob.full) for v in verts])


def _branch(prob: _Problem, k: int, v: int, m: int, budget: int, memo_limit: int):
    search = _Search(prob, budget, memo_limit)
    try:
        rest = search.run(prob.full & ~m, tuple(range(k - 2, -1, -1)), [(k - 1, v)], prob.tdist[v].copy())
    except _Budget:
        return None, search.nodes, True
    return (None if rest is None else [(k - 1, v)] + rest), search.nodes, False


_WORKER: dict = {}


def _worker_init(prob: _Problem) -> None:
    _WORKER["prob"] = prob


def _worker_branch(args):
    k, v, m, budget, memo_limit = args
    return _branch(_WORKER["prob"], k, v, m, budget, memo_limit)


def _solve_horizon(prob: _Problem, k: int, cfg: SolverConfig, remaining: int, pool):
    """Search horizon k: returns (cover or None, nodes used, exhausted budget?)."""
    if sum(prob.maxcov(r) for r in range(k)) < len(prob.targets):
        return None, 1, False
    firsts = _first_centers(prob, k, cfg.symmetry_reduction)
    if pool is None:
        nodes = 0
        for v, m in firsts:
            cover, used, out = _branch(prob, k, v, m, remaining - nodes, cfg.memo_limit)
            nodes += used
            if out:
                return None, nodes, True
            if cover is not None:
                return cover, nodes, False
        return None, nodes, False
    jobs = [(k, v, m, remaining, cfg.memo_limit) for v, m in firsts]
    results = list(pool.map(_worker_branch, jobs))
    nodes = sum(used for _, used, _ in results)
    # earliest first center in the fixed order wins, whatever finished first
    for cover, _, out in results:
        if cover is not None:
            return cover, nodes, False
        if out:
            return None, nodes, True
    return None, nodes, nodes > remaining


def _cover_to_certificate(prob: _Problem, k: int, cover) -> CoverCertificate:
    by_radius = {r: prob.verts[v] for r, v in cover}
    filler = prob.verts[cover[0][1]]
    centers = [by_radius.get(r, filler) for r in range(k - 1, -1, -1)]
    return CoverCertificate(centers, k)


def _greedy_upper(prob: _Problem, start: int):
    k = max(1, start)
    while True:
        uncovered = prob.full
        cover = []
        for r in range(k - 1, -1, -1):
            masks = prob.masks(r)
            best = max(range(len(masks)), key=lambda v: ((masks[v] & uncovered).bit_count(), -v))
            cover.append((r, best))
            uncovered &= ~masks[best]
        if uncovered == 0:
            return k, cover
        k += 1


def burning_number(host, target=None, cfg: SolverConfig | None = None) -> SolveResult:
    """Exact ``b(host, target)``; an inconclusive result carries ``lower``/``upper``."""
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    target = _target(target)
    prob = _Problem(host, target, cfg.vertex_cap)
    nodes = 0
    per = {}
    pool = None
    if cfg.thread_count_hint > 1:
        pool = ProcessPoolExecutor(max_workers=cfg.thread_count_hint, initializer=_worker_init, initargs=(prob,))
    try:
        for k in range(1, cfg.max_horizon + 1):
            cover, used, out = _solve_horizon(prob, k, cfg, cfg.node_budget - nodes, pool)
            nodes += used
            per[k] = used
            if out:
                return _inconclusive(prob, k, nodes, per, t0)
            if cover is not None:
                cert = repair_cover_to_schedule(host, _cover_to_certificate(prob, k, cover), target)
                trace = simulate(host, cert, target, mode="strict")
                assert trace.target_burned and len(cert) == k, "certificate failed to validate"
                return SolveResult(k, cert, k, k, nodes, time.perf_counter() - t0, per)
        return _inconclusive(prob, cfg.max_horizon + 1, nodes, per, t0)
    finally:
        if pool is not None:
            pool.shutdown()


def _inconclusive(prob: _Problem, lower: int, nodes: int, per: dict, t0: float) -> SolveResult:
    k, cover = _greedy_upper(prob, lower)
    cert = repair_cover_to_schedule(prob.host, _cover_to_certificate(prob, k, cover), prob.target)
    # a dropped ignition means every vertex burned within len(cert) rounds
    return SolveResult(None, cert, lower, min(k, len(cert)), nodes, time.perf_counter() - t0, per)


def partial_burning_number(host, paths, cfg: SolverConfig | None = None) -> SolveResult:
    heights = [p.height if isinstance(p, HorizontalPathSpec) else int(p) for p in paths]
    return burning_number(host, TargetSet.rows(*heights), cfg)


def brute_force_oracle(host, target, k: int, max_vertices: int = 30, small_k_vertices: int = 200) -> bool:
    """Does some k-tuple of centers cover the target with radii k-1, ..., 0?

    Plain enumeration over all center tuples with its own BFS; shares nothing
    with the search above.
    """
    verts = list(host.vertices())
    if not (len(verts) <= max_vertices or (k <= 3 and len(verts) <= small_k_vertices)):
        raise ResourceLimitError(f"oracle refuses |V|={len(verts)} with k={k}")
    want = _target(target).resolve(host)
    dist = {}
    for s in verts:
        d = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in host.neighbors(u):
                if w not in d:
                    d[w] = d[u] + 1
                    queue.append(w)
        dist[s] = d
    for centers in itertools.product(verts, repeat=k):
        if all(
            any(dist[c].get(w, len(verts) + k) <= k - 1 - i for i, c in enumerate(centers)) for w in want
        ):
            return True
    return False


def oracle_burning_number(host, target=None, max_k: int = 8, **guard) -> int:
    for k in range(1, max_k + 1):
        if brute_force_oracle(host, target, k, **guard):
            return k
    raise ResourceLimitError(f"no cover found up to k={max_k}")
