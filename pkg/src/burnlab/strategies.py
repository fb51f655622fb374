"""Explicit burning schedules for fences, with per-source metadata.

Every strategy has two phases: burn a few horizontal paths (the designated
rows) within ``path_rounds`` rounds, then let the fire flood outward for
``flood_radius`` more rounds. Sources are first laid out as a cover and then
passed through :func:`repair_grid_sources`, so the returned sequences are
strictly valid; each one is still re-checked by simulation or by
:func:`validate_strategy_at_scale`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import isqrt

from .bounds import ell_upper_rows
from .grid import GridSpec, Vertex
from .sim import BurningSchedule, max_row_distance, repair_grid_sources


class BranchInapplicableError(ValueError):
    """The requested construction is outside the regime it is defined for."""


@dataclass
class StrategySchedule:
    name: str
    grid: GridSpec
    schedule: BurningSchedule
    path_rounds: int
    flood_radius: int
    paths: tuple[int, ...]
    phases: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def claimed_rounds(self) -> int:
        return self.path_rounds + self.flood_radius

    def to_dict(self) -> dict:
        out = self.schedule.to_dict()
        out.update(
            strategy=self.name,
            claimed_rounds=self.claimed_rounds,
            path_rounds=self.path_rounds,
            flood_radius=self.flood_radius,
            paths=list(self.paths),
            phases=self.phases,
            notes=self.notes,
        )
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def ceil_sqrt(x: int) -> int:
    return 0 if x <= 0 else isqrt(x - 1) + 1


def tile_pieces(pieces, rounds: int):
    """Cover row segments with balls of radii 0, 1, ..., rounds-1.

    ``pieces`` is a list of ``(row, lo, hi)``. The smallest ball goes to the
    right end of the last piece and each next-larger ball continues leftward,
    moving to the previous piece when one is finished; a ball that does not
    fit is centered so it still reaches the piece's left end. Returns a list
    indexed by source (index 0 has radius ``rounds-1``) of
    ``(center, row, lo, hi)`` or None for sources left unused, or None if the
    balls run out first.
    """
    plan = [None] * rounds
    todo = [list(p) for p in pieces if p[1] <= p[2]]
    src = rounds - 1
    r = 0
    while todo:
        if src < 0:
            return None
        row, lo, hi = todo[-1]
        if 2 * r + 1 <= hi - lo + 1:
            center = hi - r
            plan[src] = (Vertex(row, center), row, hi - 2 * r, hi)
            todo[-1][2] = hi - 2 * r - 1
            if todo[-1][2] < lo:
                todo.pop()
        else:
            center = max(lo, hi - r)
            plan[src] = (Vertex(row, center), row, lo, hi)
            todo.pop()
        src -= 1
        r += 1
    return plan


def min_tiling(pieces, start: int = 1):
    """Fewest rounds for which :func:`tile_pieces` succeeds, with its plan."""
    total = sum(hi - lo + 1 for _, lo, hi in pieces)
    k = max(start, ceil_sqrt(total), 1)
    while True:
        plan = tile_pieces(pieces, k)
        if plan is not None:
            return k, plan
        k += 1


def _finish(name, g, centers, phases, path_rounds, paths, notes=None) -> StrategySchedule:
    sources = repair_grid_sources(g, centers)
    notes = list(notes or [])
    for i, (a, b) in enumerate(zip(centers, sources)):
        if a != b:
            phases[i]["substituted"] = list(b)
    if len(sources) < len(centers):
        notes.append(f"dropped {len(centers) - len(sources)} ignitions: no unburned vertex left")
    flood, _ = max_row_distance(g.m, paths)
    return StrategySchedule(
        name, g, BurningSchedule(sources, g), path_rounds, flood, tuple(sorted(set(paths))), phases, notes
    )


def _tiled_sources(plan, phase: str, offset: int, rounds: int, spare_at):
    centers, phases = [], []
    for i, entry in enumerate(plan):
        radius = rounds - 1 - (offset + i)
        if entry is None:
            # not needed for coverage; repair moves it to an unburned vertex
            centers.append(spare_at)
            phases.append({"phase": "spare", "radius": radius})
        else:
            center, row, lo, hi = entry
            centers.append(center)
            phases.append({"phase": phase, "radius": radius, "intervals": {str(row): [lo, hi]}})
    return centers, phases


def path_strategy(n: int) -> StrategySchedule:
    """ceil(sqrt(n)) sources burning the path P_n (as the grid 1 x n)."""
    if n < 1:
        raise ValueError("n must be positive")
    g = GridSpec(1, n)
    k, plan = min_tiling([(1, 1, n)])
    centers, phases = _tiled_sources(plan, "path", 0, k, Vertex(1, 1))
    return _finish("path", g, centers, phases, k, [1])


def multi_path_heights(m: int, n: int) -> tuple[int, list[int], int]:
    ell = ell_upper_rows(m, n)
    s = ceil_sqrt(ell * n)
    heights = sorted({min(m, max(1, (2 * s + 1) * i + s + 1)) for i in range(ell)})
    return ell, heights, s


def multi_path_strategy(m: int, n: int) -> StrategySchedule:
    """Burn ell evenly spaced rows as a path forest, then flood.

    ell = ceil((c/2)^(2/3)) and s = ceil(sqrt(ell*n)); row i sits at height
    (2s+1)i + s + 1, clamped into the grid.
    """
    g = GridSpec(m, n)
    ell, heights, s = multi_path_heights(m, n)
    notes = []
    if len(heights) < ell:
        notes.append(f"only {len(heights)} distinct rows fit for ell={ell}")
    k, plan = min_tiling([(h, 1, n) for h in heights], start=ceil_sqrt(ell * n))
    centers, phases = _tiled_sources(plan, "path", 0, k, Vertex(heights[0], 1))
    out = _finish("multi_path", g, centers, phases, k, heights, notes)
    if out.flood_radius > s:
        out.notes.append(f"flood radius {out.flood_radius} exceeds s={s}")
    out.notes.append(f"ell={ell} s={s}")
    return out


def top_bottom_rounds_formula(m: int, n: int) -> int:
    """Least integer b >= (m + sqrt(4n - m^2 - 2m + 1) + 1) / 2."""
    disc = 4 * n - m * m - 2 * m + 1
    if disc < 0:
        raise BranchInapplicableError(f"4n - m^2 - 2m + 1 < 0 for m={m}, n={n}")
    b = (m + 1 + isqrt(disc)) // 2
    while not (2 * b - m - 1 >= 0 and (2 * b - m - 1) ** 2 >= disc):
        b += 1
    while b > 0 and 2 * (b - 1) - m - 1 >= 0 and (2 * (b - 1) - m - 1) ** 2 >= disc:
        b -= 1
    return b


def _alternating(m: int, n: int, b: int, count: int):
    """The zig-zag phase: first ball at (1, b), radius b-1; each next ball on
    the other row, 2t - m + 1 columns further right, one radius smaller."""
    out = []
    row, col, t = 1, b, b - 1
    # stop before a ball would be cut off by the right end of the rows
    while len(out) < count and t >= max(0, m - 1) and col + t <= n:
        out.append((row, col, t))
        row, col, t = (m if row == 1 else 1), col + 2 * t - m + 1, t - 1
    return out


def _row_gaps(n: int, intervals) -> list[tuple[int, int]]:
    gaps = []
    nxt = 1
    for lo, hi in sorted(intervals):
        if lo > nxt:
            gaps.append((nxt, lo - 1))
        nxt = max(nxt, hi + 1)
    if nxt <= n:
        gaps.append((nxt, n))
    return gaps


def _top_bottom_plan(m: int, n: int, b: int):
    """Cover rows 1 and m of an m x n grid with radii b-1..0, or None."""
    if m == 1:
        plan = tile_pieces([(1, 1, n)], b)
        return None if plan is None else ([], plan)
    most = max(0, b - m + 1)
    alt_full = _alternating(m, n, b, most)
    for count in (len(alt_full), len(alt_full) - 1):
        if count < 0:
            continue
        alt = alt_full[:count]
        cover = {1: [], m: []}
        for row, col, t in alt:
            for target in (1, m):
                w = t - abs(row - target)
                if w >= 0:
                    cover[target].append((max(1, col - w), min(n, col + w)))
        pieces = [(row, lo, hi) for row in (m, 1) for lo, hi in _row_gaps(n, cover[row])]
        rest = b - count
        orders = itertools.permutations(pieces) if len(pieces) <= 4 else [pieces]
        for order in orders:
            plan = tile_pieces(list(order), rest)
            if plan is not None:
                return alt, plan
    return None


def top_bottom_strategy(m: int, n: int, row_offset: int = 0, host_rows: int | None = None) -> StrategySchedule:
    """Burn the top and bottom rows of an m x n fence together.

    Starts from the smallest b allowed by the closed form and raises b until
    the zig-zag phase plus a tiling of the leftover row segments fits in b
    rounds. With ``row_offset``/``host_rows`` the fence is the band of rows
    ``row_offset+1 .. row_offset+m`` inside a taller host grid.
    """
    if m < 1 or n < 1:
        raise ValueError("need m, n >= 1")
    if m > isqrt(2 * n):
        raise BranchInapplicableError(f"top/bottom construction needs m <= floor(sqrt(2n)); m={m}, n={n}")
    host_rows = m if host_rows is None else host_rows
    g = GridSpec(host_rows, n)
    b0 = top_bottom_rounds_formula(m, n)
    b = max(b0, 1)
    while True:
        got = _top_bottom_plan(m, n, b)
        if got is not None:
            break
        b += 1
    alt, plan = got
    centers, phases = [], []
    for i, (row, col, t) in enumerate(alt):
        centers.append(Vertex(row + row_offset, col))
        ivs = {}
        for target in (1, m):
            w = t - abs(row - target)
            if w >= 0:
                ivs[str(target + row_offset)] = [max(1, col - w), min(n, col + w)]
        phases.append({"phase": "alternating", "radius": t, "intervals": ivs})
    shifted = [
        None if e is None else (Vertex(e[0].row + row_offset, e[0].col), e[1] + row_offset, e[2], e[3]) for e in plan
    ]
    spare = Vertex(row_offset + 1, 1)
    more_c, more_p = _tiled_sources(shifted, "leftover", len(alt), b, spare)
    centers += more_c
    phases += more_p
    rows = sorted({row_offset + 1, row_offset + m})
    notes = [f"formula b={b0}", f"used b={b}", f"alternating sources={len(alt)}"]
    return _finish("top_bottom", g, centers, phases, b, rows, notes)


def composed_small_c_strategy(m: int, n: int) -> StrategySchedule:
    """Top/bottom burning of an inner band of rows, then flood the rest.

    The band spans rows floor(m/4) .. floor(3m/4)-1 (clamped to >= 1), so it
    has about half the height and the inner fence parameter is c/2.
    """
    if m < 1 or n < 1:
        raise ValueError("need m, n >= 1")
    if m > isqrt(8 * n):
        raise BranchInapplicableError(f"composed construction needs m <= floor(2 sqrt(2n)); m={m}, n={n}")
    if m == 1:
        out = path_strategy(n)
        out.name = "composed_small_c"
        out.notes.append("m=1: plain path strategy")
        return out
    lo = max(1, m // 4)
    hi = max(lo, 3 * m // 4 - 1)
    if m < 4:
        lo, hi = 1, m
    inner = hi - lo + 1
    if inner > isqrt(2 * n):
        raise BranchInapplicableError(f"inner band of {inner} rows exceeds floor(sqrt(2n)) for n={n}")
    out = top_bottom_strategy(inner, n, row_offset=lo - 1, host_rows=m)
    out.name = "composed_small_c"
    out.notes.append(f"band rows {lo}..{hi}")
    return out


STRATEGIES = {
    "path": lambda m, n: path_strategy(n) if m == 1 else multi_path_strategy(m, n),
    "multi_path": multi_path_strategy,
    "top_bottom": top_bottom_strategy,
    "composed_small_c": composed_small_c_strategy,
}


def best_strategy(m: int, n: int) -> StrategySchedule:
    """The applicable strategy with the fewest claimed rounds (ties: name order)."""
    found = []
    for name in sorted(STRATEGIES):
        try:
            found.append(STRATEGIES[name](m, n))
        except BranchInapplicableError:
            continue
    return min(found, key=lambda s: (s.claimed_rounds, s.name))
