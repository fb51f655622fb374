"""Experiment tables: key=value configs, cached cells, CSV and SVG output."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .bounds import finite_two_path_lower_bound, lower_bound, prior_cartesian, rows_for, upper_bound
from .grid import GridSpec
from .solver import SolverConfig, burning_number
from .strategies import STRATEGIES, BranchInapplicableError

ARTIFACT_VERSION = "0.1.0"
DEFAULT_STRATEGIES = ("multi_path", "composed_small_c", "top_bottom")


class ConfigError(ValueError):
    pass


def parse_int(text: str) -> int:
    """Integers written plainly, as ``10^6`` or as ``1e6``."""
    s = text.strip().replace("_", "")
    if "^" in s:
        base, exp = s.split("^", 1)
        return int(base) ** int(exp)
    if "e" in s.lower():
        val = Fraction(s)
        if val.denominator != 1:
            raise ValueError(f"not an integer: {text!r}")
        return int(val)
    return int(s)


def parse_rational(text: str) -> Fraction:
    val = Fraction(text.strip())
    if val <= 0:
        raise ValueError(f"must be positive: {text!r}")
    return val


@dataclass
class ExperimentConfig:
    c_values: list[Fraction]
    n_values: list[int]
    strategies: list[str] = field(default_factory=lambda: list(DEFAULT_STRATEGIES))
    exact_max_vertices: int = 0
    exact_budget: int = 2_000_000
    csv_path: str | None = None
    svg_path: str | None = None
    cache_dir: str | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.c_values or not self.n_values:
            raise ConfigError("need at least one c and one n")
        if any(n < 1 for n in self.n_values):
            raise ConfigError("n values must be >= 1")
        unknown = [s for s in self.strategies if s not in STRATEGIES]
        if unknown:
            raise ConfigError(f"unknown strategies: {', '.join(unknown)}")

    @classmethod
    def parse(cls, text: str) -> "ExperimentConfig":
        """Flat ``key = value`` lines; list keys may repeat or hold commas."""
        lists = {"c": [], "n": [], "strategy": []}
        scalars: dict = {}
        parsers = {
            "exact_max_vertices": int,
            "exact_budget": parse_int,
            "csv": str,
            "svg": str,
            "cache": str,
            "seed": int,
        }
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            try:
                if key in lists:
                    for item in filter(None, (v.strip() for v in value.split(","))):
                        if key == "c":
                            lists[key].append(parse_rational(item))
                        elif key == "n":
                            lists[key].append(parse_int(item))
                        else:
                            lists[key].append(item)
                elif key in parsers:
                    scalars[key] = parsers[key](value)
                else:
                    raise ConfigError(f"unknown key {key!r}")
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"line {lineno}: {exc}") from None
        return cls(
            c_values=lists["c"],
            n_values=lists["n"],
            strategies=lists["strategy"] or list(DEFAULT_STRATEGIES),
            exact_max_vertices=scalars.get("exact_max_vertices", 0),
            exact_budget=scalars.get("exact_budget", 2_000_000),
            csv_path=scalars.get("csv"),
            svg_path=scalars.get("svg"),
            cache_dir=scalars.get("cache"),
            seed=scalars.get("seed", 0),
        )

    def columns(self) -> list[str]:
        return (
            ["m", "n", "c", "finite_lower", "asym_lower", "exact"]
            + [f"rounds_{s}" for s in self.strategies]
            + ["formula_upper", "prior_reference"]
        )


@dataclass
class ResultRow:
    m: int
    n: int
    c: Fraction
    finite_lower: int
    asym_lower: float
    exact: int | None
    strategy_rounds: dict
    formula_upper: float
    prior_reference: float
    timings: dict = field(default_factory=dict)

    def check(self) -> None:
        if self.exact is None:
            return
        rounds = [r for r in self.strategy_rounds.values() if r is not None]
        if self.finite_lower > self.exact or (rounds and self.exact > min(rounds)):
            raise AssertionError(f"sandwich violated at m={self.m}, n={self.n}")

    def cells(self, strategies) -> list[str]:
        def num(x):
            return "" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.4f}"

        def opt(x):
            return "" if x is None else str(x)

        return (
            [str(self.m), str(self.n), num(float(self.c)), str(self.finite_lower), num(self.asym_lower), opt(self.exact)]
            + [opt(self.strategy_rounds.get(s)) for s in strategies]
            + [num(self.formula_upper), num(self.prior_reference)]
        )


class Cache:
    """JSON files named by a hash of (operation, parameters, version)."""

    def __init__(self, directory: str | os.PathLike | None):
        self.dir = Path(directory) if directory else None
        if self.dir is not None:
            self.dir.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key(op: str, params: dict) -> str:
        blob = json.dumps({"op": op, "params": params, "version": ARTIFACT_VERSION}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def get(self, op: str, params: dict):
        if self.dir is None:
            return None
        path = self.dir / f"{self.key(op, params)}.json"
        if not path.exists():
            return None
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError:
            return None  # a torn write; recompute

    def put(self, op: str, params: dict, value) -> None:
        if self.dir is None:
            return
        path = self.dir / f"{self.key(op, params)}.json"
        tmp = path.with_suffix(f".{os.getpid()}.tmp")
        tmp.write_text(json.dumps(value, sort_keys=True))
        tmp.replace(path)


def compute_cell(c: Fraction, n: int, cfg: ExperimentConfig, threads: int = 1) -> dict:
    m = rows_for(c, n)
    out = {"m": m, "n": n, "c": str(c), "rounds": {}}
    out["finite_lower"] = finite_two_path_lower_bound(m, n)
    out["asym_lower"] = lower_bound(c, n)[0]
    out["formula_upper"] = upper_bound(c, n)[0]
    out["prior_reference"] = prior_cartesian(m, n)
    for name in cfg.strategies:
        try:
            out["rounds"][name] = STRATEGIES[name](m, n).claimed_rounds
        except BranchInapplicableError:
            out["rounds"][name] = None
    out["exact"] = None
    if m * n <= cfg.exact_max_vertices:
        res = burning_number(GridSpec(m, n), None, SolverConfig(node_budget=cfg.exact_budget, thread_count_hint=threads))
        out["exact"] = res.value
    return out


def run_table(cfg: ExperimentConfig, threads: int = 1, cache_dir: str | None = None) -> list[ResultRow]:
    """One row per (c, n), computed concurrently; order is fixed by sorting."""
    cache = Cache(cache_dir if cache_dir is not None else cfg.cache_dir)
    cells = sorted({(c, n) for c in cfg.c_values for n in cfg.n_values})

    def work(cell):
        c, n = cell
        params = {
            "c": str(c),
            "n": n,
            "strategies": sorted(cfg.strategies),
            "exact_max_vertices": cfg.exact_max_vertices,
            "exact_budget": cfg.exact_budget,
        }
        hit = cache.get("cell", params)
        if hit is None:
            hit = compute_cell(c, n, cfg)
            cache.put("cell", params, hit)
        return hit

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, cells))
    else:
        results = [work(cell) for cell in cells]
    rows = []
    for (c, n), res in zip(cells, results):
        row = ResultRow(
            m=res["m"],
            n=n,
            c=c,
            finite_lower=res["finite_lower"],
            asym_lower=res["asym_lower"],
            exact=res["exact"],
            strategy_rounds=res["rounds"],
            formula_upper=res["formula_upper"],
            prior_reference=res["prior_reference"],
        )
        row.check()
        rows.append(row)
    return rows


def rows_to_csv(cfg: ExperimentConfig, rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cfg.columns())
    for row in rows:
        writer.writerow(row.cells(cfg.strategies))
    return buf.getvalue()


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def rows_to_svg(cfg: ExperimentConfig, rows: list[ResultRow], width: int = 640, height: int = 400) -> str:
    """Line chart of value/sqrt(n) against log10(n), one series per column and c."""
    series: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        tag = f"c={row.c}"
        values = {"finite_lower": row.finite_lower, "asym_lower": row.asym_lower, "formula_upper": row.formula_upper}
        values["prior_reference"] = row.prior_reference
        for name, v in row.strategy_rounds.items():
            values[name] = v
        for name, v in values.items():
            if v is None or (isinstance(v, float) and math.isnan(v)):
                continue
            series.setdefault(f"{name} ({tag})", []).append((math.log10(row.n), v / math.sqrt(row.n)))
    pts = [p for s in series.values() for p in s]
    if not pts:
        return f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}"></svg>\n'
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    x1, y1 = (x1 if x1 > x0 else x0 + 1), (y1 if y1 > y0 else y0 + 1)
    pad, legend = 50, 16 * len(series)
    plot_h = height - 2 * pad

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return pad + (1 - (y - y0) / (y1 - y0)) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height + legend}" font-family="sans-serif" font-size="11">',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 15}" text-anchor="middle">log10(n)</text>',
        f'<text x="12" y="{height / 2:.1f}" transform="rotate(-90 12 {height / 2:.1f})" text-anchor="middle">rounds / sqrt(n)</text>',
        f'<text x="{pad - 4}" y="{sy(y0) + 4:.1f}" text-anchor="end">{y0:.3f}</text>',
        f'<text x="{pad - 4}" y="{sy(y1) + 4:.1f}" text-anchor="end">{y1:.3f}</text>',
    ]
    for i, (name, s) in enumerate(sorted(series.items())):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in sorted(s))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        ly = height + 16 * i
        out.append(f'<line x1="{pad}" y1="{ly}" x2="{pad + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{pad + 26}" y="{ly + 4}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
