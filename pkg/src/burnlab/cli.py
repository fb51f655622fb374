"""``burnlab`` command line: exact | simulate | strategy | bounds | table | verify-lemma.

Exit codes: 0 success (or solved), 2 inconclusive, 1 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import lemmas
from .bounds import bound_report, rows_for
from .grid import ExplicitGraph, GraphInputError, GridSpec, ResourceLimitError
from .sim import BurningSchedule, InvalidScheduleError, TargetSet, simulate, validate_strategy_at_scale
from .solver import SolverConfig, burning_number
from .strategies import STRATEGIES
from .table import ExperimentConfig, parse_int, parse_rational, rows_to_csv, rows_to_svg, run_table

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2


def _grid(text: str) -> GridSpec:
    try:
        m, n = text.lower().split("x")
        return GridSpec(parse_int(m), parse_int(n))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MxN, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    return int(os.environ.get("BURNLAB_THREADS", "1"))


def _host(args):
    if getattr(args, "graph", None):
        return ExplicitGraph.from_text(Path(args.graph).read_text())
    if getattr(args, "grid", None) is not None:
        return args.grid
    return None


def _target(args, host):
    if getattr(args, "target", None):
        return TargetSet.rows(*args.target)
    if getattr(args, "target_vertices", None):
        if isinstance(host, GridSpec):
            flat = args.target_vertices
            return TargetSet.of(list(zip(flat[::2], flat[1::2])))
        return TargetSet.of(args.target_vertices)
    return None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_exact(args) -> int:
    host = _host(args)
    if host is None:
        raise GraphInputError("give --grid MxN or --graph FILE")
    cfg = SolverConfig(
        node_budget=args.budget,
        thread_count_hint=_threads(args),
        max_horizon=args.max_horizon,
        symmetry_reduction=not args.no_symmetry,
    )
    res = burning_number(host, _target(args, host), cfg)
    _emit(res.to_dict())
    return EXIT_OK if res.solved else EXIT_INCONCLUSIVE


def cmd_simulate(args) -> int:
    data = json.loads(Path(args.schedule).read_text())
    sched = BurningSchedule.from_dict(data)
    host = _host(args) or sched.host
    if host is None:
        raise GraphInputError("schedule has no host; give --grid or --graph")
    try:
        trace = simulate(host, sched.sources, _target(args, host), mode="lenient" if args.lenient else "strict")
    except InvalidScheduleError as exc:
        _emit({"error": str(exc), "index": exc.index, "vertex": list(exc.vertex) if isinstance(exc.vertex, tuple) else exc.vertex})
        return EXIT_INPUT
    _emit(trace.to_dict())
    return EXIT_OK


def cmd_strategy(args) -> int:
    m, n = (args.m, args.n) if args.m is not None else (None, args.n)
    if m is None:
        m = rows_for(args.c, n)
    strat = STRATEGIES[args.name](m, n)
    out = strat.to_dict() if not args.summary else {k: v for k, v in strat.to_dict().items() if k not in ("sources", "phases")}
    out["validation"] = validate_strategy_at_scale(strat.grid, strat).to_dict()
    if args.simulate:
        trace = simulate(strat.grid, strat.schedule)
        out["simulation"] = {"burned_by_round": trace.burned_by_round, "final_round": trace.final_round}
    _emit(out)
    return EXIT_OK if out["validation"]["ok"] else EXIT_INPUT


def cmd_bounds(args) -> int:
    if args.m is not None:
        rep = bound_report(n=args.n, m=args.m)
    elif args.c is not None:
        rep = bound_report(c=args.c, n=args.n)
    else:
        raise GraphInputError("give --c or --m")
    _emit(rep.to_dict(args.digits))
    return EXIT_OK


def cmd_table(args) -> int:
    cfg = ExperimentConfig.parse(Path(args.config).read_text())
    cache_dir = args.cache or os.environ.get("BURNLAB_CACHE") or cfg.cache_dir
    rows = run_table(cfg, threads=_threads(args), cache_dir=cache_dir)
    text = rows_to_csv(cfg, rows)
    out = args.out or cfg.csv_path
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    plot = args.plot or cfg.svg_path
    if plot:
        Path(plot).write_text(rows_to_svg(cfg, rows))
    return EXIT_OK


def cmd_verify_lemma(args) -> int:
    lid = args.lemma
    if lid == "conservation":
        if args.heights:
            rep = lemmas.check_conservation(args.m, args.n, args.heights, args.t)
        else:
            rep = lemmas.conservation_sweep(args.max_m or 20, args.max_n or 21, args.max_paths)
    elif lid == "far_paths":
        rep = lemmas.check_far_paths_sandwich(args.m, args.n, args.k)
    elif lid == "subgraph":
        rep = lemmas.subgraph_sweep(args.trials, args.max_m or 4, args.max_n or 5, args.seed)
    elif lid == "product":
        rep = lemmas.check_product_bound(args.m, args.n)
    else:
        if not args.graph:
            raise GraphInputError("conjecture check needs --graph FILE")
        rep = lemmas.check_conjecture(ExplicitGraph.from_text(Path(args.graph).read_text()))
    _emit(rep.to_dict())
    return {"pass": EXIT_OK, "skip": EXIT_OK, "inconclusive": EXIT_INCONCLUSIVE}.get(rep.verdict, EXIT_INPUT)


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; exit status 2 is reserved for "inconclusive"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="burnlab", description="Graph burning on grids and small graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("exact", help="exact burning number")
    e.add_argument("--grid", type=_grid)
    e.add_argument("--graph", help="edge-list file: 'p N' then 'e u v' lines")
    e.add_argument("--target", type=_int_list, help="comma-separated row heights to burn")
    e.add_argument("--target-vertices", type=_int_list, help="comma-separated vertex ids (row,col pairs on grids)")
    e.add_argument("--budget", type=parse_int, default=2_000_000)
    e.add_argument("--max-horizon", type=int, default=64)
    e.add_argument("--threads", type=int)
    e.add_argument("--no-symmetry", action="store_true")
    e.set_defaults(func=cmd_exact)

    s = sub.add_parser("simulate", help="run a schedule file")
    s.add_argument("schedule")
    s.add_argument("--grid", type=_grid)
    s.add_argument("--graph")
    s.add_argument("--target", type=_int_list)
    s.add_argument("--target-vertices", type=_int_list)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--strict", action="store_true", default=True, help="reject burned sources (default)")
    mode.add_argument("--lenient", action="store_true", help="skip burned sources instead")
    s.set_defaults(func=cmd_simulate)

    st = sub.add_parser("strategy", help="build and validate a strategy schedule")
    st.add_argument("name", choices=sorted(STRATEGIES))
    st.add_argument("--m", type=parse_int)
    st.add_argument("--n", type=parse_int, required=True)
    st.add_argument("--c", type=parse_rational, default=None)
    st.add_argument("--summary", action="store_true", help="omit per-source data")
    st.add_argument("--simulate", action="store_true", help="also run the explicit simulation")
    st.set_defaults(func=cmd_strategy)

    b = sub.add_parser("bounds", help="bound report for (c, n) or (m, n)")
    b.add_argument("--c", type=parse_rational)
    b.add_argument("--m", type=parse_int)
    b.add_argument("--n", type=parse_int, required=True)
    b.add_argument("--digits", type=int, default=4)
    b.set_defaults(func=cmd_bounds)

    t = sub.add_parser("table", help="CSV table from a key=value config")
    t.add_argument("config")
    t.add_argument("--out")
    t.add_argument("--plot", help="also write an SVG chart here")
    t.add_argument("--cache")
    t.add_argument("--threads", type=int)
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify-lemma", help="check a lemma on finite instances")
    v.add_argument("lemma", choices=lemmas.LEMMAS)
    v.add_argument("--m", type=int, default=1)
    v.add_argument("--n", type=int, default=1)
    v.add_argument("--t", type=int, default=0)
    v.add_argument("--k", type=int, default=1)
    v.add_argument("--heights", type=_int_list)
    v.add_argument("--max-m", type=int, help="sweep range (default 20 for conservation, 4 for subgraph)")
    v.add_argument("--max-n", type=int, help="sweep range (default 21 for conservation, 5 for subgraph)")
    v.add_argument("--max-paths", type=int, default=3)
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--seed", type=int, default=lemmas.DEFAULT_SEED)
    v.add_argument("--graph")
    v.set_defaults(func=cmd_verify_lemma)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "strategy" and args.m is None and args.c is None:
        parser.error("strategy needs --m or --c")
    try:
        return args.func(args)
    except (ValueError, ResourceLimitError, OSError) as exc:
        print(f"burnlab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
