from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from burnlab.cli import main
from burnlab.table import Cache, ConfigError, ExperimentConfig, parse_int, rows_to_csv, run_table

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("grid,value", [("1x16", 4), ("1x1", 1), ("3x3", 3)])
def test_exact_examples(capsys, grid, value):
    code, out, _ = run(capsys, "exact", "--grid", grid)
    data = json.loads(out)
    assert code == 0 and data["status"] == "solved" and data["value"] == value


def test_exact_inconclusive_exit_code(capsys):
    code, out, _ = run(capsys, "exact", "--grid", "4x16", "--budget", "20")
    assert code == 2 and json.loads(out)["status"] == "inconclusive"


def test_exact_partial_target_and_graph_file(capsys, tmp_path):
    code, out, _ = run(capsys, "exact", "--grid", "4x16", "--target", "1,4")
    assert code == 0 and json.loads(out)["value"] == 6
    f = tmp_path / "g.txt"
    f.write_text("p 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\n")
    code, out, _ = run(capsys, "exact", "--graph", str(f))
    assert code == 0 and json.loads(out)["value"] == 3


@pytest.mark.parametrize(
    "argv",
    [("exact", "--grid", "0x3"), ("exact",), ("exact", "--grid", "banana"), ("bounds", "--n", "4")],
)
def test_input_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = main(list(argv))
        raise SystemExit(code)
    assert info.value.code == 1


def test_bad_graph_file_reports_line(capsys, tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("p 3\ne 0 1\noops\n")
    code, _, err = run(capsys, "exact", "--graph", str(f))
    assert code == 1 and "line 3" in err


def test_simulate_figure1(capsys):
    code, out, _ = run(capsys, "simulate", str(FIXTURES / "figure1.json"))
    data = json.loads(out)
    assert code == 0 and data["burned_by_round"] == 6 and data["target_burned"]


def test_simulate_invalid_schedule(capsys, tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"m": 1, "n": 5, "sources": [[1, 3], [1, 1], [1, 4]]}))
    code, out, _ = run(capsys, "simulate", str(f))
    assert code == 1 and json.loads(out)["index"] == 3
    code, out, _ = run(capsys, "simulate", str(f), "--lenient")
    assert code == 0 and json.loads(out)["skipped"] == [3]


def test_strategy_command(capsys):
    code, out, _ = run(capsys, "strategy", "composed_small_c", "--c", "1", "--n", "10^4", "--summary")
    data = json.loads(out)
    assert code == 0 and data["validation"]["ok"] and data["m"] == 100
    code, out, _ = run(capsys, "strategy", "top_bottom", "--m", "4", "--n", "16", "--simulate")
    data = json.loads(out)
    assert data["simulation"]["burned_by_round"] <= data["claimed_rounds"]
    code, _, err = run(capsys, "strategy", "top_bottom", "--m", "30", "--n", "100")
    assert code == 1 and "m <=" in err


def test_bounds_command_constants(capsys):
    code, out, _ = run(capsys, "bounds", "--c", "1", "--n", "10^4", "--digits", "2")
    data = json.loads(out)
    assert code == 0 and data["lower_value"] == 136.6 and data["upper_value"] == 146.82


def test_verify_lemma_command(capsys):
    code, out, _ = run(capsys, "verify-lemma", "conservation", "--m", "20", "--n", "21", "--heights", "1,10,20", "--t", "4")
    assert code == 0 and json.loads(out)["verdict"] == "pass"
    code, out, _ = run(capsys, "verify-lemma", "subgraph", "--trials", "10")
    assert code == 0 and json.loads(out)["params"]["trials"] == 10
    code, out, _ = run(capsys, "verify-lemma", "product", "--m", "3", "--n", "9")
    assert json.loads(out)["details"]["bound"] == 4


def test_parse_int_forms():
    assert parse_int("10^4") == 10_000 and parse_int("1e6") == 10**6 and parse_int("1_000") == 1000


def test_config_parsing_and_diagnostics():
    cfg = ExperimentConfig.parse("c = 1/2\nc = 1, 2\nn = 10^2\n# comment\nstrategy = multi_path\n")
    assert cfg.c_values == [Fraction(1, 2), Fraction(1), Fraction(2)] and cfg.n_values == [100]
    assert cfg.strategies == ["multi_path"]
    with pytest.raises(ConfigError, match="line 2"):
        ExperimentConfig.parse("c = 1\nn = x\n")
    with pytest.raises(ConfigError, match="line 1"):
        ExperimentConfig.parse("colour = blue\n")
    with pytest.raises(ConfigError):
        ExperimentConfig.parse("c = 1\n")
    with pytest.raises(ConfigError):
        ExperimentConfig.parse("c = 1\nn = 4\nstrategy = nope\n")


def test_table_header_and_sandwich(tmp_path):
    cfg = ExperimentConfig.parse((FIXTURES / "table_small.conf").read_text())
    rows = run_table(cfg)
    text = rows_to_csv(cfg, rows)
    header = text.splitlines()[0].split(",")
    assert header[:6] == ["m", "n", "c", "finite_lower", "asym_lower", "exact"]
    assert header[-2:] == ["formula_upper", "prior_reference"]
    for row in rows:
        assert row.exact is not None
        assert row.finite_lower <= row.exact <= min(v for v in row.strategy_rounds.values() if v is not None)


def test_table_c1_trend_columns(capsys):
    code, out, _ = run(capsys, "table", str(FIXTURES / "table_c1.conf"))
    lines = out.splitlines()
    assert code == 0 and len(lines) == 8
    cols = lines[0].split(",")
    ratio = []
    for line in lines[1:]:
        cells = dict(zip(cols, line.split(",")))
        ratio.append(int(cells["rounds_composed_small_c"]) / int(cells["n"]) ** 0.5)
    assert ratio == sorted(ratio, reverse=True)


def test_table_cache_and_threads_are_byte_stable(capsys, tmp_path, monkeypatch):
    conf = FIXTURES / "table_small.conf"
    outs = []
    for threads in ("1", "4", "8"):
        out = tmp_path / f"t{threads}.csv"
        assert main(["table", str(conf), "--threads", threads, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    cache = tmp_path / "cache"
    monkeypatch.setenv("BURNLAB_CACHE", str(cache))
    for _ in range(2):
        out = tmp_path / "cached.csv"
        assert main(["table", str(conf), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert len(set(outs)) == 1
    assert len(list(cache.glob("*.json"))) == 6


def test_cache_key_depends_on_parameters(tmp_path):
    c = Cache(tmp_path)
    c.put("cell", {"n": 1}, {"v": 1})
    assert c.get("cell", {"n": 1}) == {"v": 1}
    assert c.get("cell", {"n": 2}) is None
    assert Cache.key("cell", {"a": 1, "b": 2}) == Cache.key("cell", {"b": 2, "a": 1})


def test_env_thread_hint_is_overridden_by_flag(capsys, monkeypatch):
    monkeypatch.setenv("BURNLAB_THREADS", "not-a-number")
    code, out, _ = run(capsys, "exact", "--grid", "2x2", "--threads", "1")
    assert code == 0
    monkeypatch.setenv("BURNLAB_THREADS", "2")
    code, out, _ = run(capsys, "exact", "--grid", "2x3")
    assert code == 0 and json.loads(out)["value"] == 3


def test_svg_plot(tmp_path):
    out = tmp_path / "t.csv"
    svg = tmp_path / "t.svg"
    assert main(["table", str(FIXTURES / "table_c1.conf"), "--out", str(out), "--plot", str(svg)]) == 0
    text = svg.read_text()
    assert text.startswith("<svg") and text.count("<polyline") == 6


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "burnlab", "exact", "--grid", "1x4"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 2
