import csv
import json
from pathlib import Path

import pytest

from genlimit.cli import main
from genlimit.scenario import (CSV_COLUMNS, ScenarioError, load_scenario, trace_csv, write_run)

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def test_walkthrough_scenario(tmp_path):
    scenario = load_scenario(SCENARIOS / "walkthrough.json")
    trace = scenario.run()
    summary = write_run(trace, tmp_path)
    rows = list(csv.DictReader((tmp_path / "trace.csv").open()))
    assert list(rows[0]) == CSV_COLUMNS
    assert [int(r["a_t"]) for r in rows[1:]] == [7, 10, 12, 15]
    assert summary.valid_steps == sum(int(r["valid"]) for r in rows)
    assert summary.membership_queries == int(rows[-1]["mem_queries_cum"])
    doc = json.loads((tmp_path / "summary.json").read_text())
    assert doc["t_hat"] == 3


def test_trace_csv_is_deterministic():
    a = load_scenario(SCENARIOS / "two_parity_closure.json").run()
    b = load_scenario(SCENARIOS / "two_parity_closure.json").run()
    assert trace_csv(a) == trace_csv(b)


@pytest.mark.parametrize("bad,match", [
    ({"schema": 2}, "schema"),
    ({"schema": 1, "target": {"index": 1}, "generator": "limit"}, "collection"),
    ({"schema": 1, "collection": {"family": "nope"}, "target": {"index": 1},
      "generator": "limit"}, "family"),
    ({"schema": 1, "collection": {"family": "walkthrough"}, "target": {"index": 9},
      "generator": "limit"}, "index"),
    ({"schema": 1, "collection": {"family": "walkthrough"}, "target": {"index": 1},
      "generator": "limit", "steps": 0}, "steps"),
])
def test_schema_errors(bad, match):
    with pytest.raises(ScenarioError, match=match):
        load_scenario(bad)


def test_cli_run_and_errors(tmp_path, capsys):
    assert main(["run", str(SCENARIOS / "walkthrough.json"), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "trace.json").exists()
    assert main(["run", str(SCENARIOS / "walkthrough.json"), "--steps", "0"]) != 0
    cap = tmp_path / "cap.json"
    data = json.loads((SCENARIOS / "arith_p35.json").read_text())
    data["generator"] = "closure"
    cap.write_text(json.dumps(data))
    assert main(["run", str(cap)]) != 0
    assert "finite" in capsys.readouterr().err


def test_cli_suite_name_is_checked():
    with pytest.raises(SystemExit) as e:
        main(["suite", "nonsense"])
    assert e.value.code == 2


def test_cli_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in ("gold", "limit", "f_c", "prompted-nontrivial", "cycle:"):
        assert name in out


def test_cli_invariants_suite_small(capsys):
    assert main(["suite", "invariants", "--instances", "20"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_cli_interactive(tmp_path, monkeypatch):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO("-1\n1\n-2\n\n"))
    assert main(["run", str(SCENARIOS / "walkthrough.json"), "--interactive-adversary",
                 "--out", str(tmp_path)]) == 0
    rows = list(csv.DictReader((tmp_path / "trace.csv").open()))
    assert [r["w_t"] for r in rows] == ["2", "5"]
