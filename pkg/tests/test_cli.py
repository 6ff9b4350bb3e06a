import json
import subprocess
import sys

import pytest

from elltor import suites
from elltor.cli import main
from golden_cases import golden_path, load_cases, run_case

CASES = load_cases()


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden_case_bytes_and_exit(case):
    code, data = run_case(case)
    assert code == case["exit"]
    assert data == golden_path(case).read_bytes()


def test_repeat_runs_are_identical():
    case = next(c for c in CASES if c["name"] == "genus_rank1_json")
    assert run_case(case) == run_case(case)


def test_kernel_single_box_is_one_minus_x():
    case = next(c for c in CASES if c["name"] == "kernel_n5d_single_box")
    doc = json.loads(run_case(case)[1])
    assert doc["series"]["terms"] == [[[0], "1", "1"], [[1], "-1", "1"]]


def test_genus_rank1_table_shape():
    case = next(c for c in CASES if c["name"] == "genus_rank1_json")
    doc = json.loads(run_case(case)[1])
    charges = {row[0] for row in doc["rows"]}
    assert charges == {0, 1, 2, 3}
    assert [r for r in doc["rows"] if r[0] == 0] == [[0, [0], "1", "1"]]


def test_config_file_values_are_overridden_by_flags(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"suites": ["partition"], "max_size": 1}))
    out = tmp_path / "r.json"
    assert main(["verify", "--config", str(cfg), "--suite", "qseries", "-o", str(out)]) == 0
    records = json.loads(out.read_text())
    assert {r["suite"] for r in records} == {"qseries"}


def test_unknown_config_key_is_usage_error(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"no_such_option": 1}))
    assert main(["verify", "--config", str(cfg)]) == 2


def test_failing_check_exits_one(monkeypatch, tmp_path):
    def broken(cfg, params):
        return [suites.Check("partition", "partition.broken", "broken", lambda: ("fail", {"x": 1}))]

    monkeypatch.setitem(suites._BUILDERS, "partition", broken)
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "partition", "-o", str(out)]) == 1
    rec = json.loads(out.read_text())[0]
    assert set(rec) == {"suite", "check_id", "paper_ref", "status", "detail"}
    assert rec["status"] == "fail"


def test_crashing_check_is_reported_as_failure(monkeypatch, tmp_path):
    def crash():
        raise RuntimeError("boom")

    monkeypatch.setitem(suites._BUILDERS, "partition",
                        lambda cfg, params: [suites.Check("partition", "c", "r", crash)])
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "partition", "-o", str(out)]) == 1
    assert "boom" in json.loads(out.read_text())[0]["detail"]["error"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "elltor", "kernel", "--kind", "Ntheta"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    terms = json.loads(proc.stdout)["series"]["terms"]
    assert len(terms) == 1 and terms[0][1:] == ["1", "1"] and not any(terms[0][0])
