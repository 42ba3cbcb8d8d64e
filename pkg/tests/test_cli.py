import json
import subprocess
import sys
from importlib import resources

import pytest

from g2tcs.cli import main, render_text

CONFIGS = resources.files("g2tcs").joinpath("data", "configs")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_catalog(capsys, tmp_path):
    code, rep = run_json(capsys, "catalog", "list")
    assert code == 0 and [r["id"] for r in rep["result"]] == ["Y1", "Y2", "Y3", "Y4", "Y5"]
    code, rep = run_json(capsys, "catalog", "show", "Y4")
    assert code == 0 and rep["result"]["antiK"] == [2, 3]
    code, rep = run_json(capsys, "catalog", "validate")
    assert code == 0 and rep["result"]["valid"]
    bad = json.loads(resources.files("g2tcs").joinpath("data/catalog.json").read_text())
    bad[0]["c2_pairings"] = [0, 0]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    code, rep = run_json(capsys, "catalog", "validate", "--catalog", str(p))
    assert code == 2 and rep["result"]["failures"][0]["rule"] == "c1·c2 = 24"
    code, _, _ = run(capsys, "catalog", "list", "--catalog", str(p))
    assert code == 2
    code, _, err = run(capsys, "catalog", "list", "--catalog", str(tmp_path / "missing.json"))
    assert code == 1 and "cannot read" in err
    p.write_text("[oops")
    code, _, _ = run(capsys, "catalog", "list", "--catalog", str(p))
    assert code == 1


def test_block(capsys):
    code, rep = run_json(capsys, "block", "derive", "Y3")
    assert code == 0 and rep["result"]["c2Z"] == [26, 22, 2]
    code, _, _ = run(capsys, "block", "derive", "Y9")
    assert code == 2


def test_match(capsys):
    code, rep = run_json(capsys, "match", "search", "Y5", "Y5")
    assert code == 0 and rep["result"]["bound"] == 3
    assert [[0]] in [c["D"] for c in rep["result"]["configurations"]]
    assert any("bound" in w for w in rep["warnings"])
    code, rep = run_json(capsys, "match", "search", "Y3", "Y3", "--bound", "2")
    assert [[1, -1], [-1, 1]] in [c["D"] for c in rep["result"]["configurations"]]
    assert rep["result"]["bound"] == 2


def test_invariants(capsys):
    code, rep = run_json(capsys, "invariants", "--config", str(CONFIGS / "row3.json"))
    assert code == 0
    inv = rep["result"]["invariants"]
    assert (inv["b3"], inv["m"], inv["xi"], inv["mu"], inv["nu"]) == (85, 24, 12, 1, 24)
    assert rep["result"]["genericity"]["plus"]["status"] == "PASS"
    assert rep["result"]["genericity_digest"]
    code, rep = run_json(capsys, "invariants", "--config", str(CONFIGS / "row2.json"))
    assert any("12 mod 36" in w for w in rep["warnings"])


def test_invariants_bad_configs(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"plus": "Y5", "minus": "Y5", "D": [[19]]}))
    assert run(capsys, "invariants", "--config", str(p))[0] == 2
    p.write_text(json.dumps({"plus": "Y5", "minus": "Q", "D": [[0]]}))
    assert run(capsys, "invariants", "--config", str(p))[0] == 2
    p.write_text(json.dumps({"plus": "Y5", "D": [[0]]}))
    assert run(capsys, "invariants", "--config", str(p))[0] == 2
    p.write_text("{")
    assert run(capsys, "invariants", "--config", str(p))[0] == 1


def test_reproduce_table(capsys):
    code, rep = run_json(capsys, "reproduce-table")
    assert code == 0 and rep["result"]["all_match"]
    assert all(not r["diff"] for r in rep["result"]["rows"])


def test_reproduce_table_mismatch(capsys, monkeypatch):
    import g2tcs.cli as cli

    real = cli._reference_table

    def tampered():
        rows = real()
        rows[2]["xi"] = 60
        return rows

    monkeypatch.setattr(cli, "_reference_table", tampered)
    code, rep = run_json(capsys, "reproduce-table")
    assert code == 3
    row = rep["result"]["rows"][2]
    assert row["diff"] == {"xi": {"expected": 60, "actual": 12}}


def test_classify(capsys):
    files = [str(CONFIGS / f"row{i}.json") for i in (1, 2, 3, 4)]
    code, rep = run_json(capsys, "classify", "--configs", *files)
    assert code == 0
    assert {tuple(g["members"]) for g in rep["result"]["groups"]} == {("row1", "row2"), ("row3", "row4")}


def test_selfcheck(capsys):
    code, rep = run_json(capsys, "selfcheck", "--seed", "11", "--trials", "20")
    assert code == 0 and all(c["ok"] for c in rep["result"]["checks"])


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["nonsense"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["match", "search", "Y5"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["catalog", "show"])
    assert e.value.code == 1


def test_byte_identical(capsys):
    a = run(capsys, "reproduce-table", "--json")[1]
    b = run(capsys, "reproduce-table", "--json")[1]
    assert a == b
    assert "timestamp" not in json.loads(a)
    t = json.loads(run(capsys, "reproduce-table", "--json", "--timestamp")[1])
    assert "timestamp" in t


def test_text_rendering(capsys):
    code, out, _ = run(capsys, "block", "derive", "Y5")
    assert code == 0 and "c2Z: [42, 18]" in out
    assert render_text({"a": [1, 2], "b": {"c": 3}}) == "a: [1, 2]\nb:\n  c: 3"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "g2tcs", "block", "derive", "Y1", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["genus"] == 9
