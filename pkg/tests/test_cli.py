import json
import os

import pytest

from qiflag import cli


def _write(tmp_path, text):
    p = tmp_path / "c.toml"
    p.write_text(text)
    return str(p)


def test_registry():
    ids = cli.registry()
    assert len(ids) == 25 and len(set(ids)) == 25
    assert "freeness" in ids
    for i in ids:
        assert cli.REGISTRY[i].module in ("quasirings", "heckeops", "cohomodels", "momentgraph", "expo")
    expanded = cli.expand_tasks(["all"])
    assert "qinv-basis" not in expanded and "conj-free" not in expanded and "graph" not in expanded
    assert all(cli.REGISTRY[i].asserts for i in expanded)


def test_qinv_basis_example(tmp_path):
    out = tmp_path / "o"
    cfg = _write(tmp_path, 'rootSystem = "A1"\nmultiplicity = [1]\ndegreeCutoff = 6\n'
                           'tasks = ["qinv-basis"]\noutputDir = "%s"\n' % out)
    assert cli.main(["run", cfg]) == 0
    doc = json.loads((out / "report.json").read_text())
    assert doc["schemaVersion"] == 1
    assert doc["reports"][0]["result"]["dims"] == [1, 0, 1, 1, 1, 1, 1]
    assert (out / "tables" / "qinv-basis.csv").read_text().startswith("degree,dim\n0,1\n")


def test_freeness_example(tmp_path):
    out = tmp_path / "o"
    cfg = _write(tmp_path, 'rootSystem = "A2"\nmultiplicity = [2]\ntasks = ["freeness"]\n'
                           'outputDir = "%s"\n' % out)
    assert cli.main(["run", cfg]) == 0
    rep = json.loads((out / "report.json").read_text())["reports"][0]
    assert rep["status"] == "pass" and "quotientSeries" in rep["result"]


def test_empty_task_list(tmp_path):
    out = tmp_path / "o"
    cfg = _write(tmp_path, 'rootSystem = "A1"\ntasks = []\noutputDir = "%s"\n' % out)
    assert cli.main(["run", cfg]) == 0
    assert json.loads((out / "report.json").read_text())["reports"] == []


def test_deterministic_output(tmp_path):
    args = ["verify", "--type", "A2", "--mult", "1", "--degree", "4",
            "--task", "h-even,graph,exp-qinv", "--task", "skeleton"]
    assert cli.main(args + ["--out", str(tmp_path / "a")]) == 0
    assert cli.main(args + ["--out", str(tmp_path / "b"), "--jobs", "2"]) == 0
    a = (tmp_path / "a" / "report.json").read_bytes()
    assert a == (tmp_path / "b" / "report.json").read_bytes()
    assert (tmp_path / "a" / "graph.json").exists() and (tmp_path / "a" / "graph.dot").exists()
    assert json.loads((tmp_path / "a" / "timings.json").read_text()).keys() == \
        {"h-even", "graph", "exp-qinv", "skeleton"}
    # h-even embeds the dims it compared against
    doc = json.loads(a)
    h = next(r for r in doc["reports"] if r["task"] == "h-even")
    assert h["result"]["qinvDims"] == h["result"]["kernelDims"]


def test_parse_error_reports_position(tmp_path, capsys):
    cfg = _write(tmp_path, 'rootSystem = "A1"\ntasks = [\n')
    assert cli.main(["run", cfg]) == 2
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_unknown_task_lists_registry(capsys):
    assert cli.main(["verify", "--task", "nope"]) == 2
    assert "freeness" in capsys.readouterr().err


def test_usage_errors(tmp_path):
    assert cli.main(["verify", "--type", "A2", "--mult", "1,2"]) == 2
    assert cli.main(["verify", "--type", "H3"]) == 2
    assert cli.main(["run", str(tmp_path / "missing.toml")]) == 2
    cfg = _write(tmp_path, 'bogus = 1\n')
    assert cli.main(["run", cfg]) == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["frobnicate"])
    assert e.value.code == 2


def test_failure_exit_code_and_witness(tmp_path, monkeypatch):
    def broken(ctx):
        return {"status": "fail"}, None
    monkeypatch.setattr(cli.REGISTRY["pi1"], "fn", broken)
    out = tmp_path / "o"
    assert cli.main(["verify", "--task", "pi1", "--out", str(out)]) == 1
    rep = json.loads((out / "report.json").read_text())["reports"][0]
    assert rep["status"] == "fail" and "witness" in rep["result"]


def test_list(capsys):
    assert cli.main(["list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 25


def test_flag_overrides_config(tmp_path):
    out = tmp_path / "o"
    cfg = _write(tmp_path, 'rootSystem = "A2"\ntasks = ["qinv-basis"]\n')
    assert cli.main(["run", cfg, "--type", "B2", "--mult", "1,0", "--degree", "3",
                     "--out", str(out)]) == 0
    doc = json.loads((out / "report.json").read_text())
    assert doc["config"]["root_system"] == "B2" and doc["config"]["multiplicity"] == [1, 0]
