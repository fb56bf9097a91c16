import json

import pytest

from ltmax.cli import main
from ltmax.graph import complete_graph, serialize_graph


@pytest.fixture
def p3(tmp_path):
    f = tmp_path / "p3.txt"
    f.write_text("graph 3 undirected\ne 0 1\ne 1 2\n")
    return str(f)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sigma_exact(capsys, p3):
    code, out, _ = run(capsys, "sigma", "--graph", p3, "--seeds", "0", "--method", "exact")
    assert code == 0
    assert "sigma: 2/1" in out


@pytest.mark.parametrize("method", ["exact-config", "exact-threshold"])
def test_sigma_other_exact_methods(capsys, p3, method):
    code, out, _ = run(capsys, "sigma", "--graph", p3, "--seeds", "1", "--method", method, "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["schema"] == "ltmax/1" and d["sigma"] == {"value": "3/1", "decimal": "3"}


def test_sigma_mc_fields_and_determinism(capsys, p3):
    argv = ("sigma", "--graph", p3, "--seeds", "0", "--method", "mc", "--samples", "2000", "--seed", "5", "--format", "json")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--threads", "3")
    assert a == b
    d = json.loads(a)
    assert d["samples"] == 2000 and "std_error" in d


def test_gen_then_ratio(capsys, tmp_path):
    g = str(tmp_path / "g.txt")
    code, _, _ = run(capsys, "gen", "--kind", "tight-directed", "--k", "2", "--m", "100", "-o", g)
    assert code == 0
    side = json.loads((tmp_path / "g.txt.json").read_text())
    assert side["star_sizes"] == ["100", "50", "25", "21"] and side["ell"] == 2
    assert side["predicted_bounds"]["upper"]["value"] == "25/33"
    code, out, _ = run(capsys, "ratio", "--graph", g, "--k", "2", "--format", "json")
    d = json.loads(out)
    assert (d["ratio"]["value"], d["base"]["value"], d["surplus"]["value"]) == ("25/33", "3/4", "1/132")


def test_greedy_and_opt(capsys, tmp_path):
    f = tmp_path / "k4.txt"
    f.write_text(serialize_graph(complete_graph(4)))
    code, out, _ = run(capsys, "greedy", "--graph", str(f), "--k", "2", "--lazy")
    assert code == 0 and "seeds: 0,1" in out and "step=1" in out
    code, out, _ = run(capsys, "opt", "--graph", str(f), "--k", "1", "--format", "csv")
    assert out.splitlines()[0] == "k,optimal,sigma,sigma.decimal"
    assert out.splitlines()[1].startswith("1,0,26/9,")


def test_json_out_manifest(capsys, p3, tmp_path):
    out_file = tmp_path / "r.json"
    code, stdout, _ = run(capsys, "sigma", "--graph", p3, "--seeds", "0", "--json-out", str(out_file))
    assert code == 0
    d = json.loads(out_file.read_text())
    m = d["manifest"]
    assert d["schema"] == "ltmax/1"
    assert set(m) == {"command_line", "master_seed", "version", "inputs", "wall_clock_seconds"}
    assert list(m["inputs"].values())[0] and "wall_clock" not in stdout


def test_usage_errors(capsys, p3):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "sigma", "--graph", p3)[0] == 2
    assert run(capsys, "sigma", "--graph", p3, "--seeds", "9")[0] == 2
    assert run(capsys, "sigma", "--graph", "/nonexistent", "--seeds", "0")[0] == 2
    code, _, err = run(capsys, "gen", "--kind", "tight-undirected", "--k", "2", "--c", "100", "-o", "x.txt")
    assert code == 2 and "error" in err


def test_budget_exceeded(capsys, tmp_path):
    f = tmp_path / "k9.txt"
    f.write_text(serialize_graph(complete_graph(9)))
    code, _, err = run(capsys, "sigma", "--graph", str(f), "--seeds", "0", "--method", "exact-config")
    assert code == 3 and "budget" in err


def test_verify_single_check(capsys, tmp_path):
    rep = tmp_path / "rep.json"
    code, out, _ = run(capsys, "verify", "--suite", "degree_bound", "--max-n", "4", "--report", str(rep))
    assert code == 0 and "status: pass" in out
    d = json.loads(rep.read_text())
    assert d["schema"] == "ltmax/1" and d["checks"][0]["check"] == "degree_bound"


def test_verify_reports_violation(capsys, monkeypatch):
    import ltmax.cli as cli

    fake = {
        "schema": "ltmax/1",
        "corpus_size": 1,
        "status": "fail",
        "checks": [{"check": "degree_bound", "instances": 1, "violations": [{"v": 0}], "status": "fail"}],
    }
    monkeypatch.setattr(cli, "run_suite", lambda *a: fake)
    code, out, _ = run(capsys, "verify", "--suite", "degree_bound", "--format", "csv")
    assert code == 1
    assert out.splitlines() == ["check,instances,status,violations", "degree_bound,1,fail,1"]
