import io
import json
import subprocess
import sys

import pytest

from mnpieri.cli import main
from mnpieri.stable import StableExpansion
from mnpieri.symfunc import default_ring, set_default_ring


@pytest.fixture(autouse=True)
def keep_ring(monkeypatch):
    for var in ("MNPIERI_DEGREE_BOUND", "MNPIERI_CACHE_DIR", "MNPIERI_THREADS", "MNPIERI_SEED", "MNPIERI_FORMAT"):
        monkeypatch.delenv(var, raising=False)
    saved = default_ring()
    yield
    set_default_ring(saved)


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    return code, json.loads(text)


def test_hook_suite_passes():
    code, doc = run_json("verify", "hook-eval", "--m", "1", "--n", "2", "--k", "1")
    assert code == 0
    assert doc["schema"] == "mnpieri-report/1" and doc["status"] == "pass"
    assert doc["cases"] and all(c["pass"] for c in doc["cases"])


def test_usage_errors_exit_2(capsys):
    assert run("verify", "nosuch")[0] == 2
    assert run("pieri", "rhs", "--m", "2", "--n", "4")[0] == 2
    assert run("pieri", "rhs", "--n", "0")[0] == 2
    assert run("compute", "Q[1]")[0] == 2
    assert "error" in capsys.readouterr().err


def test_compute_examples():
    code, doc = run_json("compute", "nabla(M[1])")
    assert code == 0 and doc["value"] == {"M[1]": "1"}
    _, doc = run_json("compute", "P[(2)]")
    assert doc["value"]["m[2]"] == "1" and set(doc["value"]) == {"m[2]", "m[1,1]"}
    _, doc = run_json("compute", "E[1,1/2](shape[1,1]/[])")
    _, ref = run_json("compute", "P[1,1/2](shape[1,1]/[])")
    assert doc["value"] == ref["value"]


def test_pieri_rhs_report():
    code, doc = run_json("pieri", "rhs", "--mu", "[1]", "--m", "1", "--n", "2")
    assert code == 0 and doc["value"] == {"[3]": "q^{2}", "[1,1,1]": "-t^{-1}"}
    assert doc["config"]["m"] == 1 and doc["config"]["n"] == 2


def test_pieri_verify_integer_slope():
    code, doc = run_json("pieri", "verify", "--m", "1", "--n", "1", "--max", "2")
    assert code == 0 and len(doc["cases"]) == 4
    assert run("pieri", "verify", "--m", "1", "--n", "2")[0] == 2


def test_json_is_deterministic_for_a_seed():
    a = run("verify", "inverse", "--m", "1", "--n", "2", "--k", "1", "--seed", "5", "--json")
    b = run("verify", "inverse", "--m", "1", "--n", "2", "--k", "1", "--seed", "5", "--json")
    assert a[0] == 0 and a == b


def test_flag_beats_environment(monkeypatch):
    monkeypatch.setenv("MNPIERI_SEED", "7")
    monkeypatch.setenv("MNPIERI_FORMAT", "json")
    _, text = run("compute", "nabla(M[1])")
    assert json.loads(text)["config"]["seed"] == 7
    _, text = run("compute", "nabla(M[1])", "--seed", "3", "--format", "text")
    assert text.startswith("compute: pass (seed 3)")
    monkeypatch.setenv("MNPIERI_SEED", "x")
    assert run("compute", "nabla(M[1])")[0] == 2


def test_degree_bound_from_environment(monkeypatch):
    monkeypatch.setenv("MNPIERI_DEGREE_BOUND", "2")
    assert run("compute", "P[(3)]")[0] == 2
    assert run("compute", "P[(3)]", "--degree-bound", "3")[0] == 0


def test_cache_commands(tmp_path, monkeypatch):
    assert run("cache", "build")[0] == 2
    monkeypatch.setenv("MNPIERI_CACHE_DIR", str(tmp_path))
    assert run("cache", "build", "--degree-bound", "3")[0] == 0
    assert run("cache", "verify", "--degree-bound", "3")[0] == 0
    (path,) = list(tmp_path.iterdir())
    doc = json.loads(path.read_text())
    lam = next(iter(doc["degrees"]["2"]))
    mu = next(iter(doc["degrees"]["2"][lam]))
    doc["degrees"]["2"][lam][mu] = "q^{7}"
    path.write_text(json.dumps(doc))
    assert run("cache", "verify", "--degree-bound", "3")[0] == 2
    code, doc = run_json("cache", "clear", "--degree-bound", "3")
    assert code == 0 and doc["cases"][0]["removed"] is True
    assert run("cache", "verify", "--degree-bound", "3")[0] == 0


def test_stable_validate(tmp_path):
    good = tmp_path / "good.json"
    good.write_text(StableExpansion.integer_slope(1, range(4)).to_json())
    assert run("stable", "validate", "--file", str(good))[0] == 0
    E = StableExpansion.integer_slope(1, range(4))
    for lam, row in E.entries.items():
        if lam.size == 3:
            row[lam] = row[lam] * 3
    bad = tmp_path / "bad.json"
    bad.write_text(E.to_json())
    code, doc = run_json("stable", "validate", "--file", str(bad))
    assert code == 1 and doc["status"] == "fail"
    assert run("stable", "validate", "--file", str(tmp_path / "missing.json"))[0] == 2


def test_llt_commands():
    code, doc = run_json("llt", "gamma", "--shape", "[2,2]", "--n", "2", "--m", "1")
    assert code == 0 and doc["value"] == "q^{2}t^{-1}"
    code, doc = run_json("llt", "collapse", "--shape", "[3,3]", "--n", "2")
    assert code == 0 and doc["cases"][0]["components"] == 1
    code, doc = run_json("llt", "series", "--shape", "[2,2]", "--n", "2", "--vars", "2")
    assert code == 0 and doc["cases"][0]["pass"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "mnpieri", "compute", "nabla(M[1])"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "M[1]: 1" in res.stdout
