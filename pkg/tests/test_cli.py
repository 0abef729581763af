import csv
import io
import json
import subprocess
import sys

import pytest

from fishcong.cli import main

TOP_KEYS = {"command", "params", "results", "version"}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    doc = json.loads(out)
    assert set(doc) == TOP_KEYS
    return code, doc


def test_xi_text(capsys):
    code, out, _ = run(capsys, "xi", "--r", "1", "--s", "0", "--n-max", "7")
    assert code == 0
    assert out.splitlines()[-1] == "7 1014"


def test_xi_witness(capsys):
    code, out, _ = run(capsys, "xi", "--r", "23", "--s", "0", "--n-max", "22")
    assert out.splitlines()[-1].endswith("668933422960")


def test_xi_mod(capsys):
    _, out, _ = run(capsys, "xi", "--r", "1", "--s", "0", "--n-max", "7", "--mod", "5")
    assert [int(line.split()[1]) for line in out.splitlines()] == [1, 1, 2, 0, 0, 3, 2, 4]


def test_xi_json_and_csv(capsys):
    code, doc = run_json(capsys, "xi", "--r", "-1", "--n-max", "24")
    assert doc["command"] == "xi"
    assert doc["results"][-1] == {"n": 24, "value": "11115833059268126770"}
    _, out, _ = run(capsys, "xi", "--r", "1", "--n-max", "3", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows == [["n", "value"], ["0", "1"], ["1", "1"], ["2", "2"], ["3", "5"]]


def test_sets(capsys):
    code, out, _ = run(capsys, "sets", "--p", "5", "--r", "23", "--s", "0")
    assert code == 0
    assert out.strip().startswith("S={0,1,3} S*={0,1}")
    assert "digit_ok=false" in out
    code, doc = run_json(capsys, "sets", "--p", "23", "--r", "1", "--s", "0")
    assert doc["results"]["i0"] == 22 and doc["results"]["digit_ok"] is True


def test_sets_errors(capsys):
    code, _, err = run(capsys, "sets", "--p", "5", "--r", "5", "--s", "0")
    assert code == 2 and "PDividesR" in err
    with pytest.raises(SystemExit) as exc:
        main(["sets", "--p", "9", "--r", "1"])
    assert exc.value.code == 2


def test_csv_refused_for_non_tabular(capsys):
    code, _, err = run(capsys, "sets", "--p", "5", "--r", "1", "--format", "csv")
    assert code == 2


def test_verify_refutation(capsys):
    code, doc = run_json(capsys, "verify", "--p", "5", "--r", "23", "--s", "0",
                         "--lambda", "2", "--j", "3", "--m-max", "3")
    assert code == 1
    assert doc["results"][0]["witness"] == {"m": 1, "residue": 10}
    assert doc["results"][0]["status"] == "Refuted"


def test_verify_predicted_all_pass(capsys):
    code, doc = run_json(capsys, "verify", "--p", "11", "--r", "1", "--lambda", "2", "--m-max", "3")
    assert code == 0
    assert [r["family"]["j"] for r in doc["results"]] == [1, 2, 3]


def test_predict(capsys):
    code, out, _ = run(capsys, "predict", "--p", "19", "--r", "1", "--s", "0", "--lambda", "2")
    assert out.splitlines()[0] == "j in {1,2}"
    code, doc = run_json(capsys, "predict", "--p", "5", "--r", "5")
    assert doc["results"][0]["guaranteed_by"] == "LEM_PR"
    assert doc["results"][0]["j"] == [1, 2, 3, 4]


def test_digits(capsys):
    code, out, _ = run(capsys, "digits", "--num", "-1", "--den", "24", "--p", "11", "--count", "2")
    assert code == 0 and "digits=[5, 0]" in out
    code, _, _ = run(capsys, "digits", "--num", "1", "--den", "10", "--p", "5")
    assert code == 2


def test_dissect(capsys):
    code, doc = run_json(capsys, "dissect", "--p", "5", "--n", "2")
    assert code == 0
    checks = doc["results"]["checks"]
    assert all(o["ok"] for o in checks["lemma_alpha"])
    assert checks["lemma_alpha24"][0]["reading"] == "F(q^p, pn-1)"
    code, doc = run_json(capsys, "dissect", "--p", "2", "--N", "2")
    assert doc["results"]["parts"] == [["3", "-1"], ["-2", "1"]]
    code, _, _ = run(capsys, "dissect", "--p", "5")
    assert code == 2


def test_lemmas(capsys):
    code, doc = run_json(capsys, "lemmas", "--p", "5", "--s", "1", "--lambda", "2")
    assert code == 0 and len(doc["results"]) == 3


def test_search(capsys):
    code, doc = run_json(capsys, "search", "--alpha-max", "12", "--rho-max", "12", "--n-max", "60", "--jobs", "1")
    assert code == 0
    keys = [(h["alpha"], h["beta"], h["rho"]) for h in doc["results"]]
    assert (5, 3, 5) in keys and (5, 4, 5) in keys and (7, 6, 7) in keys
    assert keys == sorted(keys)
    assert all(h["implied"] for h in doc["results"])


@pytest.mark.parametrize("argv", [
    ["xi", "--r", "2", "--s", "3", "--n-max", "30", "--format", "json"],
    ["search", "--alpha-max", "10", "--rho-max", "10", "--n-max", "40", "--jobs", "2", "--format", "json"],
    ["verify", "--p", "7", "--r", "23", "--lambda", "2", "--m-max", "2", "--format", "json"],
    ["dissect", "--p", "7", "--n", "1", "--format", "json"],
])
def test_determinism(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "fishburn.toml"
    cfg.write_text("# settings\noutput_format = json\nseries_limit = 100  # small\njobs = 1\n")
    code, out, _ = run(capsys, "verify", "--p", "5", "--r", "1", "--lambda", "3", "--m-max", "3",
                       "--config", str(cfg))
    assert code == 2  # 375 coefficients exceed the configured limit
    code, out, _ = run(capsys, "sets", "--p", "5", "--r", "1", "--config", str(cfg))
    assert set(json.loads(out)) == TOP_KEYS


def test_config_rejects_bad_values(tmp_path, capsys):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("series_limit = 10\n")
    code, _, _ = run(capsys, "sets", "--p", "5", "--r", "1", "--config", str(cfg))
    assert code == 2
    cfg.write_text("colour = blue\n")
    code, _, _ = run(capsys, "sets", "--p", "5", "--r", "1", "--config", str(cfg))
    assert code == 2


def test_cache_and_env_override(tmp_path, capsys, monkeypatch):
    flag_path = tmp_path / "flag.cache"
    env_path = tmp_path / "env.cache"
    monkeypatch.setenv("FISHBURN_CACHE", str(env_path))
    code, out, _ = run(capsys, "xi", "--r", "1", "--n-max", "9", "--cache", str(flag_path))
    assert code == 0
    assert env_path.exists() and not flag_path.exists()
    assert env_path.read_text().splitlines()[-1] == "9 31240"


def test_corrupt_cache_exit_code(tmp_path, capsys):
    path = tmp_path / "xi.cache"
    path.write_text("XICACHE 1\nr=1 s=0\n0 1\n5 5\n")
    code, _, err = run(capsys, "xi", "--r", "1", "--n-max", "9", "--cache", str(path))
    assert code == 3 and "CorruptCache" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fishcong", "xi", "--r", "1", "--n-max", "5"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[-1] == "5 53"
