import json

import pytest

from cssbp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_builtin(capsys):
    code, out, _ = run(capsys, "validate", "paper24")
    assert code == 0
    assert "orthogonal=true" in out
    assert "census=0:17 2:46 4:1" in out


def test_validate_json(capsys):
    code, out, _ = run(capsys, "validate", "paper24", "--format", "json")
    body = json.loads(out)
    assert code == 0 and body["intersection_census"] == {"0": 17, "2": 46, "4": 1}


def test_validate_non_orthogonal(tmp_path, capsys):
    f = tmp_path / "bad.css"
    f.write_text("css-support v1\nn 3\nmX 1\nmZ 1\nHX 1: 1 2\nHZ 1: 2 3\n")
    code, out, _ = run(capsys, "validate", str(f))
    assert code == 1 and "orthogonal=false" in out


def test_validate_missing_file(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent/code.css")
    assert code == 1 and "error" in err


def test_equiv(capsys):
    code, out, _ = run(capsys, "equiv", "--code", "paper24", "--p", "0.3", "--iters", "20", "--seeds", "30")
    body = json.loads(out)
    assert code == 0
    assert body["max_belief_deviation"] <= 1e-10
    assert body["hard_decisions_agree"]


def test_equiv_negative_control(capsys):
    code, out, _ = run(capsys, "equiv", "--p", "0.1", "--seeds", "3", "--binary-check-rule", "min-sum",
                       "--fail-above", "1e-10")
    assert code == 1 and json.loads(out)["max_belief_deviation"] > 1e-3


def test_oracle_refuses_large_code(capsys):
    code, _, err = run(capsys, "oracle", "--code", "paper24")
    assert code == 1 and "limit" in err


def test_oracle_small_code(tmp_path, capsys):
    f = tmp_path / "tree.css"
    f.write_text("css-support v1\nn 4\nmX 1\nmZ 1\nHX 1: 3 4\nHZ 1: 1 2\n")
    code, out, _ = run(capsys, "oracle", "--code", str(f), "--p", "0.3", "--sz", "1")
    body = json.loads(out)
    assert code == 0 and len(body["marginals"]) == 4 and body["sz"] == [1]


def test_decode(capsys):
    code, out, _ = run(capsys, "decode", "--p", "0.05", "--sx", "3,5")
    body = json.loads(out)
    assert code == 0 and body["converged"] and body["sx"] == [3, 5] and body["decision"]["x"] == [3]
    assert len(body["beliefs"]) == 24 and len(body["beliefs"][0]) == 4


def test_decode_sampled(capsys):
    code, out, _ = run(capsys, "decode", "--p", "0.05", "--seed", "4", "--decoder", "four-state")
    body = json.loads(out)
    assert code == 0 and "residual" in body


def test_trials_csv_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["trials", "--p", "0.1", "--p", "0.05", "--trials", "200", "--decoder", "joint", "--decoder", "separate"]
    assert run(capsys, *args, "--out", str(a))[0] == 0
    assert run(capsys, *args, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "decoder,p,trials,converged,exact,stabilizer,logical,mismatch,mean_iters"
    assert len(lines) == 5


def test_trials_config_file_with_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"rates": [0.2], "trials": 50, "decoders": ["joint-llr"],
                               "decoder_config": {"max_iterations": 10}}))
    code, out, _ = run(capsys, "trials", "--config", str(cfg), "--trials", "20", "--format", "json")
    body = json.loads(out)
    assert code == 0
    assert body["points"][0]["trials"] == 20 and body["points"][0]["decoder"] == "joint-llr"
    assert body["metadata"]["decoder_config"]["max_iterations"] == 10


@pytest.mark.parametrize(
    "argv",
    [["bogus"], ["trials", "--trials", "0"], ["trials", "--decoder", "nope"], ["trials", "--epsilon", "0.5"],
     ["decode", "--p", "0.1", "--sz", "99"], ["equiv", "--seeds", "0"], []],
)
def test_usage_errors(argv, capsys):
    assert run(capsys, *argv)[0] == 2
