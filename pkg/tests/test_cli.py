import csv
import json

import numpy as np
import pytest

from innerlab.cli import run
from innerlab.series import FieldOfValues


def test_eval_prints_iterate(tmp_path, capsys):
    (tmp_path / "f1.json").write_text(json.dumps({"zeros": [[0, 0], [0, 0]]}))
    assert run(["eval", "--f", str(tmp_path / "f1.json"), "--z", "0.5", "--n", "3"]) == 0
    assert capsys.readouterr().out.strip() == "0.00390625+0i"
    assert run(["eval", "--f", "f2", "--z", "0.3+0.2i", "--n", "0"]) == 0
    assert capsys.readouterr().out.strip() == "0.29999999999999999+0.20000000000000001i"


def test_usage_errors(capsys):
    assert run(["frobnicate"]) == 2
    assert run(["eval", "--f", "f1", "--z", "0.5", "--bogus"]) == 2
    assert "usage" in capsys.readouterr().err
    assert run(["eval", "--f", "f1", "--z", "2", "--n", "1"]) == 2


def test_io_errors(tmp_path):
    assert run(["eval", "--f", str(tmp_path / "nope.json"), "--z", "0.1"]) == 3
    assert run(["verify", "--config", str(tmp_path / "nope.json")]) == 3
    assert run(["report", "--in", str(tmp_path / "nope.json"), "--csv", str(tmp_path / "x.csv")]) == 3


def test_config_errors(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"blaschke": {"zeros": [[0.5, 0], [0.1, 0]]}}))
    assert run(["verify", "--config", str(p)]) == 2
    assert "f(0) must be 0" in capsys.readouterr().err


def test_series_outputs(tmp_path):
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"blaschke": "f1", "coefficients": {"kind": "explicit",
                                                                 "values": [[1, 0], [1, 0]]}}))
    assert run(["series", "--config", str(c), "--grid", "16", "--out", str(tmp_path / "F.csv")]) == 0
    rows = list(csv.reader(open(tmp_path / "F.csv")))
    assert rows[0] == ["angle", "re", "im"] and float(rows[1][1]) == 2.0
    assert run(["series", "--config", str(c), "--grid", "16", "--format", "binary",
                "--out", str(tmp_path / "F.bin")]) == 0
    assert FieldOfValues.read_binary(tmp_path / "F.bin").shape == (16, 3)


def test_norms_command(tmp_path):
    out = tmp_path / "n.json"
    assert run(["norms", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    lo, hi = data["l2_bounds"]
    assert lo * data["l2_mass"] <= data["l2_gram"] <= hi * data["l2_mass"]


def test_verify_and_report(tmp_path):
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"checks": ["chain_rule", "vmoa_decay", "zero_coefficients"]}))
    out = tmp_path / "r.json"
    assert run(["verify", "--config", str(c), "--out", str(out)]) == 0
    reports = json.loads(out.read_text())
    assert [r["check_id"] for r in reports] == ["chain_rule", "vmoa_decay", "zero_coefficients"]
    assert run(["report", "--in", str(out), "--csv", str(tmp_path / "r.csv"),
                "--plotdata", str(tmp_path / "plots")]) == 0
    assert (tmp_path / "r.csv").read_text().splitlines()[0] == "check_id,pass,margin,runtime"
    dat = np.loadtxt(tmp_path / "plots" / "vmoa_decay.max_variance.dat")
    assert dat.shape == (9, 2) and list(dat[:, 0]) == list(range(6, 15))


def test_verify_exit_one_on_failure(tmp_path):
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"checks": ["vmoa_decay"], "params": {"vmoa_decay": {"final_fraction": 1e-9}}}))
    assert run(["verify", "--config", str(c)]) == 1
