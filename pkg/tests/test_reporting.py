import json
import math

import pytest

from innerlab.reporting import emit_report, load_reports, render_csv, render_json
from innerlab.verify import VerificationReport


def make(check_id="a", margin=0.5, passed=True, series=None):
    return VerificationReport(check_id, "identities", "hard", "d" * 64, {"x": 1.0}, 0.0, margin,
                              1e-10, passed, 0, 0.0, series or {}, [], "")


def test_json_single_element(tmp_path):
    emit_report([make()], "json", tmp_path / "r.json")
    data = load_reports(tmp_path / "r.json")
    assert len(data) == 1 and data[0]["pass"] is True


def test_nonfinite_values_are_strings(tmp_path):
    emit_report([make(margin=-math.inf, passed=False)], "json", tmp_path / "r.json")
    assert load_reports(tmp_path / "r.json")[0]["margin"] == "-inf"
    assert "-inf" in render_csv([make(margin=-math.inf)])


def test_csv_layout():
    text = render_csv([make("a", 0.25), make("b", -1e-3, False)])
    assert text == "check_id,pass,margin,runtime\na,true,0.25,0.0\nb,false,-0.001,0.0\n"


def test_plotdata_files(tmp_path):
    files = emit_report([make(series={"max_variance": [(6, 0.5), (7, 0.25)]})], "plotdata", tmp_path)
    assert [p.name for p in files] == ["a.max_variance.dat"]
    assert files[0].read_text() == "# x y\n6 0.5\n7 0.25\n"


def test_deterministic_bytes(tmp_path):
    reps = [make("a"), make("b", series={"s": [(1, 2)]})]
    emit_report(reps, "json", tmp_path / "1.json")
    emit_report(reps, "json", tmp_path / "2.json")
    assert (tmp_path / "1.json").read_bytes() == (tmp_path / "2.json").read_bytes()
    assert render_json(reps) == render_json([json.loads(render_json(reps))[0], reps[1]])


def test_errors(tmp_path):
    with pytest.raises(ValueError):
        emit_report([], "json", tmp_path / "x")
    with pytest.raises(ValueError):
        emit_report([make()], "xml", tmp_path / "x")
