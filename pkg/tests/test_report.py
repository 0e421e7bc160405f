import json
import math

import pytest

from bergman_dual.report import CSV_HEADER, Record, VerificationReport, emit, format_float


def sample_report():
    rep = VerificationReport("transport", environment={"alpha": 0.5, "seed": 0})
    rep.add(Record.equal("a", 1.0, 1.0 + 1e-9, 1e-6))
    rep.add(Record.at_most("b", 0.5, 0.49999, 1e-4, note="ratio"))
    rep.add(Record.within("c", 0.9, 1.1, 1.02))
    rep.add(Record.failure("d", ZeroDivisionError("boom")))
    rep.notes["probe"] = {"lam": [1.0, 0.0], "relative": 6.5}
    return rep


def test_format_float():
    assert format_float(1.0) == "1.000000000000e+00"
    assert format_float(-2.5e-13) == "-2.500000000000e-13"
    assert format_float(math.nan) == '"nan"'
    assert format_float(-math.inf) == '"-inf"'


def test_record_relations():
    assert Record.equal("x", 1, 1.1, 0.2).passed
    assert not Record.equal("x", 1, 1.3, 0.2).passed
    assert not Record.equal("x", 1, math.nan, 1).passed
    assert Record.at_most("x", 1, 1.00005, 1e-4).passed
    assert not Record.at_most("x", 1, 1.1, 1e-4).passed
    r = Record.within("x", 0.9, 1.1, 1.0)
    assert r.passed and r.claimed == pytest.approx(1.0) and r.tolerance == pytest.approx(0.1)
    f = Record.failure("x", ValueError("bad"))
    assert not f.passed and f.note == "ValueError: bad"


def test_report_pass_flag():
    rep = sample_report()
    assert not rep.passed
    rep.records.pop()
    assert rep.passed


def test_json_is_valid_and_sorted():
    text = sample_report().to_json()
    d = json.loads(text)
    assert list(d) == sorted(d)
    assert d["pass"] is False
    assert d["records"][3]["computed"] == "nan"
    assert "wall_time" not in d


def test_json_roundtrip_byte_identical():
    text = sample_report().to_json()
    assert VerificationReport.from_json(text).to_json() == text


def test_timing_only_on_request():
    rep = sample_report()
    rep.wall_time = 1.25
    assert "wall_time" not in rep.to_json()
    assert json.loads(rep.to_json(include_timing=True))["wall_time"] == 1.25


def test_csv_rows():
    lines = sample_report().to_csv().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1] == "transport,a,1.000000000000e+00,1.000000001000e+00,1.000000000000e-06,true"
    assert lines[4].endswith("false")
    assert len(lines) == 5


def test_emit_writes_file(tmp_path):
    path = tmp_path / "r.csv"
    text = emit(sample_report(), "csv", str(path))
    assert path.read_text() == text
    with pytest.raises(ValueError):
        emit(sample_report(), "xml")


def test_complex_and_numpy_values():
    import numpy as np

    rep = VerificationReport("x", notes={"z": 1 + 2j, "n": np.float64(0.5), "k": np.int64(3)})
    d = json.loads(rep.to_json())
    assert d["notes"] == {"k": 3, "n": 0.5, "z": [1.0, 2.0]}
