import json

import pytest

from bergman_dual.cli import build_parser, config_from_args, main
from bergman_dual.errors import ConfigInvalid, UnknownSuite
from bergman_dual.report import VerificationReport
from bergman_dual.suites import SUITES, SuiteConfig, run_suite

SMALL = ["--radial-nodes", "32", "--angular-nodes", "64"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_suite_names():
    assert set(SUITES) == {"transport", "isometry", "group-law", "adjoint", "generator", "continuity",
                           "embedding", "spectral", "membership", "pairing", "growth"}


def test_transport_passes(capsys):
    code, out, err = run(capsys, "transport")
    rep = json.loads(out)
    assert code == 0 and rep["pass"] is True
    assert rep["suite"] == "transport" and len(rep["records"]) > 0
    assert "checks passed" in err


def test_unknown_suite(capsys):
    code, out, err = run(capsys, "rotation")
    assert code == 2 and out == ""
    assert "UnknownSuite" in err
    with pytest.raises(UnknownSuite):
        run_suite(SuiteConfig("rotation"))


def test_lambda_on_imaginary_axis(capsys):
    code, _, err = run(capsys, "spectral", "--lambda", "0,1")
    assert code == 2 and "ConfigInvalid" in err


def test_bad_lambda_literal():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["spectral", "--lambda", "a,b,c"])


@pytest.mark.parametrize("argv", [
    ["transport", "--alpha", "-1"],
    ["transport", "--battery", "/nonexistent/battery.txt"],
    ["transport", "--tol", "no_such_key=1"],
    ["transport", "--radial-nodes", "0"],
])
def test_config_invalid(argv, capsys):
    assert main(argv) == 2


def test_empty_battery(tmp_path, capsys):
    path = tmp_path / "empty.txt"
    path.write_text("# nothing here\n\n")
    code, out, err = run(capsys, "isometry", "--battery", str(path))
    rep = json.loads(out)
    assert code == 0
    assert rep["records"] == [] and rep["warnings"]
    assert "warning" in err


def test_battery_file(tmp_path, capsys):
    path = tmp_path / "b.txt"
    path.write_text("pow(shift(i, var), -4)\n")
    code, out, _ = run(capsys, "transport", "--battery", str(path), *SMALL)
    rep = json.loads(out)
    assert code == 0 and rep["environment"]["battery"] == "b.txt"
    assert len(rep["records"]) == 2


def test_malformed_files(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("pow(var)\n")
    assert main(["transport", "--battery", str(bad)]) == 2
    lower = tmp_path / "probes.txt"
    lower.write_text("1-1j\n")
    assert main(["spectral", "--probes", str(lower)]) == 2


def test_forced_failure_in_csv(capsys):
    code, out, _ = run(capsys, "transport", "--format", "csv", "--tol", "bloch_transport=-1")
    lines = out.splitlines()
    assert code == 1
    assert lines[0] == "suite,check,claimed,computed,tolerance,pass"
    assert any(line.endswith(",false") for line in lines[1:])


def test_global_tol_sets_quadrature():
    args = build_parser().parse_args(["transport", "--tol", "1e-9", "--tol", "isometry=1e-3"])
    cfg = config_from_args(args)
    assert cfg.quad.tol == 1e-9 and cfg.tolerances == {"isometry": 1e-3}


def test_out_file_and_roundtrip(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "growth", "--out", str(path), *SMALL)
    assert code == 0 and out == ""
    text = path.read_text()
    assert VerificationReport.from_json(text).to_json() == text


def test_deterministic(tmp_path, capsys):
    texts = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert main(["membership", "--seed", "7", "--out", str(path)]) == 0
        texts.append(path.read_bytes())
    capsys.readouterr()
    assert texts[0] == texts[1]


def test_include_timing(capsys):
    _, out, _ = run(capsys, "transport", "--include-timing", *SMALL)
    assert json.loads(out)["wall_time"] > 0


def test_config_errors_direct():
    with pytest.raises(ConfigInvalid):
        SuiteConfig("spectral", lambdas=()).validate()
    with pytest.raises(ConfigInvalid):
        SuiteConfig("transport", fmt="xml").validate()


@pytest.mark.parametrize("suite", ["generator", "continuity", "embedding", "pairing"])
def test_small_suites_pass(suite, capsys):
    code, out, _ = run(capsys, suite)
    assert code == 0, [r for r in json.loads(out)["records"] if not r["pass"]]
