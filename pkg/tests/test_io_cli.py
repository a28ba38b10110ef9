import json

import pytest

from dops import io
from dops.cli import main
from dops.core import RecCoeffs
from dops.dsym import SymData


def test_schemas_validate_round_trip():
    c = RecCoeffs(2, ["1/2", 3], [["1"], ["2", "-1/3"]])
    assert io.coeffs_from_obj(c.to_json()) == c
    s = SymData(2, ["1", "3/2"])
    assert io.coeffs_from_obj(s.to_json()) == s


@pytest.mark.parametrize("obj", [
    {"d": 2, "beta": ["1"]},
    {"d": 1, "beta": ["1/0"], "gamma": [["1"]]},
    {"d": 1, "beta": [1.5], "gamma": [["1"]]},
    {"d": 1, "beta": ["1"], "gamma": [["0"]]},
    {"d": 0, "rho": ["1"]},
])
def test_schema_errors(obj):
    with pytest.raises(io.SchemaError):
        io.coeffs_from_obj(obj)


def _run(args, capsys):
    code = main(args)
    return code, capsys.readouterr()


def test_verify_example_exit_zero(capsys):
    code, out = _run(["verify", "--identity", "delta", "--d", "2", "--n", "6", "--seed", "7"], capsys)
    lines = [json.loads(l) for l in out.out.splitlines()]
    assert code == 0
    assert all(r["residual_is_zero"] for r in lines[:-1])
    assert lines[-1] == {"status": "ok", "first_failure": None}


def test_output_is_byte_identical(capsys):
    args = ["sweep", "--identity", "transfer", "--d", "2", "--n", "5", "--count", "2"]
    _, a = _run(args, capsys)
    _, b = _run(args, capsys)
    assert a.out == b.out and a.out


def test_zeros_csv_with_certificates(tmp_path, capsys):
    comp = tmp_path / "comp0.json"
    assert main(["dsym", "--d", "2", "--rho", "1", "--emit-component", "0", "--n", "30",
                 "--output", str(comp)]) == 0
    code, out = _run(["zeros", "--input", str(comp), "--n", "12", "--check-oscillation",
                      "--interlace-with", "prev"], capsys)
    assert code == 0
    text = out.out.splitlines()
    assert "# oscillation=true" in text and "# interlace_prev=true" in text
    header = text.index("index,re,im,refined")
    assert len(text) - header - 1 == 12


def test_verification_failure_exit_one(capsys):
    code, out = _run(["zeros", "--d", "2", "--n", "6", "--check-tn"], capsys)
    assert code == 1
    assert "tn" in out.err


def test_schema_error_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"d": 2, "beta": ["x"]}))
    code, out = _run(["gen", "--input", str(bad)], capsys)
    assert code == 2 and "error" in out.err


def test_dsym_report(capsys):
    code, out = _run(["dsym", "--d", "2", "--rho", "1", "--components", "--links", "--hahn", "--n", "6"], capsys)
    rec = json.loads(out.out.splitlines()[0])
    assert code == 0
    assert rec["components"][1]["beta"][0] == "2"
    assert all(rec["links"].values())
    assert all(v["positive"] for v in rec["hahn"].values())


@pytest.mark.parametrize("cmd", [
    ["gen", "--d", "1", "--n", "3"],
    ["assoc", "--d", "2", "--n", "3", "--r", "2"],
    ["copoly", "--d", "2", "--n", "6", "--kind", "co_modified"],
    ["darboux", "--d", "2", "--n", "5", "--chain", "--kernel", "--seed", "3"],
    ["moments", "--d", "3", "--n", "5"],
    ["uvarov", "--d", "2", "--n", "5"],
    ["quasi", "--d", "2", "--n", "8"],
    ["gen", "--fixture", "q_appell", "--param", "q=1/2", "--param", "beta0=1", "--param", "gamma1=1,2", "--n", "2"],
])
def test_subcommands_pass(cmd, capsys):
    code, out = _run(cmd, capsys)
    assert code == 0
    assert json.loads(out.out.splitlines()[-1])["status"] == "ok"
