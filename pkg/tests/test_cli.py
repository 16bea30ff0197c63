import json
import subprocess
import sys

import pytest

from kzrational.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def s3_doc(tmp_path, capsys):
    path = tmp_path / "s3.json"
    code, _, _ = run(["build", "--n", "3", "--points", "0,1", "--output", str(path)], capsys)
    assert code == 0
    return path


def test_build_then_verify(s3_doc, capsys):
    doc = json.loads(s3_doc.read_text())
    assert doc["kind"] == "solution" and doc["verified"] is True
    assert doc["points"] == ["0", "1"]
    code, out, _ = run(["verify", "--input", str(s3_doc)], capsys)
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_build_rho_plus_and_input_file(tmp_path, capsys):
    system_file = tmp_path / "sys.json"
    system_file.write_text(json.dumps({"n": 4, "points": ["-1", "1/2", "3"], "rho": 1}))
    out = tmp_path / "w.json"
    assert run(["build", "--input", str(system_file), "--output", str(out)], capsys)[0] == 0
    assert json.loads(out.read_text())["rho"] == 1
    assert run(["verify", "--input", str(out)], capsys)[0] == 0


def test_corrupted_document_fails(s3_doc, capsys):
    doc = json.loads(s3_doc.read_text())
    doc["residues"][0][1][1] = "4/3"
    s3_doc.write_text(json.dumps(doc))
    code, out, _ = run(["verify", "--input", str(s3_doc)], capsys)
    assert code == 1
    rep = json.loads(out)
    assert not rep["ok"]
    assert any(d["check"] == "ode_residual" for d in rep["details"])


def test_text_format(capsys):
    code, out, _ = run(["build", "--n", "3", "--points=-1,2", "--format", "text"], capsys)
    assert code == 0
    assert out.startswith("fundamental solution, n=3, rho=-1, poles at -1, 2")
    assert "W[3,3] =" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["build", "--n", "3", "--points", "0,0"],
        ["build", "--n", "3", "--points", "0,x"],
        ["build", "--n", "2", "--points", "0"],
        ["build", "--n", "3"],
        ["verify"],
        ["consistency", "--n", "2"],
        ["gate", "--m1", "1"],
    ],
)
def test_invalid_input_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err.startswith("error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["gate", "--m1", "one", "--m2", "2"])
    assert info.value.code == 2


def test_malformed_document(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert run(["verify", "--input", str(bad)], capsys)[0] == 2
    missing = tmp_path / "none.json"
    assert run(["verify", "--input", str(missing)], capsys)[0] == 2
    bad.write_text(json.dumps({"schema": "kz-rational/1", "kind": "solution", "n": 3}))
    assert run(["verify", "--input", str(bad)], capsys)[0] == 2


def test_gate_command(capsys):
    code, out, _ = run(["gate", "--m1", "2", "--m2", "2"], capsys)
    assert code == 0
    v = json.loads(out)
    assert v["verdict"] == "inconclusive" and v["lambda_squared"] == 4
    code, out, _ = run(["gate", "--m1", "1", "--m2", "3", "--format", "text"], capsys)
    assert out == "m1=1 m2=3 lambda^2=7: no_rational_fundamental\n"


def test_consistency_command(capsys):
    code, out, _ = run(["consistency", "--n", "4", "--format", "text"], capsys)
    assert code == 0
    assert out == "n=4: consistent=True (checked 12 pairs, 24 triples, 24 quadruples)\n"


def test_deterministic_output(tmp_path, capsys):
    argv = ["build", "--n", "4", "--points", "1/2,-3,7/5"]
    first = run(argv, capsys)[1]
    second = run(argv, capsys)[1]
    assert first == second
    path = tmp_path / "w.json"
    path.write_text(first)
    v1 = run(["verify", "--input", str(path)], capsys)[1]
    v2 = run(["verify", "--input", str(path)], capsys)[1]
    assert v1 == v2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kzrational", "gate", "--m1", "1", "--m2", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "inconclusive"
