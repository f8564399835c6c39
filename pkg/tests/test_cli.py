import json
import subprocess
import sys

import pytest

from hkdensity.cli import main, parse_samples
from hkdensity.errors import ValidationError

CONIC = {"d": 2, "hn": {"slopes": ["-1"], "ranks": [2]}, "profile": {"degrees": [1], "mults": [3]}}


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return {
        "m": write("m.json", {"d": 2, "p": 2, "gens": [[1, 0], [0, 1]]}),
        "sq": write("sq.json", {"d": 2, "gens": [[2, 0], [0, 2]]}),
        "p3": write("p3.json", {"d": 2, "p": 3, "gens": [[1, 0], [0, 1]]}),
        "bad": write("bad.json", {"d": 2, "gens": [[1, 1]]}),
        "badgen": write("badgen.json", {"d": 2, "gens": [[1, 0], [0, -2]]}),
        "conic": write("conic.json", CONIC),
        "tampered": write("tampered.json", {**CONIC, "hn": {"slopes": ["-1"], "ranks": [3]}}),
        "dir": str(tmp_path),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_density_csv(files, capsys):
    code, out, _ = run(capsys, "density", "--pair", files["m"], "--n", "1", "--grid", "3")
    assert code == 0
    assert out.splitlines() == ["x,f(x)", "0,0.5", "0.5,1", "1,0.5", "1.5,0"]


def test_density_json(files, capsys):
    code, out, _ = run(capsys, "density", "--pair", files["m"], "--n", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["lengths"] == [1, 2, 3, 4, 3, 2, 1] and doc["values"][3] == "1"


def test_ehk(files, capsys):
    code, out, _ = run(capsys, "ehk", "--pair", files["sq"], "--n", "2", "--format", "json")
    assert code == 0 and json.loads(out)["hk_approx"] == "4"
    code, out, _ = run(capsys, "ehk", "--pair", files["sq"], "--n", "1", "--p", "3")
    assert code == 0 and out.splitlines()[1] == "1,3,4"


def test_tensor_verify(files, capsys):
    code, out, _ = run(capsys, "tensor-verify", "--a", files["m"], "--b", files["m"], "--n", "2")
    doc = json.loads(out)
    assert code == 0
    assert doc["cauchy_ok"] and doc["phi_ok"] and doc["violations"] == []
    assert doc["gap_bound"] == "11/64"


def test_tensor_verify_three_factors(files, capsys):
    code, out, _ = run(capsys, "tensor-verify", "--a", files["m"], "--b", files["sq"], "--b", files["m"], "--n", "1")
    assert code == 0 and json.loads(out)["cauchy_ok"]


def test_tensor_verify_rejects_mixed_characteristic(files, capsys):
    code, _, err = run(capsys, "tensor-verify", "--a", files["m"], "--b", files["p3"], "--n", "1")
    assert code == 1 and "characteristic" in err


def test_convolve(files, capsys):
    code, out, _ = run(capsys, "convolve", "--a", files["m"], "--b", files["m"], "--n", "0", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"breakpoints": ["0", "1", "2"], "pieces": [["0", "1"], ["2", "-1"]]}


def test_curve_ehk(files, capsys):
    code, out, _ = run(capsys, "curve", "--in", files["conic"], "--ehk")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "3/2"
    assert json.loads("\n".join(lines[1:]))["ok"] is True


def test_curve_full_report(files, capsys):
    code, out, _ = run(capsys, "curve", "--in", files["conic"], "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["e_hk"] == "3/2"
    assert doc["closed_form"]["terms"][1] == {"coeff": "-3", "freq": "1"}
    code, out, _ = run(capsys, "curve", "--in", files["conic"], "--grid", "3")
    assert "coeff,freq" in out and "x,f(x)" in out


def test_curve_validation_failure(files, capsys):
    code, out, err = run(capsys, "curve", "--in", files["tampered"])
    assert code == 1
    assert "rank identity" in err and json.loads(out)["validation"]["ok"] is False


def test_fourier_sources(files, capsys):
    code, out, _ = run(capsys, "fourier", "--builtin", "tent", "--samples", "list:0,3.14159")
    rows = out.splitlines()
    assert code == 0 and rows[0] == "re_xi,im_xi,re_F,im_F,abs_F" and rows[1].startswith("0,0,1,0,1")
    code, out, _ = run(capsys, "fourier", "--in", files["conic"], "--samples", "ray:1:1:5")
    assert code == 0 and len(out.splitlines()) == 6
    code, closed, _ = run(capsys, "fourier", "--in", files["conic"], "--samples", "real:-2:2:5", "--digits", "8")
    code, piecewise, _ = run(capsys, "fourier", "--in", files["conic"], "--samples", "real:-2:2:5",
                             "--digits", "8", "--method", "piecewise")
    assert closed == piecewise
    code, out, _ = run(capsys, "fourier", "--pair", files["m"], "--n", "3", "--samples", "real:0:1:2")
    assert code == 0 and out.splitlines()[1].startswith("0,0,1,")


def test_fourier_range_error(files, capsys):
    code, _, err = run(capsys, "fourier", "--builtin", "tent", "--samples", "list:500i")
    assert code == 3 and "range" in err


def test_invalid_inputs(files, capsys):
    code, _, err = run(capsys, "ehk", "--pair", files["bad"], "--n", "1")
    assert code == 1 and "finite colength" in err
    code, _, err = run(capsys, "ehk", "--pair", files["badgen"], "--n", "1")
    assert code == 1 and "generator 1" in err
    code, _, err = run(capsys, "ehk", "--pair", files["dir"] + "/missing.json", "--n", "1")
    assert code == 1
    code, _, _ = run(capsys, "fourier", "--builtin", "tent", "--samples", "nonsense")
    assert code == 1
    with pytest.raises(SystemExit):
        main(["density", "--pair", files["m"], "--n", "1", "--bogus"])


def test_ie_cap_env(files, tmp_path, monkeypatch, capsys):
    path = tmp_path / "many.json"
    path.write_text(json.dumps({"d": 2, "gens": [[k, 6 - k] for k in range(7)]}))
    monkeypatch.setenv("HKDF_IE_CAP", "4")
    code, _, err = run(capsys, "ehk", "--pair", str(path), "--n", "1")
    assert code == 1 and "too many generators" in err


def test_parse_samples():
    assert parse_samples("real:-1:1:3") == [-1, 0, 1]
    assert parse_samples("ray:2:2:3") == [0, 1 + 1j, 2 + 2j]
    assert parse_samples("list:1, 2+3i") == [1, 2 + 3j]
    with pytest.raises(ValidationError):
        parse_samples("real:1:2")


def test_output_is_deterministic(files, tmp_path):
    outs = []
    for k in range(2):
        target = tmp_path / f"out{k}.json"
        subprocess.run(
            [sys.executable, "-m", "hkdensity", "tensor-verify", "--a", files["m"], "--b", files["sq"],
             "--n", "2", "--out", str(target)],
            check=True,
        )
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
