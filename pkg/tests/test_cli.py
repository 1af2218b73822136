import json
import shutil
import subprocess

import pytest

from kacmoody.cli import compute, main, validate_input, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bracket_d_with_mode(capsys):
    code, out, _ = run(capsys, "compute", "bracket", "--json", '{"X": {"d": 1}, "Y": {"loop": [{"1": 1}]}}')
    assert code == 0
    res = json.loads(out)
    assert res["op"] == "bracket" and len(res["input_sha256"]) == 64
    assert res["result"]["loop"] == [{"1": ["1", "0"]}]


def test_output_is_deterministic(capsys):
    args = ("compute", "metric", "--json", '{"X": {"c": 1}, "Y": {"d": 1}}')
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    assert json.loads(a)["result"] == ["-1", "0"]


def test_schema_error_has_pointer(capsys):
    code, _, err = run(capsys, "compute", "bracket", "--json", '{"X": {"d": true}, "Y": {}}')
    assert code == 2
    assert json.loads(err)["pointer"] == "/X/d"
    code, _, err = run(capsys, "compute", "bracket", "--json", '{"X": {}}')
    assert code == 2 and "Y" in json.loads(err)["message"]


def test_dimension_mismatch_pointer():
    with pytest.raises(UsageError) as exc:
        compute("bracket", {"X": {"loop": [{}, {}]}, "Y": {}})
    assert exc.value.pointer == "/X/loop"


def test_bad_json(capsys):
    code, _, err = run(capsys, "compute", "bracket", "--json", "{nope")
    assert code == 2


def test_failure_exit_codes(capsys):
    code, out, _ = run(capsys, "compute", "sectional", "--json", '{"g": {"c": 1}, "h": {"c": 2}}')
    assert code == 1 and json.loads(out)["result"]["error"] == "degenerate plane"
    code, out, _ = run(capsys, "compute", "classify", "--json", '{"realform": "mixed"}')
    assert code == 1 and "central type" in json.loads(out)["result"]["witness"]
    code, out, _ = run(capsys, "compute", "log", "--json", '{"backend": "float", "g": {"q": -2.0}}')
    assert code == 1 and json.loads(out)["result"]["error"] == "branch cut"


def test_classify_and_group_ops(capsys):
    code, out, _ = run(capsys, "compute", "classify", "--json", '{"realform": "heisenberg:one", "window": 3}')
    assert code == 0 and json.loads(out)["result"] == "noncompact"
    code, out, _ = run(capsys, "compute", "exp", "--json", '{"X": {"loop": [{"1": "1/2"}], "c": 3}}')
    assert code == 0 and json.loads(out)["result"]["central"] == ["3", "0"]
    code, out, _ = run(capsys, "compute", "geodesic", "--json",
                       '{"backend": "float", "X": {"d": [0, 1]}, "t": 3.141592653589793}')
    q = json.loads(out)["result"]["q"]
    assert code == 0 and q[0] == pytest.approx(-1.0)
    code, out, _ = run(capsys, "compute", "canonicalize", "--json",
                       '{"g": {"lam": [{"1": 1}]}, "window": 2, "case": "imaginary"}')
    assert code == 0 and json.loads(out)["result"]["case"] == "imaginary"
    code, _, _ = run(capsys, "compute", "exp", "--json", '{"base": "sl2", "X": {}}')
    assert code == 2


def test_curvature_op(capsys):
    data = {"base": "sl2", "g": {"loop": [{"0": 1}, {}, {}]}, "h": {"loop": [{}, {}, {"0": 1}]},
            "k": {"loop": [{"0": 1}, {}, {}]}}
    code, out, _ = run(capsys, "compute", "curvature", "--json", json.dumps(data))
    assert code == 0 and json.loads(out)["result"]["loop"][0] == {"0": ["1/2", "0"]}


def test_input_file_and_base_override(tmp_path, capsys):
    f = tmp_path / "in.json"
    f.write_text('{"X": {"loop": [{"1": 1}, {}]}, "Y": {"loop": [{"-1": 1}, {}]}}')
    code, out, _ = run(capsys, "compute", "bracket", "--input", str(f), "--base", "abelian:2")
    assert code == 0 and json.loads(out)["result"]["c"] == ["-1", "0"]


def test_verify_suite(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "jacobi", "--seed", "3", "--base", "sl2", "--trials", "10",
                       "--out", str(out_file))
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and "wall_time" not in rep
    assert json.loads(out_file.read_text()) == rep
    code, out, _ = run(capsys, "verify", "flatness", "--seed", "3", "--base", "sl2", "--trials", "5")
    assert code == 1 and json.loads(out)["failures"]
    code, out, _ = run(capsys, "verify", "signature", "--seed", "0", "--window", "5", "--timing")
    assert code == 0 and "wall_time" in json.loads(out)


def test_verify_is_reproducible(capsys):
    _, a, _ = run(capsys, "verify", "cocycle", "--seed", "9", "--trials", "5")
    _, b, _ = run(capsys, "verify", "cocycle", "--seed", "9", "--trials", "5")
    assert a == b


def test_verify_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "jacobi"])
    assert exc.value.code == 2
    code, _, _ = run(capsys, "verify", "jacobi", "--seed", "1", "--base", "e8")
    assert code == 2


def test_tame_fit_command(capsys):
    code, out, _ = run(capsys, "tame-fit", "--map", "d-action", "--window", "6", "--n", "0..2",
                       "--trials", "40", "--seed", "7")
    res = json.loads(out)
    assert code == 0 and res["r"] == 1 and res["certified"]
    code, _, _ = run(capsys, "tame-fit", "--map", "spin", "--seed", "7")
    assert code == 2


def test_validate_input_accepts_scalar_forms():
    validate_input("metric", {"X": {"c": "1/2-3i"}, "Y": {"d": [1, "2/3"]}})


@pytest.mark.skipif(shutil.which("km") is None, reason="console script not installed")
def test_console_script(tmp_path):
    p = subprocess.run(["km", "compute", "metric", "--json", '{"X": {"c": 1}, "Y": {"d": 1}}'],
                       capture_output=True, text=True, env={"KM_LOG": "DEBUG", "PATH": shutil.os.environ["PATH"]})
    assert p.returncode == 0 and json.loads(p.stdout)["result"] == ["-1", "0"]
