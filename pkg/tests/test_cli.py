import json

import pytest

from gzsreg.cli import main
from gzsreg.korbits import BorelSubalgebra, OrbitClass, open_orbit_conjugator, representative_flag
from gzsreg.io import matrix_to_json, read_matrix
from gzsreg.linalg import RationalMatrix


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_phi_lower_triangular(tmp_path, capsys):
    f = write(tmp_path, "m.json", [["0", "0", "0"], ["1", "0", "0"], ["1/2", "3", "0"]])
    code, out, _ = run(["phi", f], capsys)
    assert code == 0
    assert json.loads(out)["levels"] == ["t", "t^2", "t^3"]


def test_phi_diagonal(tmp_path, capsys):
    f = write(tmp_path, "m.json", [["1", "0"], ["0", "2"]])
    code, out, _ = run(["phi", f], capsys)
    assert json.loads(out)["levels"] == ["t - 1", "t^2 - 3*t + 2"]


def test_phi_nilfibre_instance(tmp_path, capsys):
    # regular nilpotent of the (+, -, +) component with a1 = 2, a2 = -1, a3 = 5
    f = write(tmp_path, "m.json", [["0", "0", "2"], ["-1", "0", "5"], ["0", "0", "0"]])
    code, out, _ = run(["phi", f], capsys)
    assert json.loads(out)["levels"] == ["t", "t^2", "t^3"]


@pytest.mark.parametrize(
    "payload",
    [
        "not json",
        [["1", "2"], ["3"]],
        [["abc", "0"], ["0", "1"]],
        [[1.5, 0], [0, 1]],
        [["1", "2", "3"]],
        [["1/0"]],
    ],
)
def test_parse_errors_exit_2(tmp_path, capsys, payload):
    path = tmp_path / "bad.json"
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload))
    code, _, err = run(["phi", str(path)], capsys)
    assert code == 2 and "error" in err


def test_decimal_strings_are_exact(tmp_path, capsys):
    f = write(tmp_path, "m.json", [["1.5"]])
    assert json.loads(run(["phi", f], capsys)[1])["levels"] == ["t - 3/2"]


def test_missing_file_exit_2(tmp_path, capsys):
    code, _, _ = run(["sreg-check", str(tmp_path / "nope.json")], capsys)
    assert code == 2


def test_sreg_check_zero(tmp_path, capsys):
    f = write(tmp_path, "z.json", [["0"] * 3 for _ in range(3)])
    code, out, _ = run(["sreg-check", f], capsys)
    data = json.loads(out)
    assert code == 0 and data["sreg"] is False
    assert data["levels"][0]["regular"] and not data["levels"][1]["regular"]


def test_sreg_check_principal_jordan(tmp_path, capsys):
    f = write(tmp_path, "j.json", [["0", "1", "0"], ["0", "0", "1"], ["0", "0", "0"]])
    code, out, _ = run(["sreg-check", f], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["sreg"] and data["nilfibre_sreg"]
    assert [lv["intersection_dim"] for lv in data["levels"]] == [0, 0, None]


def test_sreg_check_disagreement_exit_3(tmp_path, capsys, monkeypatch):
    import gzsreg.cli as cli

    monkeypatch.setattr(cli, "is_sreg_differentials", lambda x: False)
    f = write(tmp_path, "j.json", [["0", "1"], ["0", "0"]])
    code, _, err = run(["sreg-check", f], capsys)
    assert code == 3 and "disagree" in err


def test_classify_flags(tmp_path, capsys):
    f = write(tmp_path, "std.json", matrix_to_json(RationalMatrix.identity(3)))
    code, out, _ = run(["classify", f], capsys)
    data = json.loads(out)
    assert data["orbit"] == {"kind": "closed", "i": 3, "j": None} and data["sign"] == "+"

    rev = RationalMatrix.permutation([3, 2, 1])
    f = write(tmp_path, "rev.json", matrix_to_json(rev))
    data = json.loads(run(["classify", f], capsys)[1])
    assert data["label"] == "Closed(1)" and data["sign"] == "-"

    rep = representative_flag(OrbitClass.nonclosed(1, 3), 3).basis
    f = write(tmp_path, "open.json", matrix_to_json(rep))
    data = json.loads(run(["classify", f], capsys)[1])
    assert data["orbit"] == {"kind": "nonclosed", "i": 1, "j": 3}


def test_classify_singular_exit_2(tmp_path, capsys):
    f = write(tmp_path, "s.json", [["1", "1"], ["1", "1"]])
    assert run(["classify", f], capsys)[0] == 2


def test_classify_borel_spanning_set(tmp_path, capsys):
    b = BorelSubalgebra(open_orbit_conjugator(3))
    f = write(tmp_path, "b.json", [matrix_to_json(m) for m in b.basis()])
    code, out, _ = run(["classify", "--borel", f], capsys)
    assert code == 0 and json.loads(out)["label"] == "NonClosed(1,3)"
    not_borel = [matrix_to_json(RationalMatrix.identity(3))]
    f = write(tmp_path, "nb.json", not_borel)
    assert run(["classify", "--borel", f], capsys)[0] == 2


def test_build_borel(capsys):
    code, out, _ = run(["build-borel", "--signs", "++-"], capsys)
    data = json.loads(out)
    assert code == 0 and data["pattern"] == ["h * 0", "0 h 0", "* * h"]
    assert run(["build-borel", "--signs=-+"], capsys)[0] == 2


def test_components(capsys):
    code, out, _ = run(["components", "--n", "2", "--samples", "3"], capsys)
    data = json.loads(out)
    assert code == 0 and data["count"] == 4
    assert run(["components", "--n", "9"], capsys)[0] == 2


def test_construct_sreg(tmp_path, capsys):
    code, out, _ = run(["construct-sreg", "--orbits", "1,2,1"], capsys)
    data = json.loads(out)
    assert code == 0 and all(data["verification"].values())
    assert data["signs"] == "++-"
    path = write(tmp_path, "x.json", data["matrix"])
    x = read_matrix(path)
    assert x.size == 3
    assert run(["construct-sreg", "--orbits", "1,3"], capsys)[0] == 2


def test_verify_all_n1(tmp_path, capsys):
    out_file = tmp_path / "report.json"
    code, out, err = run(["verify", "--suite", "all", "--n", "1", "--out", str(out_file)], capsys)
    assert code == 0 and out == ""
    assert "wall time" in err
    reports = json.loads(out_file.read_text())
    assert [r["suite"] for r in reports] == ["korbits", "nilfibre", "sreg"]
    assert all(r["failed"] == 0 for r in reports)


def test_verify_is_deterministic(capsys):
    first = run(["verify", "--suite", "sreg", "--n", "2", "--trials", "10", "--seed", "4"], capsys)[1]
    second = run(["verify", "--suite", "sreg", "--n", "2", "--trials", "10", "--seed", "4"], capsys)[1]
    assert first == second


def test_verify_nilfibre_n2_components(capsys):
    code, out, _ = run(["verify", "--suite", "nilfibre", "--n", "2", "--trials", "5"], capsys)
    data = json.loads(out)
    census = next(r for r in data["records"] if r["tag"] == "component-census")
    assert code == 0 and census["count"] == 4
    assert census["components"]["+-+"] == ["h 0 *", "* h *", "0 0 h"]


def test_verify_korbits_n2_counts(capsys):
    code, out, _ = run(["verify", "--suite", "korbits", "--n", "2", "--trials", "5"], capsys)
    data = json.loads(out)
    census = next(r for r in data["records"] if r["tag"] == "orbit-census")
    assert code == 0 and census["closed"] == 3 and census["nonclosed"] == 3


def test_verify_failure_exit_1(capsys, monkeypatch):
    import gzsreg.verify as verify

    monkeypatch.setattr(verify, "is_sreg_differentials", lambda x: not verify.is_sreg_centralizer(x))
    code, _, err = run(["verify", "--suite", "sreg", "--n", "1", "--trials", "3"], capsys)
    assert code == 1 and "FAILED" in err


def test_bad_arguments_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "bogus"])
    assert exc.value.code == 2
    assert run(["verify", "--n", "7"], capsys)[0] == 2
