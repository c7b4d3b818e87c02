import csv
import json

import numpy as np
import pytest

from trifrob import cli
from trifrob.errors import ParseError


def _run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_grid_and_tols():
    g = cli.parse_grid(["s=1:2:3", "v3=1+1j:2+1j:2"])
    assert np.allclose(g["s"], [1, 1.5, 2]) and g["s"].dtype == float
    assert np.allclose(g["v3"], [1 + 1j, 2 + 1j])
    with pytest.raises(ParseError):
        cli.parse_grid(["s=1:2"])
    with pytest.raises(ParseError):
        cli.parse_grid(["s=1:1:4"])
    t = cli.parse_tols("painleve", ["residual=1e-3"])
    assert t["residual"] == 1e-3
    assert set(cli.parse_tols("lift", ["1e-2"]).values()) == {1e-2}
    with pytest.raises(ParseError):
        cli.parse_tols("lift", ["bogus=1"])
    with pytest.raises(ParseError):
        cli.parse_tols("lift", ["-1"])


def test_verify_prepotential_pass(capsys, tmp_path):
    code, out, _ = _run(["verify-prepotential", "--example", "pavlyk", "--points", "20",
                         "--pencil-points", "5", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert "CHECK wdvv" in out and "mu=-1/4" in out and "SUMMARY status=PASS" in out
    assert (tmp_path / "report.txt").read_text().splitlines()[-1] == "SUMMARY status=PASS"


def test_verify_prepotential_from_file(capsys, tmp_path):
    from trifrob.frobenius import trivial_cubic
    f = tmp_path / "F.json"
    f.write_text(trivial_cubic().to_json())
    code, out, _ = _run(["verify-prepotential", "--input", str(f), "--points", "5", "--pencil-points", "2"],
                        capsys)
    assert code == 0


@pytest.mark.parametrize("name,failing", [("pavlyk-perturbed", "wdvv"), ("a4", "trihamiltonian")])
def test_verify_prepotential_negative(name, failing, capsys):
    code, out, _ = _run(["verify-prepotential", "--example", name, "--points", "20", "--pencil-points", "5"],
                        capsys)
    assert code == 2
    assert any(l.startswith(f"CHECK {failing} ") and l.endswith("FAIL") for l in out.splitlines())


def test_verify_prepotential_bad_input(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{not json")
    code, _, err = _run(["verify-prepotential", "--input", str(f)], capsys)
    assert code == 1 and err.startswith("ERROR")
    code, _, _ = _run(["verify-prepotential", "--example", "missing"], capsys)
    assert code == 1


def test_lift_writes_tables(capsys, tmp_path):
    code, out, _ = _run(["lift", "--grid", "v3=2:2.5:2", "v4=4:4.5:2", "--out", str(tmp_path)], capsys)
    assert code == 0, out
    rows = list(csv.reader(open(tmp_path / "psi_hat.csv")))
    assert len(rows) == 5 and len(rows[0]) == 8 + 32
    res = list(csv.DictReader(open(tmp_path / "residuals.csv")))
    assert all(float(r["linear"]) < 1e-6 for r in res)
    assert abs(float(res[0]["kappa_re"]) - 5.3312781092) < 1e-8
    assert len(list(csv.reader(open(tmp_path / "ctensor.csv")))[0]) == 8 + 2 * 20


def test_lift_sign_flip_and_generic_input(capsys, tmp_path):
    code, _, _ = _run(["lift", "--grid", "v3=2.1:2.1:1", "v4=3.3:3.3:1", "--sign", "-1",
                       "--out", str(tmp_path / "m")], capsys)
    assert code == 0
    _run(["lift", "--grid", "v3=2.1:2.1:1", "v4=3.3:3.3:1", "--out", str(tmp_path / "p")], capsys)
    m = np.array(list(csv.reader(open(tmp_path / "m" / "psi_hat.csv")))[1], float)
    p = np.array(list(csv.reader(open(tmp_path / "p" / "psi_hat.csv")))[1], float)
    assert np.allclose(m[8:32], p[8:32]) and np.allclose(m[32:], -p[32:])
    f = tmp_path / "init.json"
    a, b, c = 0.3, 0.2, -0.4
    f.write_text(json.dumps({"s": [0.5, 0.5], "a": a, "b": b, "c": c,
                             "mu": [0, float(np.sqrt(a * a + b * b + c * c))]}))
    code, out, _ = _run(["lift", "--input", str(f), "--grid", "v3=2:2:1", "v4=-1+1j:-1+1j:1",
                         "--out", str(tmp_path / "g")], capsys)
    assert code == 0, out


def test_lift_errors(capsys, tmp_path):
    code, _, err = _run(["lift", "--grid", "v3=1:1:1", "--out", str(tmp_path)], capsys)
    assert code == 1 and "CoincidentCoordinates" in err
    code, _, _ = _run(["lift", "--grid", "w=1:2:2"], capsys)
    assert code == 1


def test_painleve(capsys, tmp_path):
    code, out, _ = _run(["painleve", "--grid", "s=1.05:1.15:6", "--out", str(tmp_path)], capsys)
    assert code == 0
    rows = list(csv.DictReader(open(tmp_path / "painleve.csv")))
    assert len(rows) == 6 and all(float(r["residual_okamoto"]) < 1e-4 for r in rows)
    code, _, _ = _run(["painleve", "--variant", "pvimu", "--grid", "s=1.05:1.15:5", "--out", str(tmp_path)],
                      capsys)
    assert code == 0
    assert "residual_okamoto" not in open(tmp_path / "painleve.csv").readline()


def test_painleve_coarse_grid_warns(capsys):
    code, _, err = _run(["painleve", "--grid", "s=1.05:1.15:3"], capsys)
    assert code == 1 and err.startswith("WARNING GridTooCoarse")


def test_elliptic_is_deterministic(capsys, tmp_path):
    code, out1, _ = _run(["elliptic", "--charts", "1", "--seed", "7"], capsys)
    code2, out2, _ = _run(["elliptic", "--charts", "1", "--seed", "7"], capsys)
    assert code == code2 == 0 and out1 == out2
    f = tmp_path / "charts.json"
    f.write_text(json.dumps([[[0, 0], [1, 0], [2.3, 0.7], [-1.1, 0.9]]]))
    code, out, _ = _run(["elliptic", "--input", str(f)], capsys)
    assert code == 0 and "CHECK W " in out


def test_isomonodromy(capsys):
    code, out, _ = _run(["isomonodromy", "--grid", "eps=0.37:0.5:2", "t=2:2:1"], capsys)
    assert code == 0
    code, out, _ = _run(["isomonodromy", "--frozen", "--grid", "eps=0.37:0.37:1", "t=2:2:1"], capsys)
    assert code == 2 and "isomonodromy_frozen" in out
