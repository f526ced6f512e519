import numpy as np

from faberapprox.cli import main


def test_params(capsys):
    assert main(["params", "--N", "1000000", "--dim", "2"]) == 0
    out = capsys.readouterr().out
    assert "m=1 n=13" in out
    assert "not reached" in out


def test_params_infeasible(capsys):
    assert main(["params", "--N", "10", "--dim", "2"]) == 1


def test_encode_decode(tmp_path):
    code = tmp_path / "code.txt"
    pts = tmp_path / "pts.csv"
    out = tmp_path / "vals.txt"
    assert main(["encode", "--dim", "2", "--alpha", "1", "--m", "1", "--n", "2",
                 "--function", "tensor-smooth:seed=3", "--out", str(code)]) == 0
    np.savetxt(pts, np.array([[0.5, 0.5], [0.0, 0.3]]), delimiter=",")
    assert main(["decode", "--code", str(code), "--points", str(pts), "--out", str(out)]) == 0
    vals = [float(v) for v in out.read_text().split()]
    assert len(vals) == 2 and vals[1] == 0.0


def test_encode_dimension_mismatch(tmp_path, capsys):
    spec = '{"family": "fooling", "d": 3, "alpha": 1.0}'
    try:
        rc = main(["encode", "--dim", "2", "--alpha", "1", "--m", "1", "--n", "1",
                   "--function", spec, "--out", str(tmp_path / "c")])
    except SystemExit as exc:
        rc = exc.code
    assert rc != 0


def test_decode_corrupt(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("manifold-code\nformat_version 1\n")
    pts = tmp_path / "p.csv"
    pts.write_text("0.5,0.5\n")
    assert main(["decode", "--code", str(bad), "--points", str(pts)]) == 2


def test_verify_exit_status(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["verify", "--suite", "covering", "--dim", "2", "--m", "2", "--out", str(a)]) == 0
    assert main(["verify", "--suite", "covering", "--dim", "2", "--m", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_reports_violation(monkeypatch, tmp_path, capsys):
    import faberapprox.suites as suites

    monkeypatch.setattr(suites, "truncation_error_bound", lambda *a: 1e-9)
    assert main(["verify", "--suite", "lemma22", "--m", "2", "--out", str(tmp_path / "r.csv")]) == 1
    assert "VIOLATION" in capsys.readouterr().err
