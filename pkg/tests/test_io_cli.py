import json
import math
import subprocess
import sys

import pytest

from icp import io
from icp.cli import keyexample_rows, main
from icp.complex import generate_keyexample, generate_lattice
from icp.errors import SchemaError
from icp.solver import solve_dirichlet


def run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "icp.cli", *map(str, args)], capture_output=True, text=True, cwd=cwd)


def test_roundtrip_byte_identical(tmp_path, w8):
    c, a = w8
    text = io.dumps(io.complex_dict(c, a))
    c2, a2 = io.complex_from_dict(json.loads(text))
    assert io.dumps(io.complex_dict(c2, a2)) == text
    st, rep = solve_dirichlet(c, a, 1.0)
    s = io.dumps(io.state_dict(st, c, a))
    st2, _, _ = io.state_from_dict(json.loads(s))
    assert st2.u == st.u


def test_fmt_keeps_every_double():
    for x in (0.1, 1 / 3, math.pi, 1e-300, 2.0**60):
        assert float(io.fmt(x)) == x
    assert io.fmt(float("nan")) == '"nan"'


def test_schema_errors(w8):
    c, a = w8
    d = io.complex_dict(c, a)
    del d["theta"]["0,3"]
    with pytest.raises(SchemaError, match="0,3"):
        io.complex_from_dict(d)
    d = io.complex_dict(c, a)
    d["theta"]["0,3"] = 90.0
    with pytest.raises(SchemaError, match="radians"):
        io.complex_from_dict(d)
    with pytest.raises(SchemaError, match="NaN"):
        io.radii_from_dict({"r": {"1": "nan"}})
    with pytest.raises(SchemaError, match="format"):
        io.complex_from_dict({"format": "other", "faces": []})
    with pytest.raises(SchemaError):
        io.state_from_dict({"background": "euclidean", "u": {"0": "inf"}})


def write(path, obj):
    path.write_text(io.dumps(obj))
    return path


def test_check_bad_file_names_face(tmp_path):
    c, a = generate_lattice("square", 2)
    d = io.complex_dict(c, a)
    d["theta"]["0,1"] = 1.0
    f = write(tmp_path / "bad.json", d)
    r = run("check", f)
    assert r.returncode == 1
    lines = [json.loads(x) for x in r.stderr.splitlines()]
    assert any(x["error"] == "FaceConditionViolated" and 0 in x["vertices"] and 1 in x["vertices"] for x in lines)


def test_check_good_file_and_csv(tmp_path, w8):
    f = write(tmp_path / "w8.json", io.complex_dict(*w8))
    r = run("check", f)
    assert r.returncode == 0 and json.loads(r.stdout)["face_condition"]
    r = run("check", f, "--report", "csv")
    assert r.stdout.startswith("face_id,residual\n")


def test_io_errors_exit_2(tmp_path):
    assert run("check", tmp_path / "missing.json").returncode == 2
    assert main(["vel", str(tmp_path / "nope.json"), "--from", "0", "--to", "1"]) == 2
    assert main(["--threads", "0", "check", "x"]) == 2


def test_solve_layout_chain(tmp_path):
    f = tmp_path / "sq.json"
    assert run("complex", "gen", "--kind", "square", "--size", "6", "-o", f).returncode == 0
    s = tmp_path / "state.json"
    assert run("solve", f, "--boundary-r", "1", "-o", s).returncode == 0
    r = run("layout", s, "--svg", tmp_path / "p.svg", "--lift", tmp_path / "p.obj", "--dihedral-report", tmp_path / "d.csv")
    assert r.returncode == 0, r.stderr
    out = json.loads(r.stdout)
    assert out["embedded"] and out["max_dihedral_error"] < 1e-9
    assert "<svg" in (tmp_path / "p.svg").read_text()
    assert (tmp_path / "p.obj").read_text().count("\nf ") > 0
    r = run("ring", s, "--epsilon", str(6 * math.pi))
    assert r.returncode == 0 and json.loads(r.stdout)["min_ratio"] == pytest.approx(1.0)


def test_vel_command(tmp_path):
    g = write(tmp_path / "g.json", {"edges": [[0, 1], [1, 2]]})
    r = run("vel", g, "--from", "0", "--to", "2")
    assert json.loads(r.stdout)["vel"] == pytest.approx(3.0)
    r = run("vel", g, "--from", "0,1", "--to", "1")
    assert r.returncode == 1 and "SetsIntersect" in r.stderr


def test_demo_square(tmp_path):
    r = run("demo", "square", "--n", "3", "--out", tmp_path / "d")
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "d" / "square.svg").exists() and (tmp_path / "d" / "square.obj").exists()


def test_keyexample_table():
    rows = keyexample_rows(2)
    assert [r[3] for r in rows] == [8, 32, 128]
    for r in rows:
        assert abs(r[4] - r[1]) < 1e-12
    r = run("keyexample", "--level", "1")
    assert r.stdout.splitlines()[0].startswith("level,delta,epsilon")


def test_complex_validate(tmp_path):
    c, a = generate_keyexample(1)
    f = write(tmp_path / "k.json", io.complex_dict(c, a))
    out = json.loads(run("complex", "validate", f).stdout)
    assert out["euler_characteristic"] == 1 and out["has_angles"]
