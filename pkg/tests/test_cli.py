import json
import subprocess
import sys

import pytest

from flatlab.cli import main, parse_scalar
from flatlab.exact_scalar import rational, sqrt_rational


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_build_and_classify(tmp_path, capsys):
    path = tmp_path / "s.json"
    code, _, _ = run(["build", "--mcmullen-b", "2", "-o", str(path)], capsys)
    assert code == 0
    code, out, _ = run(["classify", str(path)], capsys)
    d = json.loads(out)
    assert code == 0
    assert d["genus"] == 2 and d["zero_orders"] == [1, 1]
    assert d["area"]["coordinates"] == ["12/1", "6/1"]


def test_rational_parameter(capsys):
    code, _, err = run(["build", "--mcmullen-b", "1"], capsys)
    assert code == 1
    lines = err.strip().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["error"] == "RationalParameter"


def test_missing_file(capsys):
    code, _, err = run(["classify", "missing.json"], capsys)
    assert code == 1 and json.loads(err)["error"] == "IOError"


def test_usage(capsys):
    assert run(["frobnicate"], capsys)[0] == 2
    assert run(["build"], capsys)[0] == 2


def test_periods(tmp_path, capsys):
    path = tmp_path / "s.json"
    run(["build", "--mcmullen-b", "1/2", "-o", str(path)], capsys)
    code, out, _ = run(["periods", str(path), "--json"], capsys)
    d = json.loads(out)
    assert (d["rel_rank"], d["abs_rank"], d["q_dim"]) == (5, 4, 4)
    assert len(d["left_inverse"]["kernel"]) == 1
    assert d["torus_cover"] is None


def test_planes_d_integral(capsys):
    code, out, _ = run(["planes", "--omega", "std4", "--test", "d-integral", "--D", "1", "--plane", "1,0,0,0;0,1,0,0"], capsys)
    d = json.loads(out)
    assert code == 0 and d["ok"] and d["certificate"] == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]


def test_planes_eigen(capsys):
    code, out, _ = run(["planes", "--omega", "split4", "--test", "eigen", "--matrix", "0,1,0,0;1,1,0,0;0,0,0,1;0,0,1,1"], capsys)
    d = json.loads(out)
    assert d["direct_sum"] and d["orthogonal"] and len(d["planes"]) == 2


def test_planes_size(capsys):
    code, out, _ = run(["planes", "--test", "size", "--size", "1,1,4,2,0"], capsys)
    assert json.loads(out)["verdict"] == "Small"


def test_veech_and_delta(tmp_path, capsys):
    s = tmp_path / "t.json"
    e = tmp_path / "e.json"
    run(["build", "--named", "torus", "-o", str(s)], capsys)
    assert run(["veech", str(s), "--radius", "4", "--budget", "1e6", "--emit", str(e)], capsys)[0] == 0
    code, out, _ = run(["delta", str(e), "--radii", "2,4", "--csv"], capsys)
    rows = out.strip().splitlines()
    assert rows[0] == "R,count,delta_hat"
    assert rows[1].startswith("2,52,") and rows[2].startswith("4,324,")


def test_chain_csv_deterministic(capsys):
    argv = ["chain", "--p", "0.5", "--ell", "6", "--steps", "200", "--seed", "42", "--csv"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b
    lines = a.splitlines()
    assert lines[0] == "step,state_id,alpha" and len(lines) == 201
    sid = int(lines[1].split(",")[1])
    assert 0 <= sid < 64


def test_margulis_check(tmp_path, capsys):
    sample = tmp_path / "d.csv"
    cfg = tmp_path / "cfg.json"
    run(["chain", "--model", "drift", "--steps", "500", "--csv", "-o", str(sample)], capsys)
    cfg.write_text(json.dumps({"levels": 200, "q": "3/20", "T1": 1, "epsilon": 0}))
    code, out, _ = run(["margulis-check", str(cfg), str(sample)], capsys)
    d = json.loads(out)
    assert code == 0 and d["verdict"] and d["M_b_measure"] == "0"


def test_threads_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("FLATLAB_THREADS", "1")
    s = tmp_path / "t.json"
    run(["build", "--named", "torus", "-o", str(s)], capsys)
    assert run(["veech", str(s), "--radius", "2"], capsys)[0] == 0


def test_round_trip_signature(tmp_path, capsys):
    for argv in (["--named", "octagon"], ["--named", "l-shape"], ["--mcmullen-b", "3"]):
        p = tmp_path / "x.json"
        run(["build", *argv, "-o", str(p)], capsys)
        _, out1, _ = run(["classify", str(p)], capsys)
        run(["build", *argv, "-o", str(p)], capsys)
        _, out2, _ = run(["classify", str(p)], capsys)
        assert out1 == out2


def test_parse_scalar():
    assert parse_scalar("3/2") == rational(3) / 2
    assert parse_scalar("1/2 + sqrt(5)/2") == (1 + sqrt_rational(5)) / 2
    assert parse_scalar("-sqrt(12)") == -2 * sqrt_rational(3)


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "flatlab.cli", "build", "--mcmullen-b", "1"], capture_output=True, text=True)
    assert r.returncode == 1 and "RationalParameter" in r.stderr
