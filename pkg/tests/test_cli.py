import json

import pytest

from qaequad.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_degree_exit_codes(capsys):
    code, out, _ = run(capsys, "check-degree", "--fn", "g1", "--n", "2", "--d", "1")
    assert code == 0 and json.loads(out)["member"]
    code, out, _ = run(capsys, "check-degree", "--fn", "g2", "--d", "1")
    assert code == 1 and json.loads(out)["violations"][0]["subset_mask"] == 3
    assert run(capsys, "check-degree", "--fn", "g0", "--d", "0")[0] == 0


def test_check_degree_simpson_reports_components(capsys):
    code, out, _ = run(capsys, "check-degree", "--fn", "g1", "--rule", "simpson", "--d", "1")
    assert code == 0 and set(json.loads(out)["components"]) == {"left", "midpoint", "right"}


def test_values_file(tmp_path, capsys):
    p = tmp_path / "v.json"
    p.write_text(json.dumps([0.0, 0.5, 1.0, 0.5]))
    assert run(capsys, "check-degree", "--values-file", str(p), "--d", "1")[0] == 1
    p.write_text(json.dumps([0.1, 0.2, 0.3]))
    assert run(capsys, "check-degree", "--values-file", str(p), "--d", "1")[0] == 2
    p.write_text(json.dumps([0.1, 1.2]))
    assert run(capsys, "check-degree", "--values-file", str(p), "--d", "1")[0] == 2


def test_build_circuit(capsys):
    code, out, _ = run(capsys, "build-circuit", "--fn", "g1")
    d = json.loads(out)
    assert code == 0 and d["cost"]["gates_per_encoding"] == 3
    assert [g["kind"] for g in d["circuit"]["gates"]].count("mcry") == 2
    code, out, _ = run(capsys, "build-circuit", "--fn", "g0")
    assert json.loads(out)["cost"]["gates_per_encoding"] == 1
    code, out, _ = run(capsys, "build-circuit", "--fn", "g2", "--K", "0,1")
    assert code == 1 and json.loads(out)["feasibility"]["feasible"] == [True, False]
    code, out, _ = run(capsys, "build-circuit", "--fn", "g2", "--K", "1", "--hw-profile", "unlimited")
    assert code == 0


def test_estimate(capsys):
    code, out, _ = run(capsys, "estimate", "--fn", "g1", "--rule", "midpoint", "--K", "0,1",
                       "--shots", "2048", "--mode", "exact")
    assert code == 0 and json.loads(out)["abs_error"] < 1e-6
    code, out, _ = run(capsys, "estimate", "--fn", "g0", "--K", "0,2", "--mode", "exact")
    assert abs(json.loads(out)["I_hat"] - 0.25) < 1e-6


def test_stochastic_seed_env(capsys, monkeypatch):
    args = ("estimate", "--fn", "g1", "--K", "0,1,2", "--shots", "128", "--mode", "stochastic")
    monkeypatch.setenv("QAE_SEED", "5")
    a = run(capsys, *args)[1]
    b = run(capsys, *args, "--seed", "5")[1]
    c = run(capsys, *args, "--seed", "6")[1]
    assert a == b != c
    monkeypatch.setenv("QAE_SEED", "x")
    assert run(capsys, *args)[0] == 2


def test_outputs_are_byte_stable(tmp_path, capsys):
    for argv in (("tradeoff", "--d", "1,2"), ("separation",), ("sobolev",),
                 ("estimate", "--fn", "g2", "--rule", "simpson", "--mode", "stochastic", "--seed", "3")):
        p1, p2 = tmp_path / "a", tmp_path / "b"
        assert main([*argv, "--out", str(p1)]) == 0
        assert main([*argv, "--out", str(p2)]) == 0
        assert p1.read_bytes() == p2.read_bytes()
    capsys.readouterr()


def test_tradeoff_csv(capsys):
    code, out, _ = run(capsys, "tradeoff", "--d", "1,2", "--eps-grid", "1e-2,1e-3,1e-4")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("rule,d,eps,n_star")
    assert len(lines) == 7


def test_separation_json(capsys):
    code, out, _ = run(capsys, "separation", "--s-grid", "0.1,0.45", "--eps-grid", "1e-2", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and [r["s"] for r in rows] == [0.1, 0.45]


def test_usage_errors(capsys):
    assert run(capsys, "tradeoff", "--eps-grid", "")[0] == 2
    assert run(capsys, "separation", "--s-grid", "0.7")[0] == 2
    assert run(capsys, "check-degree", "--fn", "g1")[0] == 2
    assert run(capsys, "estimate", "--K", "1,0")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "build-circuit", "--rule", "simpson")[0] == 2


def test_reproduce_table1(capsys):
    code, out, err = run(capsys, "reproduce", "table1")
    d = json.loads(out)
    assert code == 0 and d["all_pass"] and len(d["rows"]) == 12
    assert "12/12" in err
