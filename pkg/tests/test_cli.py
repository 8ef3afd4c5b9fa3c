import json

import pytest

from exchange_clear.cli import run
from exchange_clear.instance import serialize_instance

from conftest import fig1, fig4


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def fig4_file(tmp_path):
    p = tmp_path / "fig4.json"
    p.write_text(serialize_instance(fig4()))
    return str(p)


def test_solve_picef(capsys, fig4_file):
    code, out, _ = call(capsys, "solve", "--formulation", "picef", "--input", fig4_file)
    rep = json.loads(out)
    assert code == 0 and rep["objective"] == 4
    assert rep["solver"]["lp_value"] >= rep["objective"] - 1e-6


@pytest.mark.parametrize("form", ["cf", "picef-red", "hpief", "picef-bnp"])
def test_solve_other_formulations(capsys, fig4_file, form):
    code, out, _ = call(capsys, "solve", "--formulation", form, "--input", fig4_file)
    assert code == 0 and json.loads(out)["objective"] == 4


def test_relax_two_arm(capsys, tmp_path):
    code, out, _ = call(capsys, "family", "--name", "two-arm")
    p = tmp_path / "two.json"
    p.write_text(out)
    code, out, _ = call(capsys, "relax", "--formulation", "picef", "--input", str(p))
    assert code == 0 and json.loads(out)["solver"]["lp_value"] == 3.5
    code, out, _ = call(capsys, "solve", "--relax", "--formulation", "picef", "--input", str(p))
    assert json.loads(out)["solver"]["lp_value"] == 3.5


def test_udders_pipe(capsys, tmp_path, monkeypatch):
    import io
    import sys

    code, out, _ = call(capsys, "family", "--name", "udders", "--K", "3", "--L", "6")
    monkeypatch.setattr(sys, "stdin", io.StringIO(out))
    code, out, _ = call(capsys, "solve", "--formulation", "cf", "--input", "-")
    assert code == 0 and json.loads(out)["objective"] == 6


def test_verify_accepts_solve_report(capsys, tmp_path):
    inst_path = tmp_path / "fig1.json"
    inst_path.write_text(serialize_instance(fig1()))
    for form in ["cf", "picef", "picef-bnp"]:
        code, out, _ = call(capsys, "solve", "--formulation", form, "--input", str(inst_path))
        rep_path = tmp_path / f"{form}.json"
        rep_path.write_text(out)
        code, out, _ = call(capsys, "verify", "--input", str(inst_path), "--solution", str(rep_path))
        assert code == 0 and json.loads(out)["valid"]


def test_failure_prob_flag(capsys, tmp_path):
    inst_path = tmp_path / "fig1.json"
    inst_path.write_text(serialize_instance(fig1()))
    code, out, _ = call(capsys, "solve", "--formulation", "hpief", "--input", str(inst_path),
                        "--failure-prob", "0.8")
    assert code == 2  # failure-aware objective is not defined for HPIEF
    code, out, _ = call(capsys, "solve", "--formulation", "picef", "--input", str(inst_path),
                        "--failure-prob", "0.8")
    rep = json.loads(out)
    assert code == 0 and rep["expected_objective"] <= rep["objective"]


def test_verify_rejects_tampered(capsys, tmp_path, fig4_file):
    code, out, _ = call(capsys, "solve", "--input", fig4_file)
    rep = json.loads(out)
    rep["objective"] = 5
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(rep))
    assert call(capsys, "verify", "--input", fig4_file, "--solution", str(bad))[0] == 3
    rep["objective"] = 4
    rep["cycles"] = [[5, 6]]
    rep["chains"] = [[1, 3, 4, 5]]
    bad.write_text(json.dumps(rep))
    code, _, err = call(capsys, "verify", "--input", fig4_file, "--solution", str(bad))
    assert code == 3 and "vertex 5" in err


def test_exit_codes(capsys, tmp_path, fig4_file):
    assert call(capsys, "solve")[0] == 2
    assert call(capsys, "solve", "--formulation", "pief", "--input", fig4_file)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"ndds": 0, "pairs": 2, "arcs": [[1, 1, 1]], "cycle_cap": 2, "chain_cap": 0}')
    code, out, err = call(capsys, "solve", "--input", str(bad))
    assert code == 4 and out == "" and "loop" in err
    assert call(capsys, "solve", "--input", str(tmp_path / "missing.json"))[0] == 4
    assert call(capsys, "solve", "--input", fig4_file, "--node-limit", "0")[0] == 3


def test_cap_override(capsys, fig4_file):
    code, out, _ = call(capsys, "solve", "--input", fig4_file, "--chain-cap", "1", "--cycle-cap", "2")
    rep = json.loads(out)
    assert rep["instance"]["chain_cap"] == 1 and rep["objective"] == 4  # 2-cycle (5,6) + one arc from each NDD


def test_generate_deterministic(capsys):
    a = call(capsys, "generate", "--pairs", "10", "--ndds", "2", "--density", "0.3", "--seed", "7")[1]
    b = call(capsys, "generate", "--pairs", "10", "--ndds", "2", "--density", "0.3", "--seed", "7")[1]
    assert a == b and json.loads(a)["pairs"] == 10
    assert call(capsys, "generate", "--pairs", "3", "--weights", "bogus")[0] == 2


def test_reports_identical_modulo_time(capsys, fig4_file):
    reps = []
    for _ in range(2):
        rep = json.loads(call(capsys, "solve", "--formulation", "picef-bnp", "--input", fig4_file)[1])
        rep.pop("wall_time_ms")
        reps.append(rep)
    assert reps[0] == reps[1]


def test_compare(capsys, fig4_file):
    code, out, _ = call(capsys, "compare", "--input", fig4_file)
    rep = json.loads(out)
    assert code == 0 and set(rep["lpr"]) == {"cf", "picef", "hpief"}


def test_backend_env(capsys, fig4_file, monkeypatch):
    monkeypatch.setenv("EXCHANGE_CLEAR_BACKEND", "scipy")
    code, out, _ = call(capsys, "solve", "--input", fig4_file)
    assert code == 0 and json.loads(out)["objective"] == 4
    monkeypatch.setenv("EXCHANGE_CLEAR_BACKEND", "nope")
    assert call(capsys, "solve", "--input", fig4_file)[0] == 4
