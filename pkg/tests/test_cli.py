import json

import pytest

from pmodlab.cli import main


def run(capsys, *argv):
    code = main(["--json", *argv])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def checks(rep):
    return {c["name"]: c["status"] for c in rep["checks"]}


@pytest.mark.parametrize("spec,order,d,phi", [("C2xC2", 4, 2, 1), ("C4", 4, 1, 2)])
def test_group_info(capsys, spec, order, d, phi):
    code, rep = run(capsys, "group-info", spec)
    assert code == 0
    r = rep["results"]
    assert (r["order"], r["d"], r["frattini_order"]) == (order, d, phi)
    assert set(rep) >= {"command", "inputs", "results", "checks", "seed", "elapsed_ms"}


@pytest.mark.parametrize("spec,n,dim", [("C2xC2", 2, 5), ("C5xC5", 2, 26), ("C4", -2, 1)])
def test_omega(capsys, spec, n, dim):
    code, rep = run(capsys, "omega", spec, str(n))
    assert code == 0 and rep["results"]["dim"] == dim


def test_omega_dump_and_guard(capsys):
    code, rep = run(capsys, "omega", "C2xC2", "1", "--dump-module")
    assert code == 0 and "module" in rep["results"]
    assert main(["omega", "C2xC2", "9"]) == 2


def test_verify_theorem1(capsys):
    code, rep = run(capsys, "verify", "theorem1", "C2xC2", "--jf-dim", "2")
    assert code == 0 and all(s == "pass" for s in checks(rep).values())
    assert main(["verify", "theorem1", "C2xC2", "--jf-dim", "1"]) == 2
    assert main(["verify", "theorem1"]) == 2


def test_verify_presentation(capsys):
    code, rep = run(capsys, "verify", "presentation", "--p", "3")
    assert code == 0 and rep["results"]["basis_size"] == 10
    assert main(["verify", "presentation", "--p", "7"]) == 2


def test_verify_cohomology(capsys):
    code, rep = run(capsys, "verify", "cohomology", "C3xC3")
    assert code == 0
    assert rep["results"]["chain"]["H2(G,Omega2)"] == 1


def test_verify_selftest(capsys):
    code, rep = run(capsys, "verify", "selftest")
    assert code == 0 and not any(s == "fail" for s in checks(rep).values())


@pytest.mark.parametrize("fmt", ["text", "svg"])
def test_diagram(capsys, fmt, tmp_path):
    code, rep = run(capsys, "diagram", "C3xC3", "--format", fmt)
    assert code == 0 and rep["results"]["boxes"] == 10
    assert ("<svg" in rep["results"]["document"]) == (fmt == "svg")
    out = tmp_path / f"d.{fmt}"
    assert main(["diagram", "C2xC2", "--which", "omega_minus_2", "--out", str(out)]) == 0
    assert "a0" in out.read_text()
    capsys.readouterr()


def test_diagram_rejects_non_cpcp():
    assert main(["diagram", "C4"]) == 2
    assert main(["diagram", "C2xC2xC2"]) == 2


def test_extension_roundtrip(capsys, tmp_path):
    for cocycle, d in (("zero", 5), ("nonzero", 2)):
        path = tmp_path / f"{cocycle}.json"
        code, rep = run(capsys, "extension", "C2xC2", "--cocycle", cocycle, "--out", str(path))
        assert code == 0 and rep["results"]["order"] == 128 and rep["results"]["d"] == d
        code, rep = run(capsys, "group-info", str(path))
        assert code == 0 and rep["results"]["d"] == d and rep["results"]["order"] == 128


def test_artin_schreier(capsys):
    code, rep = run(capsys, "artin-schreier", "--p", "2", "--m", "2")
    assert code == 0
    r = rep["results"]
    assert (r["dimJK"], r["theorem1"], r["action"], r["F_classes_dim"]) == (1, "pass", "trivial", 0)
    code, rep = run(capsys, "artin-schreier", "--p", "3", "--m", "1", "--check-trace")
    assert code == 0 and rep["results"]["trace_sweep"]["valid_a"] == 18
    assert rep["results"]["trace_sweep"]["failures"] == 0
    code, rep = run(capsys, "artin-schreier", "--p", "2", "--m", "1", "--check-pairing")
    assert code == 0 and rep["results"]["pairing_sweep"]["nondegenerate"]
    assert main(["artin-schreier", "--p", "3", "--m", "3"]) == 2
    assert main(["artin-schreier", "--p", "4"]) == 2


def test_flags_anywhere_and_text_mode(capsys):
    assert main(["group-info", "C2xC2", "--seed", "7"]) == 0
    text = capsys.readouterr().out
    assert "[pass]" in text and "seed=7" in text
    code, rep = run(capsys, "group-info", "C3xC3")
    assert rep["seed"] == 0


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["group-info", "C6"]) == 2
    assert main(["group-info", "/nonexistent.json"]) == 2
    assert main(["nope"]) == 2
    capsys.readouterr()


def test_deterministic_given_seed(capsys):
    reports = []
    for _ in range(2):
        code, rep = run(capsys, "--seed", "3", "artin-schreier", "--p", "3", "--check-pairing")
        rep.pop("elapsed_ms")
        reports.append(rep)
    assert reports[0] == reports[1] and reports[0]["seed"] == 3


def test_failed_check_exits_one(capsys, monkeypatch):
    import pmodlab.cli as cli

    real = cli.verify_theorem1

    def broken(G, n):
        r = real(G, n)
        r.consistent = False
        return r

    monkeypatch.setattr(cli, "verify_theorem1", broken)
    code, rep = run(capsys, "verify", "theorem1", "C2xC2")
    assert code == 1
    assert any(c["status"] == "fail" for c in rep["checks"])
