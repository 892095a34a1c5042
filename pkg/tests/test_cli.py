import json
import subprocess
import sys

import pytest

from starpi.analysis import CodimTable
from starpi.cli import main

T1 = json.dumps({"kind": "transpose", "k": 1})
T2 = json.dumps({"kind": "transpose", "k": 2})
E1 = json.dumps({"kind": "exchange", "h": 1})


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_codim_transpose1(capsys):
    code, out, _ = run(capsys, "codim", T1, "--n-max", "4")
    assert code == 0
    assert [l.split()[-1] for l in out.strip().splitlines()[1:]] == ["1", "1", "1", "1"]


def test_codim_exchange_csv(capsys, tmp_path):
    path = tmp_path / "e.json"
    path.write_text(E1)
    code, out, _ = run(capsys, "codim", str(path), "--n-max", "3", "--format", "csv")
    assert code == 0
    vals = CodimTable.from_csv(out)
    assert [vals[(k, n)] for k, n in sorted(vals)] == [2, 4, 8]


def test_codim_gamma(capsys):
    code, out, _ = run(capsys, "codim", T1, "--gamma", "2", "1", "--n-max", "3", "--format", "csv")
    assert code == 0
    vals = CodimTable.from_csv(out)
    assert vals[("Gamma*_{2,1}", 3)] == 1 and vals[("(M_1, t)", 3)] == 1


def test_codim_out_file(capsys, tmp_path):
    out = tmp_path / "table.csv"
    code, stdout, _ = run(capsys, "codim", E1, "--n-max", "2", "--format", "csv", "--out", str(out))
    assert code == 0 and stdout == ""
    assert CodimTable.from_csv(out.read_text())[("(M_1 + M_1^op, exc)", 2)] == 4


def test_invalid_spec_exit1(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "transpose"}')
    code, _, err = run(capsys, "codim", str(bad))
    assert code == 1 and "error" in err
    code, _, err = run(capsys, "codim", str(tmp_path / "missing.json"))
    assert code == 1


def test_cost_guard_exit2(capsys):
    code, _, err = run(capsys, "codim", json.dumps({"kind": "transpose", "k": 3}), "--n", "3", "--budget", "10")
    assert code == 2 and "refused" in err


def test_identity_true(capsys):
    code, out, _ = run(capsys, "identity", T1, "z1")
    assert code == 0 and out.strip() == "true"


def test_identity_false_with_witness(capsys):
    code, out, _ = run(capsys, "identity", T2, "y1*y2-y2*y1")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "false"
    assert lines[1].startswith("witness: y1=")


def test_identity_deterministic(capsys):
    first = run(capsys, "identity", T2, "y1*x1*y2 - y2*x1*y1")
    second = run(capsys, "identity", T2, "y1*x1*y2 - y2*x1*y1")
    assert first == second


def test_identity_non_multilinear(capsys):
    code, _, err = run(capsys, "identity", T2, "y1*y1")
    assert code == 1 and "error" in err


def test_capelli_printer(capsys):
    assert run(capsys, "capelli", "2")[1].strip() == "y1*x1*y2 - y2*x1*y1"
    assert run(capsys, "capelli", "1", "--kind", "z")[1].strip() == "z1"
    code, out, _ = run(capsys, "capelli", "3", "--deleted")
    assert code == 0 and len(out.strip().splitlines()) == 4
    assert len(run(capsys, "capelli", "3", "--kind", "x")[1].split(" - ")) == 4


def test_verify_thresholds_single(capsys):
    code, out, _ = run(capsys, "verify", "thresholds", json.dumps({"kind": "ut_star",
                                                                  "components": [{"kind": "transpose", "k": 1}]}))
    assert code == 0 and "PASS" in out and "violations: none" in out


def test_verify_tideal(capsys):
    code, out, _ = run(capsys, "verify", "tideal-containment", "--n-max", "3")
    assert code == 0 and out.strip().endswith("PASS")


def test_verify_exponents(capsys):
    code, out, _ = run(capsys, "verify", "exponents")
    assert code == 0 and "FAIL" not in out


def test_verify_simple_witnesses(capsys):
    code, out, _ = run(capsys, "verify", "simple-witnesses")
    assert code == 0 and out.count("PASS") == 3


def test_verify_direct_sum_pair(capsys):
    code, out, _ = run(capsys, "verify", "direct-sum", T2, E1, "--n-max", "3")
    assert code == 0 and "PASS" in out
    code, _, _ = run(capsys, "verify", "direct-sum", T2, "--n-max", "3")
    assert code == 1


def test_exponent(capsys):
    spec = json.dumps({"kind": "ut_star", "components": [{"kind": "transpose", "k": 2}, {"kind": "exchange", "h": 1}]})
    code, out, _ = run(capsys, "exponent", spec, T2)
    assert code == 0
    assert "exp* = 6" in out and "exp* = 4" in out


def test_prime_flags(capsys, monkeypatch):
    monkeypatch.setenv("STARPI_PRIME", "101")
    code, out, _ = run(capsys, "codim", T2, "--n-max", "2")
    assert code == 0
    code, _, err = run(capsys, "codim", T2, "--prime", "100")
    assert code == 1 and "prime" in err
    code, _, _ = run(capsys, "codim", T2, "--prime", "101", "--prime2", "101")
    assert code == 1
    monkeypatch.setenv("STARPI_PRIME", "abc")
    assert run(capsys, "codim", T2)[0] == 1
    # the flag wins over a bad environment value
    assert run(capsys, "codim", T2, "--n-max", "1", "--prime", "103")[0] == 0


def test_usage_errors(capsys):
    assert run(capsys)[0] == 1
    assert run(capsys, "codim")[0] == 1
    assert run(capsys, "codim", T1, "--n", "0")[0] == 1
    assert run(capsys, "verify", "nonsense")[0] == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "starpi", "capelli", "1", "--kind", "z"], capture_output=True,
                       text=True)
    assert r.returncode == 0 and r.stdout.strip() == "z1"
