import json
import math

import pytest

from jlip.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_metric_all(capsys):
    code, out, _ = run(capsys, "metric", "--domain", "ball2", "--x", "0,0", "--y", "0.5,0",
                       "--all", "--no-timestamp")
    d = json.loads(out)
    assert code == 0
    assert d["j"] == pytest.approx(math.log(2), abs=1e-15)
    assert d["rho"] == pytest.approx(math.log(3), abs=1e-15)
    assert abs(d["k_est"] - math.log(2)) <= d["k_tolerance"]


def test_metric_punctured_and_half(capsys):
    _, out, _ = run(capsys, "metric", "--domain", "ball2:puncture=0,0", "--x", "0.1,0", "--y", "0.2,0")
    assert json.loads(out)["j"] == pytest.approx(math.log(2))
    _, out, _ = run(capsys, "metric", "--domain", "half2", "--x", "0,1", "--y", "0,2", "--all",
                    "--format", "csv")
    rows = dict(line.split(",") for line in out.strip().splitlines()[1:])
    assert float(rows["j"]) == pytest.approx(math.log(2))
    assert float(rows["rho"]) == pytest.approx(math.log(2))


def test_seventeen_digits(capsys):
    _, out, _ = run(capsys, "metric", "--domain", "ball2", "--x", "0,0", "--y", "0.5,0",
                    "--no-timestamp")
    assert '"j": 0.69314718055994529' in out


def test_exit_codes(capsys):
    assert run(capsys, "metric", "--domain", "ball2", "--x", "0,0", "--y", "1.5,0")[0] == 3
    assert run(capsys, "metric", "--domain", "blob", "--x", "0,0", "--y", "0.5,0")[0] == 2
    assert run(capsys, "sup", "--map", "nope")[0] == 2
    assert run(capsys, "sup", "--map", "sigma:a=0.5,0", "--samples", "10")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "sup", "--map", "identity:ball2", "--seed", "-1")[0] == 2
    assert run(capsys, "apply", "--map", "cayley:b2h", "--x", "1,0")[0] == 3


def test_sup_identity_and_sigma(capsys):
    code, out, _ = run(capsys, "sup", "--map", "identity:ball2", "--samples", "1000")
    d = json.loads(out)
    assert code == 0 and d["sup_estimate"] == 1.0 and "timestamp" in d
    code, out, _ = run(capsys, "sup", "--map", "sigma:a=0.5,0", "--samples", "2000", "--seed", "7",
                       "--no-timestamp")
    d = json.loads(out)
    assert code == 0 and 1.49 <= d["sup_estimate"] <= 1.5 + 1e-9
    assert d["bounds"]["upper"] == 1.5 and d["seed"] == 7
    assert set(d) >= {"sup_estimate", "witness", "bounds", "families", "seed"}


def test_sup_is_byte_identical_across_threads(capsys):
    args = ["sup", "--map", "power:k=3", "--samples", "3000", "--no-timestamp"]
    _, a, _ = run(capsys, *args, "--threads", "1")
    _, b, _ = run(capsys, *args, "--threads", "4")
    assert a == b


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("JLIP_SEED", "42")
    _, out, _ = run(capsys, "sup", "--map", "cayley:h2b", "--samples", "1000", "--no-timestamp")
    assert json.loads(out)["seed"] == 42


def test_conjecture_report(capsys):
    _, out, _ = run(capsys, "sup", "--map", "conj34:a=0.5,0", "--samples", "1000")
    d = json.loads(out)
    assert d["conjectured"] == pytest.approx(1.4649735207179271)
    assert 1 <= d["sup_estimate"] <= 2 + 1e-9


def test_trace_csv(capsys, tmp_path):
    out = tmp_path / "t.csv"
    code, _, _ = run(capsys, "trace", "--map", "hsinv:a=0,0:r=1", "--family", "horizontal",
                     "--t", "10,1e8", "--format", "csv", "--out", str(out))
    lines = out.read_text().splitlines()
    assert code == 0 and lines[0] == "family,t,ratio"
    fam, t, r = lines[1].split(",")
    assert fam == "horizontal" and float(r) == pytest.approx(1.9267090588732654)
    assert run(capsys, "trace", "--map", "cayley:h2b", "--family", "nope")[0] == 2


def test_apply(capsys):
    _, out, _ = run(capsys, "apply", "--map", "cayley:h2b", "--x", "0,1;1,1", "--no-timestamp")
    d = json.loads(out)
    assert d["image"][0] == pytest.approx([0.0, 0.0])


def test_verify_lemmas(capsys):
    code, out, err = run(capsys, "verify", "--suite", "lemmas", "--seed", "0", "--no-timestamp")
    d = json.loads(out)
    assert code == 0 and d["passed"] and d["failed"] == 0
    assert "PASS" in err


def test_verify_failure_exit_code(capsys, monkeypatch):
    from jlip import verify
    from jlip.verify import Check

    monkeypatch.setitem(verify.SUITES, "lemmas", lambda **_: [Check("lemmas", "x", False, 1.0)])
    code, out, _ = run(capsys, "verify", "--suite", "lemmas", "--quiet", "--format", "csv")
    assert code == 4 and "fail" in out
