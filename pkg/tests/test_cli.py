import csv
import json
import subprocess
import sys


from circlemethod.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_no_command_is_usage_error(capsys):
    code, _, err = run(capsys)
    assert code == 2 and "usage" in err


def test_help_exits_cleanly(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "goldbach" in out


def test_bad_number_is_usage_error(capsys):
    code, _, err = run(capsys, "goldbach", "--max", "lots")
    assert code == 2 and "not a number" in err


def test_sieve_window(capsys):
    code, out, _ = run(capsys, "sieve", "--hi", "1e3")
    w = json.loads(out)["window"]
    assert code == 0
    assert w["primes"] == 168 and w["mobius_sum"] == 2


def test_sieve_psi(capsys):
    code, out, _ = run(capsys, "sieve", "--psi", "1e6")
    assert code == 0 and json.loads(out)["psi"][0]["passed"]
    # at y = 100 the deviation is about 6, well above y / (40 log y)
    code, out, err = run(capsys, "sieve", "--psi", "100")
    assert code == 1 and "reproduce:" in err


def test_expsum_csv(capsys, tmp_path):
    path = tmp_path / "s.csv"
    code, _, _ = run(capsys, "expsum", "--x", "1e4", "--alpha", "0", "0.25", "--csv", str(path))
    assert code == 0
    rows = list(csv.reader(open(path)))
    assert len(rows) == 3


def test_lemmas(capsys):
    code, out, _ = run(capsys, "lemmas", "--x", "1e4", "--trials", "5")
    assert code == 0
    assert json.loads(out)


def test_vaughan_identity(capsys):
    code, out, _ = run(capsys, "vaughan", "--identity", "2000", "--U", "10", "--V", "10")
    assert code == 0 and json.loads(out)["passed"]


def test_vaughan_decomposition(capsys):
    code, out, _ = run(capsys, "vaughan", "--x", "1e4", "--alpha", "0.1", "0.2")
    assert code == 0


def test_bounds_check_csv(capsys):
    code, out, _ = run(capsys, "bounds", "check", "--x", "1e25", "--q", "1e6", "--regime", "sax")
    assert code == 0
    header, row = list(csv.reader(out.splitlines()))
    assert header == ["x", "q", "bound", "actual", "margin"]
    assert float(row[4]) > 0


def test_bounds_check_needs_q(capsys):
    code, _, err = run(capsys, "bounds", "check", "--x", "1e25")
    assert code == 2 and "--q" in err


def test_bounds_desk(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "bounds", "desk", "--x", "1e5", "--alpha", str(1 / 40 + 1e-7), "--out", str(out))
    assert code == 0 and json.loads(out.read_text())["passed"]


def test_majorarc(capsys):
    code, out, _ = run(capsys, "majorarc", "--x", "1e4", "--max-zeros", "1000")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "majorarc", "--x", "1e5", "--alpha", "0", "0.001")
    assert code == 0 and len(json.loads(out)["rows"]) == 2


def test_majorarc_outside_limit_is_usage_error(capsys):
    code, _, err = run(capsys, "majorarc", "--x", "1e5", "--alpha", "0.4")
    assert code == 2 and "limit" in err


def test_goldbach_resume(capsys, tmp_path):
    ck = tmp_path / "g.jsonl"
    code, first, _ = run(capsys, "goldbach", "--max", "1e5", "--checkpoint", str(ck))
    assert code == 0
    code, second, _ = run(capsys, "goldbach", "--max", "1e5", "--checkpoint", str(ck), "--resume")
    a, b = json.loads(first), json.loads(second)
    assert a.pop("elapsed") is not None and b.pop("elapsed") is not None
    assert a == b


def test_goldbach_cap_is_resource_error(capsys):
    code, _, err = run(capsys, "goldbach", "--max", "2e9")
    assert code == 3 and "resource" in err


def test_gap(capsys):
    code, out, _ = run(capsys, "gap", "--x", "1.1e10", "1e12")
    assert code == 0 and all(r["passed"] for r in json.loads(out))


def test_gap_precondition(capsys):
    code, _, _ = run(capsys, "gap", "--x", "1e9")
    assert code == 2


def test_pipeline_desk(capsys):
    code, out, _ = run(capsys, "pipeline", "--desk")
    rep = json.loads(out)
    assert code == 0 and rep["desk"] and rep["result"]["positive"] and rep["agreement"]


def test_pipeline_requires_desk(capsys):
    code, _, err = run(capsys, "pipeline")
    assert code == 2 and "desk" in err


def test_ledger_exit_status_and_reproduce_line(capsys):
    code, out, err = run(capsys, "ledger", "--paper-constants", "--per-decade", "1")
    rep = json.loads(out)
    assert code == 1
    assert rep["printed_failures"] and not rep["derived_failures"]
    assert "reproduce: circlemethod ledger --paper-constants --per-decade 1" in err
    code, _, _ = run(capsys, "ledger", "--paper-constants", "--per-decade", "1", "--derived-only")
    assert code == 0


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "circlemethod.cli", "gap", "--x", "1.1e10"], capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
