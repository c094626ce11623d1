from __future__ import annotations

import csv
import io
import subprocess
import sys

import pytest

from regretfear.cli import main
from regretfear.engine import AgentProfile
from regretfear.functions import RegretQ

F = "(0.5, 0.6; 0.27, 0.4)"
G = "(0.7, 0.3; 0.28, 0.7)"


def run(*argv, profile=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), profile=profile, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_compare_medical_pair():
    code, out, _ = run("compare", F, G, "--interpretation", "utility")
    assert code == 0
    fields = dict(tok.split("=", 1) for tok in out.split() if "=" in tok)
    assert float(fields["psi"]) == pytest.approx(-6.50896e-3, abs=1e-15)
    assert fields["relation"] == "f<g"
    assert "profile=u:identity v:poly:1 q:power:3" in out


def test_compare_identical():
    code, out, _ = run("compare", F, F)
    assert code == 0 and "relation=f~g" in out


def test_compare_classical_with_unknown_is_usage_error():
    code, out, err = run("compare", "(1, 0.5; ?, 0.5)", "(1, 1)", "--mode", "classical")
    assert code == 2 and out == ""
    assert "UnknownOutcomePresent" in err


@pytest.mark.parametrize("argv, fragment", [
    (["compare", "(1, 0.5)", "(1, 1)"], "ProbabilitySumMismatch"),
    (["compare", "(1 1)", "(1, 1)"], "line 1, column 4"),
    (["compare", F, G, "--profile", "q:power:2"], "ParseError"),
    (["sweep", "--case", "I"], "at least one --fear"),
    (["sweep", "--case", "I", "--fear", "q:power:3"], "not a fear function"),
    (["corpus", "/nonexistent/x.cases"], "error"),
])
def test_usage_errors(argv, fragment):
    code, _, err = run(*argv)
    assert code == 2
    assert fragment in err


def test_argparse_errors_exit_2(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["compare", F]) == 2


def test_normalize_flag():
    code, out, _ = run("compare", "(1, 2; 0, 2)", "(0.5, 1)", "--normalize")
    assert code == 0 and "relation=f~g" in out


def test_medcase_default_passes():
    code, out, _ = run("medcase")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 5
    assert all(line.endswith("PASS") for line in lines[1:])


def test_medcase_other_fear_is_report_only():
    _, base, _ = run("medcase")
    _, out, _ = run("medcase", "--profile", "v:poly:2")
    assert "PASS" not in out and "report-only" in out
    assert base.splitlines()[2].split()[1] != out.splitlines()[2].split()[1]


def test_medcase_zero_unknown_mass_collapses():
    _, out, _ = run("medcase", "--pu", "0")
    values = [float(line.split()[1].split("=")[1]) for line in out.splitlines()[1:]]
    assert values == pytest.approx([-0.0065] * 4, abs=5e-5)


def test_sweep_writes_csv(tmp_path):
    path = tmp_path / "sweep.csv"
    code, out, _ = run("sweep", "--case", "I", "--fear", "v:poly:1", "--fear", "v:sin:1",
                       "--grid", "101", "--out", str(path))
    assert code == 0 and out == ""
    data = path.read_bytes()
    assert b"\r" not in data
    rows = list(csv.reader(io.StringIO(data.decode("utf-8"))))
    assert rows[0] == ["p_u", "v:poly:1", "v:sin:1"]
    assert len(rows) == 102
    row = next(r for r in rows[1:] if float(r[0]) == 0.1)
    assert float(row[1]) == pytest.approx(-0.0225, abs=1e-4)


def test_sweep_out_of_range_is_domain_error():
    code, _, err = run("sweep", "--case", "II", "--fear", "v:poly:1", "--pu-max", "0.9")
    assert code == 2 and "DomainViolation" in err
    code, _, _ = run("sweep", "--case", "II", "--fear", "v:poly:1", "--pu-max", "0.9", "--clamp")
    assert code == 0


def test_contour_corner():
    code, out, _ = run("contour", "--grid", "2")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and len(rows) == 5
    assert rows[1][:2] == ["0", "0"]
    assert float(rows[1][2]) == pytest.approx(-0.0065, abs=5e-5)


def test_corpus_default_and_determinism():
    code, out, _ = run("corpus")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1].startswith("cases=23 with_expectation=23 agree=")
    assert sum(line.startswith("table2:") for line in lines) == 13
    assert all(("agree" in line) for line in lines[1:-1])
    assert run("corpus")[1] == out


def test_corpus_table2_case_2_prediction():
    _, out, _ = run("corpus", "table2")
    line = next(ln for ln in out.splitlines() if ln.startswith("table2:2 "))
    assert "predicted=f<g" in line


def test_corpus_without_expectations(tmp_path):
    path = tmp_path / "mine.cases"
    path.write_text("[case one]\nf = (1, 1)\ng = (2, 1)\n", encoding="utf-8")
    code, out, _ = run("corpus", str(path))
    assert code == 0
    assert "mine:one" in out and "agree" not in out.splitlines()[1]
    assert out.splitlines()[-1] == "cases=1 with_expectation=0 agree=0"


def test_corpus_parse_error(tmp_path):
    path = tmp_path / "bad.cases"
    path.write_text("[case one]\nf = (1, 1)\n", encoding="utf-8")
    code, _, err = run("corpus", str(path))
    assert code == 2 and "line 1" in err


def test_audit_default_exit_0_and_deterministic(tmp_path):
    code, out, _ = run("audit", "--n", "300", "--seed", "3")
    assert code == 0
    assert out.splitlines()[-1] == "total counterexamples=0"
    assert run("audit", "--n", "300", "--seed", "3")[1] == out


def test_audit_injected_non_skew_q(tmp_path):
    bad = AgentProfile(q=RegretQ.custom(lambda x: x ** 3 - 0.01, "shifted_cube"))
    path = tmp_path / "findings.csv"
    code, out, _ = run("audit", "--n", "200", "--findings", str(path), profile=bad)
    assert code == 1
    assert "completeness[seed=0 index=" in out
    assert len(path.read_text().splitlines()) > 1


def test_breakeven_and_no_root():
    code, out, _ = run("breakeven", "--f1", "10", "--g1", "3", "--lam", "0.8",
                       "--profile", "v:poly:0.5")
    assert code == 0 and "p_bar=0.768032" in out and "sign_changes=1" in out
    code, out, _ = run("breakeven", "--f1", "4000", "--g1", "3000", "--lam", "0.8",
                       "--profile", "v:poly:0.5")
    assert code == 0 and out.startswith("no root")


def test_prop_commands():
    _, out, _ = run("prop1", "--f1", "10", "--g1", "3", "--lam", "0.8", "--profile", "v:poly:0.5")
    assert "violations=0" in out
    _, out, _ = run("prop2", "--f1", "2500", "--g1", "2400", "--lam", str(33 / 34), "--p", "0.34")
    assert "case_I" in out and "modified=f<g" in out
    _, out, _ = run("prop2", "--f1", "2500", "--g1", "2400", "--lam", str(33 / 34), "--p", "0.34",
                    "--profile", "v:none")
    assert out.startswith("NoReversalFound")


def test_reflect():
    code, out, _ = run("reflect", "--f1", "4000", "--g1", "3000", "--pf", "0.8", "--pg", "1")
    assert code == 0 and "reflection=holds" in out and "f<g" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "regretfear", "compare", "(1, 1)", "(0, 1)"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "relation=f>g" in proc.stdout
