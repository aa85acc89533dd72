"""CLI behaviour: exit codes, determinism, agreement with the library."""

import pytest

from hallforge import cli, hall
from hallforge.gf import make_field
from hallforge.hall import IntPolynomial
from hallforge.presentation import preset
from hallforge.repcat import list_indecomposables


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def data_rows(text):
    return [l for l in text.splitlines() if l and not l.startswith("#")]


# -- indec -------------------------------------------------------------------

def test_indec_ct_a3(capsys):
    code, out, _ = run(capsys, "indec", "--preset", "ct-a3-cyclic", "-p", "2",
                       "--dim-bound", "4")
    assert code == 0
    rows = data_rows(out)
    assert len(rows) == 6
    assert rows == sorted(rows)
    assert rows[0] == "P1 (1,1,0) 1"


def test_indec_hereditary_a2(capsys):
    code, out, _ = run(capsys, "indec", "--preset", "hereditary-a2", "-p", "2",
                       "--dim-bound", "2")
    assert code == 0
    assert len(data_rows(out)) == 3


def test_missing_algebra_is_usage_error(capsys):
    code, _, err = run(capsys, "indec", "-p", "2")
    assert code == 2
    assert "algebra" in err


def test_missing_required_flag_prints_usage(capsys):
    code, _, err = run(capsys, "indec", "--preset", "hereditary-a2")
    assert code == 2
    assert "usage" in err


def test_unknown_preset(capsys):
    code, _, err = run(capsys, "indec", "--preset", "nope", "-p", "2")
    assert code == 2


# -- hall ---------------------------------------------------------------------

def test_hall_examples(capsys):
    code, out, _ = run(capsys, "hall", "--preset", "hereditary-a2", "-p", "2",
                       "-n", "1", "-M", "P1", "-N", "S1", "-L", "S2")
    assert (code, out.strip()) == (0, "1")
    code, out, _ = run(capsys, "hall", "--preset", "hereditary-a2", "-p", "2",
                       "-n", "2", "-M", "P1", "-N", "S1", "-L", "S2")
    assert (code, out.strip()) == (0, "1")
    code, out, _ = run(capsys, "hall", "--preset", "hereditary-a2", "-p", "2",
                       "-n", "1", "-M", "S2+S2", "-N", "S2", "-L", "S2")
    assert (code, out.strip()) == (0, "3")


def test_hall_agrees_with_library(capsys):
    cat = list_indecomposables(preset("ct-a3-cyclic", make_field(2)), make_field(2), 3)
    for m, n, l in [(("P1",), ("S1",), ("S2",)),
                    (("S1", "S1"), ("S1",), ("S1",)),
                    (("P1", "S2"), ("S1",), ("S2", "S2"))]:
        want = hall.hall_number(cat.rep_from_labels(m), n, l, cat)
        code, out, _ = run(capsys, "hall", "--preset", "ct-a3-cyclic", "-p", "2",
                           "-n", "1", "--dim-bound", "3",
                           "-M", "+".join(m), "-N", "+".join(n), "-L", "+".join(l))
        assert code == 0 and int(out.strip()) == want


def test_hall_unknown_label(capsys):
    code, _, err = run(capsys, "hall", "--preset", "hereditary-a2", "-p", "2",
                       "-n", "1", "-M", "P9", "-N", "S1", "-L", "S2")
    assert code == 4


# -- fit -----------------------------------------------------------------------

def test_fit_constant_line(capsys):
    code, out, _ = run(capsys, "fit", "--preset", "ct-a3-cyclic", "-p", "2",
                       "-M", "P1", "-N", "S1", "-L", "S2", "--degrees", "1,2,3,4")
    assert code == 0
    assert out.splitlines()[0] == \
        "P1 | S1 | S2 | φ = 1 | points = 2:1 4:1 8:1 16:1 | Fitted"


def test_fit_cross_prime_observation(capsys):
    code, out, _ = run(capsys, "fit", "--preset", "hereditary-a2", "-p", "2",
                       "-M", "S2+S2", "-N", "S2", "-L", "S2",
                       "--degrees", "1,2,3,4", "--cross-prime")
    assert code == 0
    lines = out.splitlines()
    assert any(l.startswith("# cross-prime p=3: agree") for l in lines)


def test_fit_exit_code_on_validation_failure(monkeypatch, capsys):
    # exit-contract unit test: force a ValidationFailed fit
    failed = hall.HallFit("x", 2, ("S1",), (), ("S1",), (), (),
                          IntPolynomial(()), (1, 2, 3),
                          hall.STATUS_VALIDATION_FAILED)
    monkeypatch.setattr(cli, "fit_hall_polynomial",
                        lambda *a, **k: failed)
    code, out, _ = run(capsys, "fit", "--preset", "hereditary-a2", "-p", "2",
                       "-M", "S1", "-N", "0", "-L", "S1", "--degrees", "1,2,3")
    assert code == 5


# -- verify ----------------------------------------------------------------

def test_verify_ct_a3_exit_zero(capsys, tmp_path):
    out_file = tmp_path / "report.txt"
    code, out, _ = run(capsys, "verify", "--preset", "ct-a3-cyclic", "-p", "2",
                       "--dim-bound", "2", "--degrees", "1,2,3,4",
                       "--out", str(out_file))
    assert code == 0
    assert out_file.read_text() == out
    kv = (tmp_path / "report.txt.kv").read_text()
    assert "failed = 0" in kv
    assert kv.splitlines()[0] == "algebra = ct-a3-cyclic"


def test_verify_deterministic(capsys):
    args = ("verify", "--preset", "ct-a3-cyclic", "-p", "2",
            "--dim-bound", "2", "--degrees", "1,2,3")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_verify_budget_exit(capsys):
    code, _, err = run(capsys, "verify", "--preset", "ct-a3-cyclic", "-p", "2",
                       "--dim-bound", "3", "--degrees", "1,2", "--budget", "1")
    assert code == 3


def test_budget_env_var(capsys, monkeypatch):
    monkeypatch.setenv(cli.ENV_BUDGET, "1")
    code, _, _ = run(capsys, "indec", "--preset", "ct-a3-cyclic", "-p", "2")
    assert code == 3
    monkeypatch.setenv(cli.ENV_BUDGET, str(10 ** 7))
    code, _, _ = run(capsys, "indec", "--preset", "ct-a3-cyclic", "-p", "2")
    assert code == 0


# -- archeck -----------------------------------------------------------------

def test_archeck_examples(capsys):
    code, out, _ = run(capsys, "archeck", "--preset", "hereditary-a3", "-p", "3",
                       "--dim-bound", "3")
    assert code == 0
    assert "mismatches=0" in out


# -- algebra files ------------------------------------------------------------

def test_algebra_file_matches_preset(capsys, tmp_path):
    alg = preset("ct-a3-cyclic", make_field(2))
    path = tmp_path / "cycle.alg"
    path.write_text(alg.to_text())
    code1, out1, _ = run(capsys, "indec", "--preset", "ct-a3-cyclic", "-p", "2",
                         "--dim-bound", "3")
    code2, out2, _ = run(capsys, "indec", "--algebra-file", str(path), "-p", "2",
                         "--dim-bound", "3")
    assert code1 == code2 == 0
    assert out1 == out2


def test_malformed_algebra_file(capsys, tmp_path):
    path = tmp_path / "bad.alg"
    path.write_text("quiver x\n")
    code, _, err = run(capsys, "indec", "--algebra-file", str(path), "-p", "2")
    assert code == 2


def test_missing_algebra_file(capsys, tmp_path):
    code, _, err = run(capsys, "indec", "--algebra-file",
                       str(tmp_path / "absent.alg"), "-p", "2")
    assert code == 2
