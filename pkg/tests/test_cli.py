"""End-to-end CLI behavior: records, CSV determinism, config, exit codes."""

import csv
import math
import subprocess
import sys

import pytest

from sudlerlab import cli, verify
from sudlerlab.dist import farey_enumerate


def run(argv, capsys):
    rc = cli.main(argv)
    out, err = capsys.readouterr()
    return rc, out, err


def _record(out):
    return dict(line.split(" = ", 1) for line in out.strip().splitlines())


# -- eval ------------------------------------------------------------------------


def test_eval_half_prints_log5(capsys):
    rc, out, _ = run(["eval", "1/2"], capsys)
    assert rc == 0
    rec = _record(out)
    assert rec["q"] == "2" and rec["cf"] == "[0; 2]"
    assert float(rec["h"]) == pytest.approx(math.log(5), abs=1e-12)
    # 17 significant digits round-trip
    assert rec["h"] == f"{math.log(5):.17g}"


def test_eval_cf_form_matches_fraction(capsys):
    rc1, out1, _ = run(["eval", "cf:2,2"], capsys)
    rc2, out2, _ = run(["eval", "2/5"], capsys)
    assert rc1 == rc2 == 0 and out1 == out2


def test_eval_rejects_zero(capsys):
    rc, _, err = run(["eval", "0"], capsys)
    assert rc == 2 and "undefined at 0" in err


def test_eval_rejects_presets(capsys):
    rc, _, err = run(["eval", "golden"], capsys)
    assert rc == 2 and "irrational" in err


def test_eval_rejects_garbage(capsys):
    rc, _, _ = run(["eval", "7/0"], capsys)
    assert rc == 2
    rc, _, _ = run(["eval", "cf:2,x"], capsys)
    assert rc == 2


def test_eval_folds_beyond_unit_interval(capsys):
    rc, out, _ = run(["eval", "5/3"], capsys)
    assert rc == 0
    rec = _record(out)
    assert rec["cf"] == "[1; 1, 2]"
    rc, out3, _ = run(["eval", "3/5"], capsys)
    assert float(rec["h"]) == pytest.approx(-float(_record(out3)["h"]), abs=1e-12)


# -- scan ------------------------------------------------------------------------


def test_scan_qmax80_row_count(tmp_path, capsys):
    path = tmp_path / "scan.csv"
    rc, _, _ = run(["--out", str(path), "scan", "--qmax", "80"], capsys)
    assert rc == 0
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 1965
    assert list(rows[0]) == ["p", "q", "x", "h", "psi", "h_model"]


def test_scan_reruns_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["--out", str(a), "scan", "--qmax", "40"], capsys)
    run(["--out", str(b), "scan", "--qmax", "40"], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_scan_window_filter(tmp_path, capsys):
    path = tmp_path / "w.csv"
    rc, _, _ = run(
        ["--out", str(path), "scan", "--qmax", "200", "--near", "0.1",
         "--radius", "0.01"], capsys)
    assert rc == 0
    rows = list(csv.DictReader(path.open()))
    assert rows and all(abs(float(r["x"]) - 0.1) <= 0.01 for r in rows)


def test_scan_model_column(tmp_path, capsys):
    from sudlerlab.jones import vol_41

    path = tmp_path / "m.csv"
    run(["--out", str(path), "scan", "--qmax", "10"], capsys)
    for r in csv.DictReader(path.open()):
        x = float(r["x"])
        want = vol_41() / (2 * math.pi * x) - 1.5 * math.log(x)
        assert float(r["h_model"]) == pytest.approx(want, abs=1e-12)


def test_scan_requires_radius_with_near(capsys):
    rc, _, _ = run(["scan", "--qmax", "40", "--near", "0.5"], capsys)
    assert rc == 2


# -- verify ----------------------------------------------------------------------


def test_verify_epsilon_report(tmp_path, capsys):
    path = tmp_path / "eps.csv"
    rc, _, err = run(["--out", str(path), "verify", "--suite", "epsilon"], capsys)
    assert rc == 0 and "4 cases passed" in err
    rows = list(csv.DictReader(path.open()))
    assert [list(rows[0])] == [["check_id", "case_id", "lhs", "rhs", "margin", "passed"]]
    assert all(r["passed"] == "True" for r in rows)


def test_verify_failing_suite_exits_3(tmp_path, capsys, monkeypatch):
    def fake_suite():
        return [verify._case("fake", "always_fails", 0.0, 1.0)]

    monkeypatch.setitem(verify.SUITES, "epsilon", fake_suite)
    rc, _, err = run(["--out", str(tmp_path / "f.csv"), "verify",
                      "--suite", "epsilon"], capsys)
    assert rc == 3 and "1/1 cases failed" in err


def test_verify_unknown_suite_is_parse_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--suite", "nonsense"])
    assert exc.value.code == 2
    capsys.readouterr()


# -- dist ------------------------------------------------------------------------


def test_dist_small_sweep(tmp_path, capsys):
    path = tmp_path / "d.csv"
    rc, out, _ = run(["--out", str(path), "dist", "--N", "60", "--stat", "pq"],
                     capsys)
    assert rc == 0
    assert "KS = " in out and "stat = pq" in out
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0]) == ["p", "q", "sum_partial_quotients", "logJ",
                             "stat_logJ", "stat_pq"]
    assert len(rows) == sum(1 for _ in farey_enumerate(60))


def test_dist_logJ_prints_centering(capsys):
    rc, out, _ = run(["dist", "--N", "50", "--stat", "logJ"], capsys)
    assert rc == 0 and "D = " in out


def test_dist_report_csv(tmp_path, capsys):
    rep = tmp_path / "rep.csv"
    rc, _, _ = run(["dist", "--N", "50", "--stat", "pq", "--report", str(rep)],
                   capsys)
    assert rc == 0
    rows = list(csv.DictReader(rep.open()))
    assert list(rows[0]) == ["y", "emp_cdf", "stable_cdf"]
    ecdf = [float(r["emp_cdf"]) for r in rows]
    assert ecdf == sorted(ecdf) and ecdf[-1] == pytest.approx(1.0)


def test_dist_rejects_small_N(capsys):
    rc, _, _ = run(["dist", "--N", "10"], capsys)
    assert rc == 2


def test_global_flags_accepted_after_subcommand(tmp_path, capsys):
    # --out and friends work on either side of the subcommand
    post = tmp_path / "post.csv"
    pre = tmp_path / "pre.csv"
    rc, _, _ = run(["scan", "--qmax", "30", "--out", str(post)], capsys)
    assert rc == 0
    rc, _, _ = run(["--out", str(pre), "scan", "--qmax", "30"], capsys)
    assert rc == 0
    assert post.read_bytes() == pre.read_bytes()
    # a prefix value survives the subparser pass
    rc, out, _ = run(["--precision-bits", "256", "eval", "1/2"], capsys)
    assert rc == 0 and _record(out)["q"] == "2"


# -- config ----------------------------------------------------------------------


def test_config_file_is_read_and_flag_overrides(tmp_path, capsys, monkeypatch):
    bad = tmp_path / "cfg.txt"
    bad.write_text("precision_bits = 32\n")
    monkeypatch.setenv(cli.ENV_CONFIG, str(bad))
    rc, _, err = run(["eval", "1/2"], capsys)
    assert rc == 2 and "precision_bits" in err
    # an explicit flag wins over the file
    rc, out, _ = run(["--precision-bits", "256", "eval", "1/2"], capsys)
    assert rc == 0 and "h = " in out


def test_config_rejects_unknown_key(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("qmax = 7\n")
    monkeypatch.setenv(cli.ENV_CONFIG, str(cfg))
    rc, _, err = run(["eval", "1/2"], capsys)
    assert rc == 2 and "unknown config key" in err


def test_config_comments_and_blanks_ok(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("# comment\n\nthreads = 1\nqcap = 4000  # inline\n")
    monkeypatch.setenv(cli.ENV_CONFIG, str(cfg))
    rc, _, _ = run(["eval", "1/2"], capsys)
    assert rc == 0


# -- entry point -----------------------------------------------------------------


def test_module_entry_point_subprocess():
    res = subprocess.run(
        [sys.executable, "-m", "sudlerlab.cli", "eval", "1/3"],
        capture_output=True, text=True, timeout=120,
    )
    assert res.returncode == 0
    assert "q = 3" in res.stdout
