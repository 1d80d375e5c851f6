"""Command-line interface: parsing, output schemas, exit statuses."""

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path

import pytest

from helpers import GOLDEN_DIR, rel
from whitadd.cli import UsageError, main, parse_point, parse_scalar
from whitadd.green import CoulombParams, SphericalPoint, hostler_green

pytestmark = pytest.mark.usefixtures("no_env_digits")


@pytest.fixture(autouse=True)
def no_env_digits(monkeypatch):
    monkeypatch.delenv("WHITADD_DIGITS", raising=False)


def run(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


# --- scalar grammar --------------------------------------------------------------

def test_parse_scalar_forms():
    assert parse_scalar("pi") == math.pi
    assert parse_scalar("-pi") == -math.pi
    assert parse_scalar("2pi") == 2 * math.pi
    assert parse_scalar("pi/3") == math.pi / 3
    assert parse_scalar("1.5pi/3") == math.pi / 2
    assert parse_scalar("42") == 42 and isinstance(parse_scalar("42"), int)
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar("2.5") == 2.5
    assert parse_scalar("1+2j") == 1 + 2j
    with pytest.raises(UsageError):
        parse_scalar("abc")
    with pytest.raises(UsageError):
        parse_scalar("")


def test_parse_point():
    pt = parse_point("3,0.4,0.0")
    assert (pt.r, pt.theta, pt.phi) == (3.0, 0.4, 0.0)
    with pytest.raises(UsageError):
        parse_point("3,0.4")


# --- eval ------------------------------------------------------------------------

def test_eval_whittaker_w(capsys):
    rc, out, _ = run(["eval", "whittaker_w", "--kappa", "0", "--mu", "0.5",
                      "--r", "3"], capsys)
    assert rc == 0
    assert "= 0.2231301601" in out


def test_eval_legendre(capsys):
    rc, out, _ = run(["eval", "legendre", "--l", "2", "--x", "0.5"], capsys)
    assert rc == 0 and "= -0.125" in out


def test_eval_hostler_json_value_encoding(capsys):
    rc, out, _ = run(["eval", "hostler", "--g", "1", "--k", "0.7",
                      "--p", "3,0.4,0.0", "--p0", "1.2,2.2,5.1", "--json"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert payload["schema"] == 1
    assert payload["command"] == "eval" and payload["function"] == "hostler"
    want = hostler_green(CoulombParams(1.0, 0.7),
                         SphericalPoint(3.0, 0.4, 0.0),
                         SphericalPoint(1.2, 2.2, 5.1))
    # 17 significant digits: value strings round-trip doubles exactly
    assert payload["value"]["re"] == format(want, ".17g")
    assert float(payload["value"]["re"]) == want


def test_eval_partial_wave_reports_diagnostics(capsys):
    rc, out, _ = run(["eval", "partial_wave", "--g", "1", "--k", "0.7",
                      "--p", "2,1.1,0.7", "--p0", "1,2,4", "--json"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert payload["n_terms"] > 3
    assert payload["condition_number"] >= 1.0
    assert payload["tail_estimate"] >= 0.0


def test_eval_missing_argument(capsys):
    rc, _, err = run(["eval", "whittaker_w", "--kappa", "0"], capsys)
    assert rc == 2 and "error" in err


def test_eval_digits_below_extended_floor(capsys):
    rc, _, err = run(["eval", "kummer_m", "--a", "1", "--b", "2", "--z", "1",
                      "--digits", "10"], capsys)
    assert rc == 2 and "error" in err


def test_eval_env_digits(monkeypatch, capsys):
    monkeypatch.setenv("WHITADD_DIGITS", "40")
    rc, out, _ = run(["eval", "kummer_m", "--a", "0.5", "--b", "1.5",
                      "--z", "2", "--json"], capsys)
    assert rc == 0 and json.loads(out)["digits"] == 40
    # an explicit flag beats the environment
    rc, out, _ = run(["eval", "kummer_m", "--a", "0.5", "--b", "1.5",
                      "--z", "2", "--digits", "35", "--json"], capsys)
    assert json.loads(out)["digits"] == 35


# --- verify ------------------------------------------------------------------------

def test_verify_list(capsys):
    rc, out, _ = run(["verify", "--list"], capsys)
    assert rc == 0
    for name in ("whittaker_addition", "lemma_binomial", "pi_addition", "delta_sum"):
        assert name in out


def test_verify_unknown_identity(capsys):
    rc, _, err = run(["verify", "nope"], capsys)
    assert rc == 2 and "error" in err


def test_verify_grid_override_json(capsys):
    rc, out, _ = run(["verify", "lemma_binomial", "--grid", "N=0,1,2",
                      "--grid", "nu=1/3", "--json", "-"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert payload["identity"] == "lemma_binomial"
    assert len(payload["rows"]) == 3
    assert payload["passed"] == 3 and payload["failed"] == 0
    assert all(r["exact"] is True and r["passed"] is True for r in payload["rows"])
    # exact rationals survive serialization
    assert payload["rows"][0]["lhs"]["fraction"].count("/") == 1


def test_verify_bad_grid_name(capsys):
    rc, _, err = run(["verify", "lemma_binomial", "--grid", "bogus=1"], capsys)
    assert rc == 2 and "error" in err


def test_verify_csv_header(capsys):
    rc, out, _ = run(["verify", "gamma_zero", "--grid", "kappa=-0.7",
                      "--grid", "r0=1", "--grid", "r=2,5", "--csv", "-"], capsys)
    assert rc == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["index", "kappa", "r0", "r", "lhs", "rhs", "abs_err",
                       "rel_err", "n_terms", "condition_number", "digits_lost",
                       "exact", "passed", "error"]
    assert len(rows) == 3
    assert all(r[-3] == "" and r[-2] == "true" for r in rows[1:])


def test_verify_failure_exit_code(capsys):
    rc, out, err = run(["verify", "whittaker_addition", "--grid", "kappa=-0.7",
                        "--grid", "r0=1", "--grid", "r=2",
                        "--grid", "gamma=pi/2", "--threshold", "1e-20"], capsys)
    assert rc == 1
    assert "FAIL" in out
    assert err.strip()  # failure count lands on stderr


def test_verify_parallel_rows_keep_order(capsys):
    rc, out, _ = run(["verify", "delta_sum", "--grid", "n=0,1,2,3,4,5",
                      "--jobs", "2", "--json", "-"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert [r["index"] for r in payload["rows"]] == list(range(6))
    assert payload["failed"] == 0


def test_verify_remark53_json(capsys):
    rc, out, _ = run(["verify", "--preset", "remark53", "--json", "-"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert payload["preset"] == "remark53"
    assert rel(payload["t0"], 1.0723911e7) < 1e-4
    assert abs(payload["normalized_sum"] - 1) < 1e-6
    assert payload["surrogate_drop_l"] == 168
    assert payload["digits_lost"] > 15


# --- green -------------------------------------------------------------------------

def test_green_human_output(capsys):
    rc, out, _ = run(["green", "--g", "1", "--k", "0.7",
                      "--p", "2,1.1,0.7", "--p0", "1,2,4"], capsys)
    assert rc == 0
    assert "hostler" in out and "partial_wave" in out
    assert "residual" in out


def test_green_rel_tol_gate(capsys):
    base = ["green", "--g", "1", "--k", "0.7", "--p", "2,1.1,0.7", "--p0", "1,2,4"]
    rc, _, _ = run(base + ["--rel-tol", "1e-7"], capsys)
    assert rc == 0
    rc, _, _ = run(base + ["--rel-tol", "1e-20"], capsys)
    assert rc == 1


def test_green_coincident_points(capsys):
    rc, _, err = run(["green", "--g", "1", "--k", "0.7",
                      "--p", "2,1.1,0.7", "--p0", "2,1.1,0.7"], capsys)
    assert rc == 2 and "error" in err


def test_green_json(capsys):
    rc, out, _ = run(["green", "--g", "1", "--k", "0.7",
                      "--p", "2,1.1,0.7", "--p0", "1,2,4", "--json"], capsys)
    assert rc == 0
    payload = json.loads(out)
    h = float(payload["hostler"]["re"])
    pw = float(payload["partial_wave"]["re"])
    assert rel(h, pw) < 1e-9
    assert payload["rel_residual"] < 1e-9
    assert payload["lmax"] >= 3


# --- golden ------------------------------------------------------------------------

def test_golden_write_reproduces_committed_file(tmp_path, capsys):
    rc, out, _ = run(["golden", "--write", str(tmp_path), "--only",
                      "special_core"], capsys)
    assert rc == 0 and "special_core.json" in out
    got = (tmp_path / "special_core.json").read_text()
    want = (GOLDEN_DIR / "special_core.json").read_text()
    assert got == want


def test_golden_unknown_group(capsys):
    rc, _, err = run(["golden", "--only", "nope"], capsys)
    assert rc == 2 and "error" in err
