import csv
import json
import math

import pytest

from schwarzian_lab import cli, verify


def bisect_oracle(fn, lo, hi, tol=1e-13):
    f_lo = fn(lo)
    assert f_lo * fn(hi) < 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f_lo * fn(mid) <= 0:
            hi = mid
        else:
            lo = mid
            f_lo = fn(lo)
    return 0.5 * (lo + hi)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    lines = [ln for ln in captured.out.splitlines() if ln.strip()]
    return code, [json.loads(ln) for ln in lines], captured.out


# --- serializer ---------------------------------------------------------------

def test_dumps_round_trips_floats():
    for x in (0.1, 1 / 3, 1.358532876462174, 2.5e-17, -1.0, 0.0, 123456789.123456):
        assert float(json.loads(cli.dumps(x))) == x
    assert cli.dumps(True) == "true"
    assert cli.dumps({"a": [1, 2.5]}) == '{"a": [1, 2.5]}'


# --- constants -------------------------------------------------------------------

def test_constants_alpha(capsys):
    code, reports, _ = run_cli(capsys, "constants", "--alpha", "0")
    assert code == 0
    t_star = bisect_oracle(lambda t: math.tan(t) - 2.0 * t, 1.0, 1.5)
    assert abs(reports[-1]["results"]["c_alpha"] - t_star * t_star) < 1e-9


def test_constants_beta_with_eta(capsys):
    code, reports, _ = run_cli(capsys, "constants", "--beta", "1.5", "--eta", "0.1")
    assert code == 0
    res = reports[-1]["results"]
    assert res["phi"] == 0.2 and res["psi"] == 1.8
    assert res["delta_max"] > 0


def test_constants_beta_infinity(capsys):
    code, reports, _ = run_cli(capsys, "constants", "--beta", "inf")
    assert code == 0
    res = reports[-1]["results"]
    assert abs(res["phi"] - 3 / 7) < 1e-12
    assert abs(res["psi"] - 11 / 7) < 1e-12
    assert "delta_max" not in res


@pytest.mark.parametrize("argv", [
    ("constants", "--alpha", "1.5"),
    ("constants", "--alpha", "0.2", "--beta", "2"),
    ("constants", "--alpha", "0.2", "--eta", "0.1"),
    ("constants",),
    ("constants", "--beta", "1.2"),
    ("constants", "--beta", "1.5", "--eta", "0.9"),
])
def test_constants_domain_errors_exit_2(capsys, argv):
    assert cli.main(list(argv)) == 2
    capsys.readouterr()


def test_classify_order_out_of_range_exit_2(capsys):
    code = cli.main(["classify", "--function", "z", "--class", "convex",
                     "--order", "1.5", "--grid", "0.001:0.9:16:64"])
    assert code == 2
    capsys.readouterr()


# --- classify ----------------------------------------------------------------------

def test_classify_boundary_cot_map_holds(capsys):
    code, reports, _ = run_cli(
        capsys, "classify", "--function", "sqrt(c)*cot(sqrt(c)*z)",
        "--param", "c=1.3585", "--class", "merom-convex", "--order", "0",
        "--grid", "0.001:0.99:24:96")
    assert code == 0
    assert reports[-1]["results"]["holds"] is True


def test_classify_mobius_band_membership(capsys):
    code, reports, _ = run_cli(
        capsys, "classify", "--function", "z/(1-c*z)", "--param", "c=0.4",
        "--class", "cbeta", "--beta", "2.5", "--grid", "0.001:0.99:24:96")
    assert code == 0


def test_classify_koebe_starlike_order_half_fails_with_witness(capsys):
    code, reports, _ = run_cli(
        capsys, "classify", "--function", "z/(1-z)^2",
        "--class", "starlike", "--order", "0.5", "--grid", "0.001:0.99:24:96")
    assert code == 1
    res = reports[-1]["results"]
    assert res["holds"] is False
    re_w, im_w = res["witness"]
    assert re_w < -0.9 and abs(im_w) < 1e-9


def test_classify_kaplan(capsys):
    code, reports, _ = run_cli(
        capsys, "classify", "--function", "z/(1-z)^2", "--class", "kaplan",
        "--grid", "0.001:0.95:16:512")
    assert code == 0
    res = reports[-1]["results"]
    assert res["holds"] is True
    assert abs(res["full_turn"] - 2 * math.pi) < 1e-8


def test_classify_parse_error_exit_2(capsys):
    assert cli.main(["classify", "--function", "z/(1 -", "--class", "convex"]) == 2
    err = capsys.readouterr().err
    assert "offset" in err


def test_classify_cbeta_requires_beta(capsys):
    assert cli.main(["classify", "--function", "z", "--class", "cbeta"]) == 2
    capsys.readouterr()


def test_classify_complex_parameter(capsys):
    code, reports, _ = run_cli(
        capsys, "classify", "--function", "z/(1-c*z)", "--param", "c=0.1+0.2i",
        "--class", "convex", "--order", "0", "--grid", "0.001:0.9:16:64")
    assert code == 0
    assert reports[-1]["inputs"]["params"]["c"] == [0.1, 0.2]


def test_classify_deterministic_output(capsys):
    argv = ["classify", "--function", "z/(1-c*z)", "--param", "c=0.3",
            "--class", "starlike", "--order", "0", "--grid", "0.001:0.9:16:64"]
    code1 = cli.main(argv)
    out1 = capsys.readouterr().out
    code2 = cli.main(argv)
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0
    assert out1 == out2  # byte-identical stdout


# --- witness -----------------------------------------------------------------------

def test_witness_above_bound(capsys):
    code, reports, _ = run_cli(capsys, "witness", "--alpha", "0", "--c", "1.5")
    assert code == 0
    res = reports[-1]["results"]
    t_star = bisect_oracle(lambda t: math.tan(t) - 2.0 * t, 1.0, 1.5)
    lo = math.sqrt(t_star * t_star / 1.5)
    assert lo < res["x0"] < 1.0
    assert res["violated_margin"] < 0


def test_witness_below_bound_exit_2(capsys):
    assert cli.main(["witness", "--alpha", "0", "--c", "1.0"]) == 2
    capsys.readouterr()


def test_witness_high_order_small_bound(capsys):
    code, reports, _ = run_cli(capsys, "witness", "--alpha", "0.9", "--c", "1.0")
    assert code == 0
    assert 0 < reports[-1]["results"]["x0"] < 1


# --- ode dump ---------------------------------------------------------------------

def test_ode_csv_dump(tmp_path, capsys):
    out = tmp_path / "ray.csv"
    code, reports, _ = run_cli(
        capsys, "ode", "--p-const", "0.8", "--theta", "0.5",
        "--rmax", "0.9", "--steps", "128", "--out", str(out))
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["rho", "w1_re", "w1_im", "w1p_re", "w1p_im",
                       "w2_re", "w2_im", "w2p_re", "w2p_im"]
    assert len(rows) == 130  # header + 129 nodes
    first = [float(v) for v in rows[1]]
    assert first == [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]
    assert reports[-1]["results"]["wronskian_drift"] < 1e-9


def test_ode_expression_potential(tmp_path, capsys):
    out = tmp_path / "ray.csv"
    code, reports, _ = run_cli(
        capsys, "ode", "--p-expr", "a*z^2", "--param", "a=0.5",
        "--rmax", "0.9", "--steps", "128", "--out", str(out))
    assert code == 0


def test_ode_io_error_exit_3(capsys):
    code = cli.main(["ode", "--p-const", "1.0", "--out", "/nonexistent/dir/x.csv",
                     "--steps", "64", "--rmax", "0.5"])
    assert code == 3
    capsys.readouterr()


# --- region sweep ---------------------------------------------------------------------

def test_region_sweep_three_halves(tmp_path, capsys):
    out = tmp_path / "region.csv"
    code, reports, _ = run_cli(capsys, "region", "--beta", "1.5",
                               "--eta-steps", "3", "--out", str(out))
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["eta", "delta_max"]
    assert len(rows) == 4
    # first row: eta = 0, delta solving 9 d e^(d/2) = 2 (equality in the
    # admissibility relation scaled by 5)
    d_star = bisect_oracle(lambda d: 9.0 * d * math.exp(d / 2.0) - 2.0, 0.0, 1.0)
    assert float(rows[1][0]) == 0.0
    assert abs(float(rows[1][1]) - d_star) < 1e-9
    # last row: eta -> phi forces delta_max -> 0
    assert float(rows[-1][1]) < 1e-6


def test_region_sweep_infinity(tmp_path, capsys):
    out = tmp_path / "region_inf.csv"
    code, reports, _ = run_cli(capsys, "region", "--beta", "inf",
                               "--eta-steps", "3", "--out", str(out))
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    d_star = bisect_oracle(lambda d: 11.0 * d * math.exp(d / 2.0) - 6.0, 0.0, 1.0)
    assert abs(float(rows[1][1]) - d_star) < 1e-9


def test_region_io_error_exit_3(capsys):
    assert cli.main(["region", "--beta", "1.5", "--out", "/nonexistent/dir/r.csv"]) == 3
    capsys.readouterr()


# --- verify suite ----------------------------------------------------------------------

def test_verify_suite_fast_all_pass(capsys):
    code, reports, _ = run_cli(capsys, "verify-suite", "--fast")
    assert code == 0
    checks = [r for r in reports if "check" in r]
    assert len(checks) == len(verify.CHECKS)
    assert all(c["passed"] for c in checks)
    summary = reports[-1]
    assert summary["results"]["failed"] == []


def test_tampered_bound_breaks_sign_pattern():
    # negative control: shifting the computed bound by 1e-3 must flip the
    # sign pattern around the root
    result = verify.check_monotonic_sign_pattern(c_shift=1e-3)
    assert not result.passed


# --- report ------------------------------------------------------------------------------

def test_report_writes_figures_and_tables(tmp_path, capsys):
    out_dir = tmp_path / "rep"
    code, reports, _ = run_cli(capsys, "report", "--out-dir", str(out_dir), "--dpi", "60")
    assert code == 0
    files = reports[-1]["results"]["files"]
    assert len(files) == 8
    suffixes = {f.rsplit(".", 1)[-1] for f in files}
    assert suffixes == {"csv", "png"}
    for f in files:
        assert (tmp_path / "rep").joinpath(f.rsplit("/", 1)[-1]).exists()
    # the delimited outputs parse as CSV with headers
    with open(out_dir / "critical_bound.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["alpha", "c_alpha"]
    assert len(rows) == 51
