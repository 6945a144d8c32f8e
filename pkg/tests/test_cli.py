import json
import subprocess
import sys

import pytest

from nucorr.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_point_preset_r0(capsys):
    code, out, _ = run(capsys, "point", "--preset", "minos", "--L", "735", "--E", "3", "--r", "0", "--json")
    assert code == 0
    rec = json.loads(out)
    assert rec["gamma"] == 0.0
    assert rec["lqu"] == pytest.approx(rec["concurrence"] ** 2, abs=1e-12)


def test_point_no_mixing(capsys):
    code, out, _ = run(capsys, "point", "--theta", "0", "--dm2", "1e-3", "--L", "100", "--E", "1", "--json")
    rec = json.loads(out)
    assert code == 0
    assert rec["concurrence"] == rec["eof"] == rec["discord"] == rec["lqu"] == 0.0


def test_point_dayabay_bound(capsys):
    code, out, _ = run(capsys, "point", "--preset", "dayabay", "--L", "1.912", "--E", "0.004", "--r", "1", "--json")
    assert code == 0
    assert abs(json.loads(out)["gamma"] - 4.9e-5) / 4.9e-5 < 0.02


def test_point_mev_flag(capsys):
    _, a, _ = run(capsys, "point", "--preset", "kamland", "--L", "180", "--E", "4", "--mev", "--json")
    _, b, _ = run(capsys, "point", "--preset", "kamland", "--L", "180", "--E", "0.004", "--json")
    assert json.loads(a) == json.loads(b)


def test_point_table_output(capsys):
    code, out, _ = run(capsys, "point", "--preset", "kamland")
    assert code == 0
    for key in ("p_transition", "concurrence", "eof", "discord", "lqu", "branch_taken", "dp_dtheta"):
        assert key in out


def test_point_json_round_trip(capsys):
    _, out, _ = run(capsys, "point", "--preset", "minos", "--L", "500", "--E", "2.5", "--r", "0.5", "--json")
    rec = json.loads(out)
    _, again, _ = run(
        capsys, "point", "--theta", repr(rec["theta"]), "--dm2", repr(rec["dm2"]), "--L", repr(rec["L_km"]),
        "--E", repr(rec["E_gev"]), "--gamma", repr(rec["gamma"]), "--json",
    )
    assert json.loads(again) == rec


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "point", "--theta", "2.0", "--dm2", "1e-3", "--L", "1", "--E", "1")
    assert code == 1
    assert "theta" in err
    code, _, err = run(capsys, "point", "--preset", "minos", "--gamma", "1.5")
    assert code == 1 and "gamma" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["point", "--L", "abc"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["point", "--L", "1", "--E", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_gamma_table_cli(capsys):
    code, out, _ = run(capsys, "gamma-table", "--json")
    rows = json.loads(out)
    assert code == 0 and [r["experiment"] for r in rows] == ["kamland", "minos", "dayabay"]
    for row, expected in zip(rows, (4.6e-3, 1.9e-2, 4.9e-5)):
        assert abs(row["gamma"] - expected) / expected < 0.02
    code, out, _ = run(capsys, "gamma-table")
    assert "4.643e-03" in out


def test_sweep_cli(tmp_path, capsys):
    out = tmp_path / "k.csv"
    code, _, _ = run(capsys, "sweep", "--preset", "kamland", "--r", "0,0.25,0.5,1", "--grid", "500", "--out", str(out))
    assert code == 0
    assert len(out.read_text().splitlines()) == 2001


def test_sweep_cli_config(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    dest = tmp_path / "d.jsonl"
    cfg.write_text(f"[sweep]\npreset = dayabay\ngrid = 20\nr = 0\nformat = jsonl\nout = {dest}\n")
    code, _, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0
    assert len(dest.read_text().splitlines()) == 20
    # command-line flags override the file
    code, _, _ = run(capsys, "sweep", "--config", str(cfg), "--grid", "5")
    assert len(dest.read_text().splitlines()) == 5


def test_sweep_cli_needs_out(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--preset", "minos"])
    assert exc.value.code == 2


def test_sensitivity_cli(capsys):
    code, out, _ = run(capsys, "sensitivity", "--preset", "minos", "--L", "735", "--E", "3", "--json")
    assert code == 0
    data = json.loads(out)
    for key, fd in data["finite_difference"].items():
        exact = data["analytic"][key]
        assert abs(exact - fd) <= 1e-6 * abs(exact)


def test_validate_forced_theta_zero(tmp_path, capsys):
    report = tmp_path / "r.jsonl"
    code, _, _ = run(capsys, "validate", "--samples", "1", "--theta", "0", "--report", str(report))
    assert code == 0
    assert report.read_text() == ""


def test_validate_corrupted_tolerance(tmp_path, capsys):
    report = tmp_path / "r.jsonl"
    code, _, _ = run(capsys, "validate", "--samples", "1", "--theta", "0", "--tol-scale", "-1", "--report", str(report))
    assert code == 3
    assert len(report.read_text().splitlines()) == 3


def test_validate_exact_measures(tmp_path, capsys):
    report = tmp_path / "r.jsonl"
    code, out, _ = run(
        capsys, "validate", "--samples", "100", "--measures", "concurrence,lqu", "--report", str(report), "--json"
    )
    assert code == 0
    assert json.loads(out)["violations"] == 0


def test_validate_reports_discord_mismatches(tmp_path, capsys):
    # the closed-form discord disagrees with the measurement oracle; violations are persisted
    report = tmp_path / "r.jsonl"
    code, _, _ = run(capsys, "validate", "--samples", "10", "--report", str(report))
    lines = report.read_text().splitlines()
    assert code == 3
    assert lines and all(json.loads(line)["measure"] == "discord" for line in lines)


def test_validate_seeded_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    _, out_a, _ = run(capsys, "validate", "--samples", "20", "--seed", "7", "--report", str(a), "--json")
    _, out_b, _ = run(capsys, "validate", "--samples", "20", "--seed", "7", "--report", str(b), "--json")
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(out_a)["max_error"] == json.loads(out_b)["max_error"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nucorr", "gamma-table"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "minos" in proc.stdout
