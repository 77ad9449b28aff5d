"""Command-line interface: output formats, figures, exit codes."""

import csv
import json
import re

import pytest

from ellharm.cli import main
from ellharm.verify import SUITE_ORDER, CheckResult, VerificationBundle, VerificationReport

KAPPA_HALF = 1.1547005383792515


def test_eval_prints_field_and_derivatives(capsys):
    rc = main(["eval", "--eps", "0.5", "--point", "0.2,0.1,0.4", "--derivs"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "region = OffPlane" in out
    values = {}
    for key, val in re.findall(r"(\w+) = ([-+0-9.eE]+)(?:\s|$)", out):
        values[key] = float(val)
    assert values["kappa"] == pytest.approx(KAPPA_HALF, abs=1e-10)
    assert values["phi"] == pytest.approx(0.9673558559406291, abs=1e-10)
    assert values["phi_tilde"] == values["phi"]
    assert values["phi_ZZZ"] == pytest.approx(4.030344296415434, abs=1e-8)


def test_eval_wall_point_exits_3(capsys):
    rc = main(["eval", "--eps", "0.5", "--point", "2,0,0"])
    assert rc == 3
    err = capsys.readouterr().err
    assert "wall" in err


def test_eval_malformed_point_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--eps", "0.5", "--point", "1,2"])
    assert exc.value.code == 2


def test_eval_eps_out_of_range_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--eps", "1.0", "--point", "0,0,1"])
    assert exc.value.code == 2


def test_grid_csv_with_wall_rows_and_figure(tmp_path, capsys):
    out = tmp_path / "slice.csv"
    rc = main(["grid", "--eps", "0.5", "--xmin", "-2", "--xmax", "2",
               "--nx", "5", "--ymin", "0", "--ymax", "0", "--ny", "1",
               "--zmin", "0", "--zmax", "0", "--nz", "1",
               "--out", str(out)])
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 5
    flags = {r["x"]: r["flag"] for r in rows}
    assert flags["-2.0"] == "wall" and flags["2.0"] == "wall"
    assert flags["0.0"] == "ok"
    wall_row = next(r for r in rows if r["flag"] == "wall")
    assert wall_row["phi"] == ""  # wall rows carry no field value
    ok_row = next(r for r in rows if r["flag"] == "ok")
    assert float(ok_row["phi"]) == 0.0  # plane points inside the curve
    assert (tmp_path / "slice.png").exists()


def test_grid_json_format_and_no_figures(tmp_path):
    out = tmp_path / "slice.json"
    rc = main(["grid", "--eps", "0.5", "--xmin", "0", "--xmax", "1",
               "--nx", "2", "--ymin", "0", "--ymax", "0", "--ny", "1",
               "--zmin", "0.3", "--zmax", "0.3", "--nz", "1",
               "--format", "json", "--no-figures", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["eps"] == 0.5
    assert doc["kappa"] == pytest.approx(KAPPA_HALF, abs=1e-10)
    assert [p["flag"] for p in doc["points"]] == ["ok", "ok"]
    assert doc["points"][0]["phi"] == pytest.approx(0.7198282490335366,
                                                    abs=1e-10)
    assert not (tmp_path / "slice.png").exists()


def test_coeffs_table(tmp_path):
    out = tmp_path / "coeffs.csv"
    rc = main(["coeffs", "--eps-list", "0,0.5", "--out", str(out),
               "--no-figures"])
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["eps"] for r in rows] == ["0.0", "0.5"]
    assert float(rows[0]["varpi"]) == pytest.approx(0.5, abs=1e-12)
    assert float(rows[1]["kappa"]) == pytest.approx(KAPPA_HALF, abs=1e-10)
    lam, mu, nu = (float(rows[1][k]) for k in ("lambda", "mu", "nu"))
    assert lam + mu == pytest.approx(nu, abs=1e-12)


def test_coeffs_rejects_bad_list():
    with pytest.raises(SystemExit) as exc:
        main(["coeffs", "--eps-list", "0,abc"])
    assert exc.value.code == 2


def test_verify_subset_writes_report_and_figure(tmp_path, capsys):
    out = tmp_path / "report.json"
    rc = main(["verify", "--eps", "0.5", "--suite", "geometry,coeffs",
               "--out", str(out)])
    assert rc == 0
    stdout = capsys.readouterr().out
    assert "suite geometry: PASS" in stdout
    assert "overall: PASS" in stdout
    doc = json.loads(out.read_text())
    assert doc["eps"] == 0.5
    assert doc["passed"] is True
    assert [r["suite"] for r in doc["suites"]] == ["geometry", "coeffs"]
    assert (tmp_path / "report.png").exists()


def test_verify_reports_are_byte_identical(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for path in (a, b):
        rc = main(["verify", "--eps", "0.5", "--suite", "geometry,coeffs",
                   "--out", str(path), "--no-figures"])
        assert rc == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_unknown_suite_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "geometry,bogus"])
    assert exc.value.code == 2


def test_verify_failing_bundle_exits_1(monkeypatch, capsys):
    def fake_run(eps, names, seed, quad, allow_extreme):
        rep = VerificationReport(
            suite="geometry", eps=eps, seed=seed,
            checks=(CheckResult("synthetic", 1.0, 0.5, False, ""),))
        return VerificationBundle(eps=eps, seed=seed, kappa=None,
                                  reports=(rep,))

    monkeypatch.setattr("ellharm.cli.run_suites",
                        lambda *a, **kw: fake_run(*a, **kw))
    rc = main(["verify", "--suite", "geometry"])
    assert rc == 1
    assert "overall: FAIL" in capsys.readouterr().out


def test_geometry_subcommand_reports_tangency(capsys):
    rc = main(["geometry", "--eps", "0.5", "--theta", "0.7"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "orientation +1" in out and "orientation -1" in out
    assert "tangent distance P" in out
    # both oriented tangents and the duality identity appear
    assert out.count("|Q + u^2|") == 2


def test_quad_flags_reach_the_evaluator(capsys):
    rc = main(["eval", "--point", "0,0,1", "--quad-initial-nodes", "32",
               "--quad-rel-tol", "1e-10"])
    assert rc == 0
    assert "phi =" in capsys.readouterr().out


def test_quad_flag_validation():
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--point", "0,0,1", "--quad-initial-nodes", "0"])
    assert exc.value.code == 2


def test_suite_order_is_stable_for_cli_help():
    # the verify help text enumerates suites; keep the registry shape
    assert SUITE_ORDER == ("geometry", "coeffs", "harmonic", "matching",
                           "gradient", "residue", "asymptotic")
