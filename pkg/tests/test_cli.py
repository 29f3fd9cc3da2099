import csv
import json
import time

import numpy as np
import pytest

from spdc_hom import cli


def _read_csv(path):
    lines = path.read_text().splitlines()
    body = lines[1:] if lines[0].startswith("#") else lines
    return list(csv.DictReader(body))


def test_figure_writes_csv_svg_and_manifest(tmp_path, capsys):
    assert cli.main(["figure", "fig10", "--panel", "c", "--out", str(tmp_path)]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["fig10c.csv", "fig10c.manifest.json", "fig10c.svg"]
    rows = _read_csv(tmp_path / "fig10c.csv")
    assert list(rows[0]) == ["omega0_dt", "w_split"]
    assert "xi=0.6" in (tmp_path / "fig10c.csv").read_text().splitlines()[0]
    manifest = json.loads((tmp_path / "fig10c.manifest.json").read_text())
    assert manifest["command"] == "figure" and manifest["options"]["panel"] == "c"


def test_figure_output_is_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert cli.main(["figure", "fig13", "--panel", "a", "--format", "csv", "--out", str(d)]) == 0
    assert (a / "fig13a.csv").read_bytes() == (b / "fig13a.csv").read_bytes()
    assert (a / "fig13a.manifest.json").read_bytes() == (b / "fig13a.manifest.json").read_bytes()


def test_figure_json_format(tmp_path):
    assert cli.main(["figure", "fig1", "--format", "json", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "fig1.json").read_text())
    assert set(data["columns"]) == {"xi", "n_eff"}


def test_unknown_figure_is_a_validation_error(tmp_path, capsys):
    assert cli.main(["figure", "fig99", "--out", str(tmp_path)]) == 1
    assert "fig99" in capsys.readouterr().err


def test_bad_arguments_exit_one():
    assert cli.main(["sweep", "not_a_quantity"]) == 1


def test_invalid_config_field(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"L_cm": -2}')
    assert cli.main(["coeffs", "--config", str(cfg)]) == 1
    assert "L_cm" in capsys.readouterr().err


def test_missing_config_is_io_error(tmp_path):
    assert cli.main(["coeffs", "--config", str(tmp_path / "missing.json")]) == 3


def test_sweep_a_minus_sign_change(tmp_path):
    args = ["sweep", "A_minus", "--start", "0", "--stop", "0.93", "--points", "500", "--out", str(tmp_path)]
    assert cli.main(args) == 0
    rows = _read_csv(tmp_path / "sweep_A_minus_xi.csv")
    xi = np.array([float(r["xi"]) for r in rows])
    a = np.array([float(r["A_minus"]) for r in rows])
    flips = np.flatnonzero(np.sign(a[1:-1]) != np.sign(a[2:])) + 1
    assert flips.size == 1
    assert xi[flips[0]] <= 0.8142 + 0.005 and xi[flips[0] + 1] >= 0.8142 - 0.005
    assert (tmp_path / "sweep_A_minus_xi.manifest.json").exists()


def test_sweep_flags_forbidden_points(tmp_path):
    args = ["sweep", "theta_pm", "--phi0", "0.45", "--start", "0", "--stop", "0.9", "--points", "19",
            "--out", str(tmp_path)]
    assert cli.main(args) == 0
    rows = _read_csv(tmp_path / "sweep_theta_pm_xi.csv")
    forbidden = [r for r in rows if r["flag"] == "forbidden"]
    assert forbidden and all(r["theta_plus"] == "" for r in forbidden)


def test_sweep_matches_figure_family(tmp_path):
    args = ["sweep", "theta_pm", "--phi0", "0.7", "--start", "0", "--stop", "0.9", "--points", "451",
            "--out", str(tmp_path)]
    assert cli.main(args) == 0
    rows = _read_csv(tmp_path / "sweep_theta_pm_xi.csv")
    from spdc_hom import SetupConfig, figures

    fig = figures.build("fig4", SetupConfig())[""].columns
    theta = np.array([float(r["theta_minus"]) for r in rows[:400]])
    assert np.allclose(theta, fig["theta_minus_phi0.7"][:400], rtol=1e-9)


def test_sweep_split_probability_over_delay(tmp_path):
    args = ["sweep", "w_split_4", "--axis", "dt", "--xi", "0.04", "--start", "-600", "--stop", "600",
            "--points", "241", "--out", str(tmp_path)]
    assert cli.main(args) == 0
    w = np.array([float(r["w_split_4"]) for r in _read_csv(tmp_path / "sweep_w_split_4_dt.csv")])
    assert w[120] == pytest.approx(0.0, abs=1e-12)
    assert np.all((w >= 0) & (w <= 1))


def test_coeffs_prints_json(tmp_path, capsys):
    assert cli.main(["coeffs", "--xi", "0.2", "--out", str(tmp_path)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["xi"] == 0.2 and data["units"]["times"] == "1/omega0"
    assert (tmp_path / "coeffs.json").exists()


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"phi0_rad": 0.6, "scheme": "four_slit"}')
    args = cli.build_parser().parse_args(["coeffs", "--config", str(cfg), "--phi0", "0.7"])
    setup = cli.resolve_setup(args)
    assert setup.phi0_rad == 0.7 and setup.scheme == "four_slit"


def test_verify_quick_passes(tmp_path, capsys):
    start = time.perf_counter()
    assert cli.main(["verify", "--quick", "--out", str(tmp_path)]) == 0
    assert time.perf_counter() - start < 10.0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["passed"] and report["n_checks"] > 50


def test_verify_reports_corrupted_crystal(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"crystal": {"name": "bad", "sellmeier_o": [0.5, 0.0184, 0.0179, 0.0155],
                                           "sellmeier_e": [2.3730, 0.0128, 0.0156, 0.0044],
                                           "window_um": [0.19, 13.29]}}))
    assert cli.main(["verify", "--quick", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    report = json.loads((tmp_path / "verify.json").read_text())
    assert not report["passed"] and report["failed"]
    assert "FAIL" in capsys.readouterr().out
