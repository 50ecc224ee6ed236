import csv
import json
import math

import pytest

from drivenspin import __version__
from drivenspin.cli import RunConfig, main, run_verify
from drivenspin.dynamics import amplitude_arrays
from drivenspin.presets import FIGURES, PRESETS, resolve


def _rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_evolve_single_point(tmp_path):
    out = tmp_path / "run"
    assert main(["evolve", "--omega-factor", "2", "--points", "1", "--out", str(out)]) == 0
    rows = _rows(out / "series.csv")
    assert list(rows[0]) == ["gt", "sz", "rho11", "rho22", "re_rho12", "im_rho12", "entropy"]
    assert len(rows) == 1
    assert float(rows[0]["sz"]) == pytest.approx(0.5, abs=1e-14)
    assert float(rows[0]["rho11"]) == pytest.approx(1.0, abs=1e-14)
    assert float(rows[0]["entropy"]) == pytest.approx(0.0, abs=1e-14)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["version"] == __version__
    assert manifest["lambda_table"]["cache"] == "disabled"
    assert manifest["config"]["omega"] == 2.0
    assert manifest["wall_time_s"] >= 0


def test_identical_config_gives_identical_bytes(tmp_path):
    args = ["evolve", "--omega-factor", "3", "--epsilon", "0.4", "--state", "phi-super", "--points", "50"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b"), "--threads", "3"]) == 0
    assert (tmp_path / "a" / "series.csv").read_bytes() == (tmp_path / "b" / "series.csv").read_bytes()


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"epsilon": 0.5, "j0": 0.05, "omega": 1.0, "delta": [0.6, 0.0], "gamma": [0.0, 0.8], "points": 1}))
    assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path / "a")]) == 0
    row = _rows(tmp_path / "a" / "series.csv")[0]
    assert float(row["rho11"]) == pytest.approx(0.36)
    assert float(row["im_rho12"]) == pytest.approx(-0.48)
    assert main(["evolve", "--config", str(cfg), "--state", "down", "--out", str(tmp_path / "b")]) == 0
    assert float(_rows(tmp_path / "b" / "series.csv")[0]["sz"]) == -0.5


def test_microscopic_bath(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_atoms": 1e5, "temperature": 0.2, "coordination": 6, "exchange": 1.0, "points": 2}))
    assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path / "m")]) == 0
    manifest = json.loads((tmp_path / "m" / "manifest.json").read_text())
    assert manifest["lambda_table"]["omega"] == pytest.approx(0.97496354417525365, rel=1e-13)


@pytest.mark.parametrize(
    "argv,field",
    [
        (["evolve", "--omega-factor", "1", "--points", "0"], "points"),
        (["evolve", "--omega-factor", "1", "--t-end", "-1"], "t_end"),
        (["evolve", "--omega-factor", "1", "--tol", "2"], "tol"),
        (["evolve", "--omega-factor", "-1"], "omega"),
        (["evolve"], "omega"),
        (["evolve", "--omega-factor", "1", "--state", "sideways"], "state"),
        (["figure", "fig9"], "figure"),
    ],
)
def test_usage_errors(tmp_path, capsys, argv, field):
    assert main(argv + ["--out", str(tmp_path / "x")]) == 1
    assert field in capsys.readouterr().err


def test_unknown_config_field(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"omega": 1, "colour": "red"}')
    assert main(["evolve", "--config", str(cfg)]) == 1
    assert "colour" in capsys.readouterr().err


def test_argparse_errors_exit_with_usage_code():
    with pytest.raises(SystemExit) as exc:
        main(["transmogrify"])
    assert exc.value.code == 1


def test_io_error(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["evolve", "--omega-factor", "1", "--points", "2", "--out", str(blocker / "sub")]) == 3
    assert main(["evolve", "--config", str(tmp_path / "missing.json")]) == 3


def test_spectrum_command(tmp_path):
    assert main(["spectrum", "--omega-factor", "1", "--epsilon", "0.5", "--j0", "0.05", "--out", str(tmp_path / "s")]) == 0
    rows = _rows(tmp_path / "s" / "spectrum.csv")
    assert any(r["contributors"] == "3;17" for r in rows)
    manifest = json.loads((tmp_path / "s" / "manifest.json").read_text())
    assert manifest["summary"]["kappa_min"] >= 1.0


def test_uncoupled_spectrum_file(tmp_path):
    assert main(["spectrum", "--omega-factor", "1", "--j0", "0", "--out", str(tmp_path / "s")]) == 0
    rows = _rows(tmp_path / "s" / "spectrum.csv")
    assert len(rows) == 1 and float(rows[0]["weight"]) == pytest.approx(1.0)


def test_entropy_scan_command(tmp_path):
    out = tmp_path / "e"
    argv = ["entropy-scan", "--omega-factor", "20", "--epsilon", "1", "--j0", "0.01", "--t-end", "100", "--points", "101"]
    assert main(argv + ["--grid", "9", "--out", str(out)]) == 0
    assert len(_rows(out / "landscape.csv")) == 81
    assert len(_rows(out / "entropy.csv")) == 101
    best = json.loads((out / "manifest.json").read_text())["pointer_state"]
    assert 0 <= best["theta"] <= math.pi


def test_cache_command(tmp_path, capsys):
    argv = ["cache", "--omega-factor", "2", "--cache-dir", str(tmp_path / "c")]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first.startswith("miss") and second.startswith("hit")
    assert first.split("sha256=")[1] == second.split("sha256=")[1]
    assert main(["cache", "--omega-factor", "2"]) == 1


def test_evolve_with_cache_records_hit(tmp_path):
    argv = ["evolve", "--omega-factor", "2", "--points", "5", "--cache-dir", str(tmp_path / "c")]
    main(argv + ["--out", str(tmp_path / "a")])
    main(argv + ["--out", str(tmp_path / "b")])
    first = json.loads((tmp_path / "a" / "manifest.json").read_text())["lambda_table"]
    second = json.loads((tmp_path / "b" / "manifest.json").read_text())["lambda_table"]
    assert (first["cache"], second["cache"]) == ("miss", "hit")
    assert first["sha256"] == second["sha256"]
    assert (tmp_path / "a" / "series.csv").read_bytes() == (tmp_path / "b" / "series.csv").read_bytes()


def test_preset_parameters():
    fig1a = PRESETS["fig1a"]
    assert (fig1a["epsilon"], fig1a["j0"], fig1a["omega"], fig1a["state"]) == (0.0, 0.05, 2.0, "up")
    assert (fig1a["t_start"], fig1a["t_end"], fig1a["points"]) == (0.0, 50.0, 2000)
    assert PRESETS["fig1b"]["omega"] == 30.0
    sup = PRESETS["fig5a-super"]
    assert (sup["epsilon"], sup["j0"], sup["omega"], sup["state"]) == (1.0, 0.01, 20.0, "phi-super")
    f3a = PRESETS["fig3a"]
    assert (f3a["epsilon"], f3a["j0"], f3a["omega"], f3a["kind"]) == (0.0, 0.05, 5.0, "spectrum")
    f3b = PRESETS["fig3b"]
    f2b = PRESETS["fig2b-1"]
    assert (f3b["epsilon"], f3b["j0"], f3b["omega"]) == (f2b["epsilon"], f2b["j0"], f2b["omega"]) == (0.5, 0.05, 1.0)
    assert PRESETS["fig2b-inset"]["t_end"] == 400.0
    # thermodynamic-limit series: J0 sqrt(Omega) fixed
    for group in ("fig2a", "fig2b", "fig3a", "fig3b"):
        scales = {round(PRESETS[m]["j0"] * math.sqrt(PRESETS[m]["omega"]), 12) for m in FIGURES[group]}
        assert len(scales) == 1
    assert [PRESETS[m]["omega"] for m in FIGURES["fig2a"]] == [2.0, 20.0, 200.0]
    assert [(PRESETS[m]["j0"], PRESETS[m]["epsilon"]) for m in FIGURES["fig5b"]] == [(0.03, 0.0), (0.01, 0.0), (0.01, 1.0), (0.01, 3.0)]
    assert len(FIGURES["fig2b"]) == 4 and len(FIGURES["fig5a"]) == 3
    assert resolve("fig1a") == ["fig1a"]
    for cfg in PRESETS.values():
        fields = {k: v for k, v in cfg.items() if k != "kind"}
        RunConfig(**fields).validate()


def test_figure_command(tmp_path, capsys):
    assert main(["figure", "fig3b", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "fig3b" / "spectrum.csv").exists()
    assert (tmp_path / "fig3b-x10" / "spectrum.csv").exists()
    assert main(["figure", "fig1a", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "fig1a" / "series.csv")
    assert len(rows) == 2000 and float(rows[-1]["gt"]) == 50.0


def test_verify_command(capsys):
    assert main(["verify", "quick"]) == 0
    assert "all checks passed" in capsys.readouterr().out


def test_verify_reports_injected_fault(capsys):
    def broken(params, d, t):
        chi, kappa, a, b = amplitude_arrays(params, d, t)
        return chi, kappa, a, 1j * b

    assert run_verify("quick", amplitudes=broken) == 2
    out = capsys.readouterr().out
    assert "FAIL trace preservation per sector" in out
    assert "max deviation" in out
