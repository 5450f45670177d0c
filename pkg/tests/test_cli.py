"""Command-line interface: presets, config files, CSV schema, exit codes."""

import json
from pathlib import Path

import numpy as np
import pytest

from frab_noma import cli

HEADER = "tx_dbm,rho_linear,series,mean,ci95_half,provenance,n_trials"


def run_cli(*argv):
    return cli.main(list(argv))


def read_csv(path):
    lines = Path(path).read_text().splitlines()
    assert lines[0] == HEADER
    rows = [l.split(",") for l in lines[1:]]
    return rows


# --- presets ----------------------------------------------------------------

def test_fig1_presets_encode_figure_parameters():
    for name, model in (("fig1-rayleigh", "rayleigh"), ("fig1-mmwave", "mmwave")):
        cfg = cli.preset_config(name)
        assert (cfg.m_antennas, cfg.s1_size, cfg.s2_size, cfg.nq) == (30, 3, 300, 2)
        assert (cfg.r1, cfg.ry, cfg.pathloss_exp) == (40.0, 40.0, 3.0)
        assert (cfg.rate_s1, cfg.rate_s2) == (1.0, 1.5)
        assert (cfg.a0sq, cfg.a1sq) == (0.75, 0.25)
        assert cfg.model == model
        assert cfg.noise_dbm == -30.0
        cfg.validate()


def test_fig2_preset_encodes_figure_parameters():
    cfg = cli.preset_config("fig2")
    assert (cfg.m_antennas, cfg.s1_size, cfg.s2_size, cfg.nq) == (4, 1, 4, 2)
    assert cfg.ry == cfg.r1 / 2.0
    assert (cfg.rate_s1, cfg.rate_s2) == (1.0, 1.0)
    assert cfg.include_analytical and cfg.include_perfect
    cfg8 = cli.preset_config("fig2", m_antennas=8)
    assert (cfg8.m_antennas, cfg8.s2_size) == (8, 8)
    cfg8.validate()


def test_parse_tx_spec():
    assert cli.parse_tx_spec("0:40:5") == tuple(float(x) for x in range(0, 41, 5))
    assert len(cli.parse_tx_spec("0:40:5")) == 9
    assert cli.parse_tx_spec("1,2.5,7") == (1.0, 2.5, 7.0)
    with pytest.raises(Exception):
        cli.parse_tx_spec("10:0:5")


# --- run --------------------------------------------------------------------

def test_run_writes_csv_and_sidecar(tmp_path):
    out = tmp_path / "out"
    code = run_cli("run", "--preset", "fig2", "--trials", "500", "--seed", "7",
                   "--tx-dbm", "20:30:5", "-o", str(out))
    assert code == 0
    rows = read_csv(out / "fig2.csv")
    series = {r[2] for r in rows}
    assert series == {"outage_s1", "outage_s2", "noma_sum_rate", "oma_sum_rate",
                      "outage_s1_perfect", "outage_s1_analytical",
                      "outage_s2_analytical"}
    assert len(rows) == 7 * 3
    for r in rows:
        assert r[5] in ("simulated", "analytical")
        float(r[0]); float(r[1]); float(r[3]); float(r[4]); int(r[6])
    sidecar = json.loads((out / "fig2.json").read_text())
    assert sidecar["config"]["num_trials"] == 500
    assert sidecar["config"]["seed"] == 7
    assert sidecar["config_sha256"]
    assert "duration_s" in sidecar and "git_describe" in sidecar


def test_rerun_is_byte_identical(tmp_path):
    args = ("run", "--preset", "fig2", "--trials", "400", "--seed", "3",
            "--tx-dbm", "20:30:10")
    run_cli(*args, "-o", str(tmp_path / "a"))
    run_cli(*args, "-o", str(tmp_path / "b"))
    run_cli(*args, "-o", str(tmp_path / "c"), "--workers", "4")
    a = (tmp_path / "a" / "fig2.csv").read_bytes()
    assert a == (tmp_path / "b" / "fig2.csv").read_bytes()
    assert a == (tmp_path / "c" / "fig2.csv").read_bytes()


def test_run_sweep_row_count(tmp_path):
    code = run_cli("run", "--preset", "fig1-rayleigh", "--trials", "50",
                   "--tx-dbm", "0:40:5", "-o", str(tmp_path))
    assert code == 0
    rows = read_csv(tmp_path / "fig1-rayleigh.csv")
    # 4 simulated series x 9 sweep points
    assert len(rows) == 36


# --- validate ---------------------------------------------------------------

def test_validate_preset_ok(capsys):
    assert run_cli("validate", "--preset", "fig1-rayleigh") == 0
    out = capsys.readouterr().out
    assert "m_antennas = 30" in out
    assert "s2_size = 300" in out


def test_validate_power_ordering_violation(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(_config_text(a0sq=0.4, a1sq=0.6))
    assert run_cli("validate", "--config", str(cfg)) == 3
    assert "ordering" in capsys.readouterr().err


def test_validate_infeasible_split_warns_but_passes(tmp_path, capsys):
    cfg = tmp_path / "infeasible.cfg"
    # eps0 = 3 with a0sq = 0.75, a1sq = 0.25 -> denominator 0
    cfg.write_text(_config_text(rate_s1=2.0))
    assert run_cli("validate", "--config", str(cfg)) == 0
    assert "analytical outage" in capsys.readouterr().err


# --- config files -----------------------------------------------------------

def _config_text(**over):
    base = dict(
        m_antennas=4, nq=2, s1_size=1, s2_size=4, r1=40.0, ry=20.0,
        pathloss_exp=3.0, model="rayleigh", a0sq=0.75, a1sq=0.25,
        rate_s1=1.0, rate_s2=1.0, tx_dbm="10:30:10", noise_dbm=-30.0,
        num_trials=200, seed=5,
    )
    base.update(over)
    lines = ["# test scenario"]
    lines += [f"{k} = {v}" for k, v in base.items()]
    return "\n".join(lines) + "\n"


def test_config_file_roundtrip(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text(_config_text())
    cfg = cli.load_config_file(path)
    assert cfg.m_antennas == 4
    assert cfg.tx_dbm == (10.0, 20.0, 30.0)
    assert cfg.seed == 5
    code = run_cli("run", "--config", str(path), "-o", str(tmp_path / "out"))
    assert code == 0
    assert (tmp_path / "out" / "scenario.csv").exists()


def test_config_file_unknown_key(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text(_config_text() + "bandwidth = 20\n")
    assert run_cli("validate", "--config", str(path)) == 3
    assert "unknown key" in capsys.readouterr().err


def test_config_file_missing(tmp_path, capsys):
    assert run_cli("run", "--config", str(tmp_path / "nope.cfg")) == 2
    assert "i/o error" in capsys.readouterr().err


def test_cli_flags_override_config(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text(_config_text())
    out = tmp_path / "o"
    run_cli("run", "--config", str(path), "--seed", "99", "--trials", "100",
            "-o", str(out))
    sidecar = json.loads((out / "scenario.json").read_text())
    assert sidecar["config"]["seed"] == 99
    assert sidecar["config"]["num_trials"] == 100


# --- analysis ---------------------------------------------------------------

def test_analysis_emits_curves_and_slopes(tmp_path, capsys):
    code = run_cli("analysis", "--M", "3", "--s2-size", "3", "--tx-dbm", "10:50:5",
                   "--slope", "-o", str(tmp_path))
    assert code == 0
    out = capsys.readouterr().out
    assert "slope outage_s1_analytical" in out
    rows = read_csv(tmp_path / "analysis.csv")
    assert {r[2] for r in rows} == {"outage_s1_analytical", "outage_s2_analytical"}
    assert all(r[5] == "analytical" and r[6] == "0" for r in rows)
    sidecar = json.loads((tmp_path / "analysis.json").read_text())
    assert sidecar["slopes"]["outage_s1_analytical"] == pytest.approx(-2.0, abs=1e-6)
    assert sidecar["slopes"]["outage_s2_analytical"] == pytest.approx(-3.0, abs=0.05)


def test_analysis_rejects_multibeam(capsys):
    assert run_cli("analysis", "--s1-size", "2") == 3
    assert "s1_size" in capsys.readouterr().err


def test_analysis_point_evaluations(tmp_path, capsys):
    code = run_cli("analysis", "--M", "2", "--ry", "0", "--eval", "0.08",
                   "-o", str(tmp_path))
    assert code == 0
    out = capsys.readouterr().out
    assert "prop1_cdf(0.08)" in out
    assert "lemma1_cdf(0.08) = 0.0076623838" in out
    assert "composite_cdf_gc(0.08)" in out
